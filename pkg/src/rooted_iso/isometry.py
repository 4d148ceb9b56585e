"""Isometries of truncated trees stored as permutation portraits.

Convention: ``compose(f, g)`` is the isometry "first ``f``, then ``g``", so
``apply(compose(f, g), v) == apply(g, apply(f, v))``.  With this order the
portrait of the product is read off vertex by vertex: the permutation at ``v``
is the permutation of ``f`` at ``v`` followed by that of ``g`` at the image of
``v`` under ``f``.  Everything else in the package (conjugation, group
closure, stabilizers) uses the same order; ``conjugate(g, a)`` is
``a^-1 g a`` read left to right.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

from .tree import DepthError, ValencySeq, Vertex, layer

Perm = tuple  # tuple[int, ...], images of 0..k-1


class ShapeError(ValueError):
    """Two portraits live on different trees or at different depths."""


class EvaluationError(RuntimeError):
    pass


def identity_perm(k: int) -> Perm:
    return tuple(range(k))


def perm_then(p: Perm, q: Perm) -> Perm:
    """``p`` followed by ``q``."""
    return tuple(q[x] for x in p)


def perm_inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def check_perm(p, k: int) -> Perm:
    p = tuple(int(x) for x in p)
    if len(p) != k or sorted(p) != list(range(k)):
        raise ValueError(f"{p} is not a permutation of {k} letters")
    return p


def cycle_lengths(images) -> list:
    """Cycle lengths of a permutation given as a sequence of images."""
    seen = bytearray(len(images))
    lengths = []
    for start in range(len(images)):
        if seen[start]:
            continue
        n = 0
        x = start
        while not seen[x]:
            seen[x] = 1
            x = images[x]
            n += 1
        lengths.append(n)
    return lengths


@dataclass(frozen=True, eq=False)
class Portrait:
    """An element of Iso(T_n): one permutation per internal vertex.

    ``perms[k][i]`` is the permutation at the ``i``-th vertex of layer ``k``
    (lexicographic order), acting on the ``m_{k+1}`` edges below it.
    """

    vs: ValencySeq
    depth: int
    perms: tuple

    def __post_init__(self):
        if self.depth > self.vs.max_depth:
            raise DepthError(f"depth {self.depth} exceeds tree depth {self.vs.max_depth}")
        if self.vs.max_depth != self.depth:
            object.__setattr__(self, "vs", self.vs.truncate(self.depth))
        if len(self.perms) != self.depth:
            raise ValueError("need one layer of permutations per level")
        for k, row in enumerate(self.perms):
            if len(row) != self.vs.layer_size(k):
                raise ValueError(f"layer {k} has {len(row)} permutations, expected {self.vs.layer_size(k)}")

    @classmethod
    def identity(cls, vs: ValencySeq, depth: int | None = None) -> "Portrait":
        depth = vs.max_depth if depth is None else depth
        perms = tuple(
            (identity_perm(vs.m[k]),) * vs.layer_size(k) for k in range(depth)
        )
        return cls(vs, depth, perms)

    @classmethod
    def from_perms(cls, vs: ValencySeq, depth: int, perms) -> "Portrait":
        """Validating constructor from nested lists."""
        rows = []
        for k in range(depth):
            rows.append(tuple(check_perm(p, vs.m[k]) for p in perms[k]))
        return cls(vs, depth, tuple(rows))

    @classmethod
    def from_vertex_map(cls, vs: ValencySeq, depth: int, labels: dict) -> "Portrait":
        """Portrait from ``{vertex: perm}``; missing vertices get the identity."""
        rows = []
        for k in range(depth):
            ident = identity_perm(vs.m[k])
            row = [ident] * vs.layer_size(k)
            rows.append(row)
        for v, p in labels.items():
            v = vs.check_vertex(v)
            if len(v) >= depth:
                raise DepthError(f"vertex {v} is not internal at depth {depth}")
            rows[len(v)][vs.index(v)] = check_perm(p, vs.m[len(v)])
        return cls(vs, depth, tuple(tuple(r) for r in rows))

    @classmethod
    def from_leaf_action(cls, vs: ValencySeq, depth: int, leaf) -> "Portrait":
        """Rebuild the portrait from the permutation it induces on layer ``depth``."""
        actions = _actions_from_leaf(vs, depth, leaf)
        rows = []
        for k in range(depth):
            mk = vs.m[k]
            up, down = actions[k], actions[k + 1]
            rows.append(tuple(
                tuple(down[i * mk + a] - up[i] * mk for a in range(mk))
                for i in range(len(up))
            ))
        g = cls(vs, depth, tuple(rows))
        g.__dict__["actions"] = actions
        return g

    @cached_property
    def actions(self) -> tuple:
        """``actions[k][i]``: layer-``k`` index of the image of vertex ``i``."""
        acts = [(0,)]
        for k in range(self.depth):
            mk = self.vs.m[k]
            up = acts[-1]
            row = self.perms[k]
            acts.append(tuple(
                up[i] * mk + row[i][a] for i in range(len(up)) for a in range(mk)
            ))
        return tuple(acts)

    @property
    def leaf_action(self) -> tuple:
        return self.actions[self.depth]

    def perm_at(self, v: Vertex) -> Perm:
        return self.perms[len(v)][self.vs.index(v)]

    def is_identity(self) -> bool:
        return all(p == tuple(range(len(p))) for row in self.perms for p in row)

    def __eq__(self, other):
        if not isinstance(other, Portrait):
            return NotImplemented
        return self.vs == other.vs and self.perms == other.perms

    def __hash__(self):
        return hash((self.vs.m, self.perms))

    def __repr__(self):
        return f"Portrait(m={list(self.vs.m)}, depth={self.depth}, leaf={list(self.leaf_action)})"

    # JSON
    def to_dict(self) -> dict:
        perms = {}
        for k in range(self.depth):
            for i, p in enumerate(self.perms[k]):
                perms[self.vs.format_vertex(self.vs.word(k, i))] = list(p)
        return {"valency": list(self.vs.m), "depth": self.depth, "perms": perms}

    @classmethod
    def from_dict(cls, data: dict) -> "Portrait":
        try:
            vs = ValencySeq(tuple(data["valency"]))
            depth = int(data.get("depth", vs.max_depth))
            raw = data["perms"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed portrait: {exc}") from None
        if depth > vs.max_depth:
            raise ValueError(f"depth {depth} exceeds valency sequence of length {vs.max_depth}")
        labels = {}
        for key, images in raw.items():
            labels[vs.parse_vertex(key)] = images
        g = cls.from_vertex_map(vs, depth, labels)
        return g

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Portrait":
        return cls.from_dict(json.loads(text))


def _actions_from_leaf(vs: ValencySeq, depth: int, leaf) -> tuple:
    leaf = tuple(leaf)
    if len(leaf) != vs.layer_size(depth):
        raise ValueError("leaf action has the wrong length")
    acts = []
    for k in range(depth):
        b = vs.below(k, depth)
        acts.append(tuple(leaf[i * b] // b for i in range(vs.layer_size(k))))
    acts.append(leaf)
    return tuple(acts)


def _same_shape(f: Portrait, g: Portrait) -> None:
    if f.vs != g.vs or f.depth != g.depth:
        raise ShapeError(f"shape mismatch: {f.vs.m}/{f.depth} vs {g.vs.m}/{g.depth}")


def apply(g: Portrait, v) -> Vertex:
    """Image of the vertex ``v``: letter ``k`` is moved by the permutation at the prefix of length ``k``."""
    v = tuple(v)
    if len(v) > g.depth:
        raise DepthError(f"vertex {v} deeper than portrait depth {g.depth}")
    g.vs.check_vertex(v)
    out = []
    idx = 0
    for k, a in enumerate(v):
        out.append(g.perms[k][idx][a])
        idx = idx * g.vs.m[k] + a
    return tuple(out)


def compose(f: Portrait, g: Portrait) -> Portrait:
    """``f`` then ``g``."""
    _same_shape(f, g)
    fa = f.actions
    rows = []
    for k in range(f.depth):
        frow, grow, fk = f.perms[k], g.perms[k], fa[k]
        rows.append(tuple(perm_then(frow[i], grow[fk[i]]) for i in range(len(frow))))
    return Portrait(f.vs, f.depth, tuple(rows))


def inverse(g: Portrait) -> Portrait:
    rows = []
    for k in range(g.depth):
        back = perm_inverse(g.actions[k])
        grow = g.perms[k]
        rows.append(tuple(perm_inverse(grow[back[i]]) for i in range(len(grow))))
    return Portrait(g.vs, g.depth, tuple(rows))


def conjugate(g: Portrait, a: Portrait) -> Portrait:
    """``a^-1 g a``: transports the cycles of ``g`` along ``a``."""
    return compose(inverse(a), compose(g, a))


def power(g: Portrait, e: int) -> Portrait:
    if e < 0:
        g, e = inverse(g), -e
    result = Portrait.identity(g.vs, g.depth)
    base = g
    while e:
        if e & 1:
            result = compose(result, base)
        base = compose(base, base)
        e >>= 1
    return result


def truncate(g: Portrait, k: int) -> Portrait:
    if not 0 <= k <= g.depth:
        raise DepthError(f"cannot truncate depth {g.depth} portrait to {k}")
    return Portrait(g.vs.truncate(k), k, g.perms[:k])


def order_at_level(g: Portrait) -> int:
    return math.lcm(*cycle_lengths(g.leaf_action)) if g.depth else 1


def order_sequence(g: Portrait) -> tuple:
    """(|pi_1(g)|, ..., |pi_n(g)|), the orders of the truncations."""
    return tuple(order_at_level(truncate(g, k)) for k in range(1, g.depth + 1))


def random_portrait(vs: ValencySeq, depth: int, rng: random.Random) -> Portrait:
    rows = []
    for k in range(depth):
        mk = vs.m[k]
        row = []
        for _ in range(vs.layer_size(k)):
            p = list(range(mk))
            rng.shuffle(p)
            row.append(tuple(p))
        rows.append(tuple(row))
    return Portrait(vs, depth, tuple(rows))


@dataclass(frozen=True)
class IsoGenerator:
    """A possibly infinitely deep isometry, given by a rule ``vertex -> perm``.

    Rules must be pure: the same vertex always yields the same permutation.
    """

    vs: ValencySeq
    rule: Callable = field(compare=False)
    name: str = ""

    def evaluate(self, d: int) -> Portrait:
        return evaluate(self, d)


def evaluate(gen: IsoGenerator, d: int) -> Portrait:
    if d > gen.vs.max_depth:
        raise DepthError(f"generator {gen.name!r} is defined to depth {gen.vs.max_depth}, asked for {d}")
    rows = []
    for k in range(d):
        mk = gen.vs.m[k]
        row = []
        for v in layer(gen.vs, k):
            try:
                p = gen.rule(v)
                row.append(check_perm(p, mk))
            except Exception as exc:
                raise EvaluationError(f"rule {gen.name!r} failed at vertex {v}: {exc}") from exc
        rows.append(tuple(row))
    return Portrait(gen.vs, d, tuple(rows))


def identity_generator(vs: ValencySeq) -> IsoGenerator:
    return IsoGenerator(vs, lambda v: identity_perm(vs.m[len(v)]), "identity")
