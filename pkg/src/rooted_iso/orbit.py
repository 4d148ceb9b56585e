"""Orbit trees, canonical codes, and conjugacy in the full isometry group.

The quotient ``T_n / <g>`` is a rooted tree whose nodes are the ``g``-cycles
on each layer, labelled by cycle length.  Two isometries of ``T_n`` are
conjugate in ``Iso(T_n)`` exactly when these labelled trees are isomorphic;
the canonical code below turns that into a byte-string comparison.

The quotient nodes could also carry the valency of their vertices, but at a
fixed depth of a spherically homogeneous tree that valency is a function of
the level, so codes leave it out.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .isometry import Portrait, ShapeError

_LABEL_BYTES = 8


@dataclass(frozen=True)
class OrbitNode:
    id: int
    level: int
    label: int
    parent: int | None
    base: int  # smallest layer index in the orbit
    children: tuple


@dataclass(frozen=True)
class OrbitTree:
    valency: tuple
    nodes: tuple
    layer_of: tuple  # layer_of[k][i] = node id of the orbit containing vertex i of layer k

    @property
    def root(self) -> OrbitNode:
        return self.nodes[0]

    @property
    def depth(self) -> int:
        return len(self.layer_of) - 1

    def level_nodes(self, k: int) -> list:
        return [nd for nd in self.nodes if nd.level == k]

    def level_labels(self, k: int) -> list:
        return sorted(nd.label for nd in self.nodes if nd.level == k)

    def to_dict(self) -> dict:
        return {
            "valency": list(self.valency),
            "nodes": [
                {"id": nd.id, "level": nd.level, "label": nd.label, "parent": nd.parent}
                for nd in self.nodes
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_dot(self) -> str:
        lines = ["digraph orbit_tree {", "  node [shape=circle];"]
        for nd in self.nodes:
            lines.append(f'  n{nd.id} [label="{nd.label}"];')
        for nd in self.nodes:
            if nd.parent is not None:
                lines.append(f"  n{nd.parent} -> n{nd.id};")
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class CanonCode:
    code: bytes

    @property
    def hex(self) -> str:
        return self.code.hex()

    @classmethod
    def from_hex(cls, text: str) -> "CanonCode":
        return cls(bytes.fromhex(text))


def orbit_tree(g: Portrait) -> OrbitTree:
    acts = g.actions
    m = g.vs.m
    layer_of = []
    raw = []  # (level, label, parent, base)
    for k, images in enumerate(acts):
        owner = [-1] * len(images)
        for start in range(len(images)):
            if owner[start] >= 0:
                continue
            nid = len(raw)
            x, n = start, 0
            while owner[x] < 0:
                owner[x] = nid
                x = images[x]
                n += 1
            par = layer_of[k - 1][start // m[k - 1]] if k else None
            raw.append((k, n, par, start))
        layer_of.append(tuple(owner))
    kids = [[] for _ in raw]
    for nid, (_, _, par, _) in enumerate(raw):
        if par is not None:
            kids[par].append(nid)
    nodes = tuple(
        OrbitNode(nid, lv, lab, par, base, tuple(kids[nid]))
        for nid, (lv, lab, par, base) in enumerate(raw)
    )
    return OrbitTree(tuple(m), nodes, tuple(layer_of))


def node_codes(t: OrbitTree) -> list:
    """Canonical byte code of the subtree under every node."""
    codes = [b""] * len(t.nodes)
    for nd in reversed(t.nodes):  # children always have larger ids
        body = b"".join(sorted(codes[c] for c in nd.children))
        codes[nd.id] = b"(" + nd.label.to_bytes(_LABEL_BYTES, "big") + body + b")"
    return codes


def canonical_code(t: OrbitTree) -> CanonCode:
    return CanonCode(node_codes(t)[0])


def conjugate_in_iso(g: Portrait, h: Portrait) -> bool:
    if g.vs != h.vs or g.depth != h.depth:
        raise ShapeError("portraits must share tree and depth")
    return canonical_code(orbit_tree(g)) == canonical_code(orbit_tree(h))


def find_conjugator(g: Portrait, h: Portrait) -> Portrait | None:
    """Some ``a`` with ``conjugate(g, a) == h``, or None if none exists.

    Orbit trees are matched top-down; children with equal codes are paired in
    (code, leftmost vertex) order.  Inside a matched pair of cycles the map
    sends ``g^i x`` to ``h^i y``.
    """
    if g.vs != h.vs or g.depth != h.depth:
        raise ShapeError("portraits must share tree and depth")
    tg, th = orbit_tree(g), orbit_tree(h)
    cg, ch = node_codes(tg), node_codes(th)
    if cg[0] != ch[0]:
        return None

    m = g.vs.m
    ga, ha = g.actions, h.actions
    image = [[-1] * len(row) for row in ga]
    image[0][0] = 0
    stack = [(0, 0, 0, 0)]  # (g node, h node, base vertex x, its image y)
    while stack:
        ng, nh, x, y = stack.pop()
        k = tg.nodes[ng].level
        if k == g.depth:
            continue
        mk = m[k]
        kids_g = sorted(tg.nodes[ng].children, key=lambda c: (cg[c], tg.nodes[c].base))
        kids_h = sorted(th.nodes[nh].children, key=lambda c: (ch[c], th.nodes[c].base))
        owner_g, owner_h = tg.layer_of[k + 1], th.layer_of[k + 1]
        gk, hk = ga[k + 1], ha[k + 1]
        for cgid, chid in zip(kids_g, kids_h):
            x1 = next(x * mk + a for a in range(mk) if owner_g[x * mk + a] == cgid)
            y1 = next(y * mk + a for a in range(mk) if owner_h[y * mk + a] == chid)
            u, w = x1, y1
            for _ in range(tg.nodes[cgid].label):
                image[k + 1][u] = w
                u, w = gk[u], hk[w]
            stack.append((cgid, chid, x1, y1))

    rows = []
    for k in range(g.depth):
        mk = m[k]
        up, down = image[k], image[k + 1]
        rows.append(tuple(
            tuple(down[i * mk + a] - up[i] * mk for a in range(mk)) for i in range(len(up))
        ))
    return Portrait(g.vs, g.depth, tuple(rows))
