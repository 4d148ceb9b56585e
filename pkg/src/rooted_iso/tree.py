"""Spherically homogeneous rooted trees and their finite truncations.

A tree is fixed by its valency sequence ``m = (m_1, ..., m_D)``: every vertex
at depth ``k`` has ``m_{k+1}`` children.  Vertices are words (tuples of ints)
with letter ``k`` drawn from ``range(m_{k+1})``.  Inside a layer, vertices are
indexed in lexicographic order, so the index of a word is its mixed-radix
value.
"""

from __future__ import annotations

import itertools
import json
import math
import os
from dataclasses import dataclass
from functools import cached_property

DEFAULT_BOUND = 10**7
BOUND_ENV = "ROOTED_ISO_BOUND"

Vertex = tuple  # tuple[int, ...]; () is the root


class CapacityError(RuntimeError):
    """An enumeration would exceed the configured bound."""

    def __init__(self, message: str, partial: int | None = None):
        super().__init__(message)
        self.partial = partial


class DepthError(ValueError):
    pass


def enumeration_bound() -> int:
    raw = os.environ.get(BOUND_ENV)
    if raw:
        return int(raw)
    return DEFAULT_BOUND


@dataclass(frozen=True)
class ValencySeq:
    m: tuple

    def __post_init__(self):
        m = tuple(int(x) for x in self.m)
        if any(x < 1 for x in m):
            raise ValueError(f"valencies must be positive, got {m}")
        object.__setattr__(self, "m", m)

    @classmethod
    def regular(cls, k: int, depth: int) -> "ValencySeq":
        return cls((k,) * depth)

    @property
    def max_depth(self) -> int:
        return len(self.m)

    def require_branching(self) -> None:
        """Group-action constructors need every level to actually branch."""
        if any(x < 2 for x in self.m):
            raise ValueError(f"group actions need valencies >= 2, got {self.m}")

    @cached_property
    def _sizes(self) -> tuple:
        sizes = [1]
        for x in self.m:
            sizes.append(sizes[-1] * x)
        return tuple(sizes)

    def layer_size(self, n: int) -> int:
        if not 0 <= n <= self.max_depth:
            raise DepthError(f"level {n} outside 0..{self.max_depth}")
        return self._sizes[n]

    def below(self, k: int, n: int) -> int:
        """Number of layer-``n`` descendants of a layer-``k`` vertex."""
        return self._sizes[n] // self._sizes[k]

    def truncate(self, n: int) -> "ValencySeq":
        if n > self.max_depth:
            raise DepthError(f"cannot truncate depth {self.max_depth} tree to {n}")
        return ValencySeq(self.m[:n])

    def check_vertex(self, v) -> Vertex:
        v = tuple(v)
        if len(v) > self.max_depth:
            raise DepthError(f"vertex {v} deeper than {self.max_depth}")
        for i, a in enumerate(v):
            if not 0 <= a < self.m[i]:
                raise ValueError(f"letter {a} at position {i} outside alphabet of size {self.m[i]}")
        return v

    def index(self, v: Vertex) -> int:
        """Lexicographic position of ``v`` inside its layer."""
        i = 0
        for k, a in enumerate(v):
            i = i * self.m[k] + a
        return i

    def word(self, n: int, index: int) -> Vertex:
        letters = []
        for k in range(n - 1, -1, -1):
            index, a = divmod(index, self.m[k])
            letters.append(a)
        return tuple(reversed(letters))

    # vertex words as strings, used by the JSON formats
    def _compact(self) -> bool:
        return max(self.m, default=0) <= 36

    def format_vertex(self, v: Vertex) -> str:
        if self._compact():
            return "".join(_DIGITS[a] for a in v)
        return ".".join(str(a) for a in v)

    def parse_vertex(self, s: str) -> Vertex:
        if s == "":
            return ()
        if self._compact():
            letters = tuple(int(c, 36) for c in s)
        else:
            letters = tuple(int(c) for c in s.split("."))
        return self.check_vertex(letters)

    def to_json(self) -> str:
        return json.dumps(list(self.m))

    @classmethod
    def from_json(cls, text: str) -> "ValencySeq":
        data = json.loads(text)
        if not isinstance(data, list) or not all(isinstance(x, int) for x in data):
            raise ValueError("valency sequence must be a JSON array of integers")
        return cls(tuple(data))


_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


def layer(vs: ValencySeq, n: int, bound: int | None = None) -> list:
    """All vertices of depth ``n`` in lexicographic order."""
    size = vs.layer_size(n)
    bound = enumeration_bound() if bound is None else bound
    if size > bound:
        raise CapacityError(f"layer {n} has {size} vertices, bound is {bound}")
    return list(itertools.product(*(range(x) for x in vs.m[:n])))


def children(vs: ValencySeq, v: Vertex) -> list:
    v = vs.check_vertex(v)
    if len(v) >= vs.max_depth:
        raise DepthError(f"vertex {v} is at maximum depth {vs.max_depth}")
    return [v + (a,) for a in range(vs.m[len(v)])]


def parent(v: Vertex) -> Vertex:
    if not v:
        raise ValueError("the root has no parent")
    return tuple(v[:-1])


def group_order_bound(vs: ValencySeq, n: int) -> int:
    """|Iso(T_n)|, the product of (m_k!)^(layer size)."""
    total = 1
    for k in range(n):
        total *= math.factorial(vs.m[k]) ** vs.layer_size(k)
    return total
