"""Level groups, conjugacy-class censuses and growth probes.

``enumerate_group`` closes the generators of a spec at a given depth.  The hot loop
works on leaf actions (tuples of layer-``n`` images), which determine a
portrait uniquely; portraits are materialised once at the end.
"""

from __future__ import annotations

import csv
import io
import json
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .groups import GroupSpec
from .isometry import Portrait, ShapeError, evaluate, truncate
from .orbit import canonical_code, orbit_tree
from .recurrence import detect_rational
from .tree import CapacityError, ValencySeq, enumeration_bound


@dataclass(frozen=True)
class LevelGroup:
    vs: ValencySeq
    depth: int
    elements: tuple
    provenance: str = ""

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g):
        return g.leaf_action in self.keys

    @property
    def keys(self) -> frozenset:
        cached = self.__dict__.get("_keys")
        if cached is None:
            cached = frozenset(g.leaf_action for g in self.elements)
            self.__dict__["_keys"] = cached
        return cached

    def subset(self, elements, provenance: str) -> "LevelGroup":
        return LevelGroup(self.vs, self.depth, tuple(elements), provenance)


def _closure(vs: ValencySeq, n: int, gens, bound: int) -> list:
    ident = tuple(range(vs.layer_size(n)))
    gens = [g for g in dict.fromkeys(gens) if g != ident]
    seen = {ident}
    order = [ident]
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = tuple([s[i] for i in x])  # x then s
            if y not in seen:
                if len(seen) >= bound:
                    raise CapacityError(
                        f"level-{n} group exceeds enumeration bound {bound}", partial=len(seen)
                    )
                seen.add(y)
                order.append(y)
                queue.append(y)
    return order


def generator_actions(spec: GroupSpec, n: int) -> list:
    return [evaluate(g, n).leaf_action for g in spec.generators]


def enumerate_group(spec: GroupSpec, n: int, bound: int | None = None) -> LevelGroup:
    """The image of the group generated by ``spec`` in Iso(T_n), by breadth-first closure."""
    bound = enumeration_bound() if bound is None else bound
    vs = spec.vs.truncate(n)
    if vs.layer_size(n) > bound:
        raise CapacityError(f"layer {n} has {vs.layer_size(n)} vertices, bound is {bound}", partial=0)
    leaves = _closure(vs, n, generator_actions(spec, n), bound)
    elements = tuple(Portrait.from_leaf_action(vs, n, x) for x in leaves)
    return LevelGroup(vs, n, elements, f"{spec.kind} closure at level {n}")


def _code_of(args):
    m, n, leaf = args
    g = Portrait.from_leaf_action(ValencySeq(m), n, leaf)
    return canonical_code(orbit_tree(g)).code


def iso_codes(lg: LevelGroup, workers: int = 1) -> list:
    """Canonical code of every element, in element order."""
    if workers <= 1 or len(lg) < 2048:
        return [canonical_code(orbit_tree(g)).code for g in lg]
    jobs = [(lg.vs.m, lg.depth, g.leaf_action) for g in lg]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_code_of, jobs, chunksize=512))


@dataclass
class CensusResult:
    series: list
    representatives: list  # representatives[n] = one Portrait per class at level n
    mode: str
    fitted: tuple | None = None
    spec: dict = field(default_factory=dict)
    gamma: dict | None = None

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["level", "c_n"])
        for n, c in enumerate(self.series):
            w.writerow([n, c])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "spec": self.spec,
            "gamma": self.gamma,
            "series": list(self.series),
            "fitted": None if self.fitted is None else {
                "numerator": list(self.fitted[0]),
                "denominator": list(self.fitted[1]),
            },
            "representatives": [[g.to_dict() for g in reps] for reps in self.representatives],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _fit(series):
    return detect_rational(series) if len(series) >= 5 else None


def census_iso(spec: GroupSpec, N: int, bound: int | None = None, workers: int = 1) -> CensusResult:
    """c_n = number of Iso(T_n)-conjugacy classes meeting the level-n group, n = 0..N."""
    series, reps = [], []
    for n in range(N + 1):
        lg = enumerate_group(spec, n, bound)
        first = {}
        for g, code in zip(lg, iso_codes(lg, workers)):
            first.setdefault(code, g)
        series.append(len(first))
        reps.append([first[c] for c in sorted(first)])
    return CensusResult(series, reps, "iso", _fit(series), spec.to_dict())


def gamma_classes(lg: LevelGroup, gamma_gens) -> list:
    """Partition ``lg`` into orbits under conjugation by the group generated by ``gamma_gens``.

    Returns one list of elements per class.  Conjugates falling outside the
    level group are followed too, since a class meets G wherever it meets it.
    """
    members = {g.leaf_action: g for g in lg}
    gam = [a for a in dict.fromkeys(gamma_gens)]
    gam_inv = []
    for a in gam:
        inv = [0] * len(a)
        for i, x in enumerate(a):
            inv[x] = i
        gam_inv.append(tuple(inv))
    visited = set()
    classes = []
    for g in lg:
        key = g.leaf_action
        if key in visited:
            continue
        visited.add(key)
        cls = [g]
        queue = deque([key])
        while queue:
            x = queue.popleft()
            for a, ainv in zip(gam, gam_inv):
                y = tuple([a[x[j]] for j in ainv])  # a^-1, then x, then a
                if y not in visited:
                    visited.add(y)
                    queue.append(y)
                    if y in members:
                        cls.append(members[y])
        classes.append(cls)
    return classes


def census_gamma(spec: GroupSpec, gamma_spec: GroupSpec, N: int, bound: int | None = None) -> CensusResult:
    """c_n = number of Gamma_n-conjugacy classes meeting G_n, n = 0..N."""
    series, reps = [], []
    for n in range(N + 1):
        lg = enumerate_group(spec, n, bound)
        if gamma_spec.vs.truncate(n) != lg.vs:
            raise ShapeError("group and Gamma act on different trees")
        classes = gamma_classes(lg, generator_actions(gamma_spec, n))
        series.append(len(classes))
        reps.append([c[0] for c in classes])
    return CensusResult(series, reps, "gamma", _fit(series), spec.to_dict(), gamma_spec.to_dict())


@dataclass(frozen=True)
class ProbeReport:
    series: tuple
    ratios: tuple
    growth: str  # constant, affine, superlinear, superexponential
    verdict: str  # candidate-small / candidate-large
    heuristic: bool = True

    def summary(self) -> str:
        return (
            f"c_n = {list(self.series)}; growth {self.growth}; "
            f"{self.verdict} (heuristic: finite data cannot decide smallness)"
        )

    def to_dict(self) -> dict:
        return {
            "series": list(self.series),
            "ratios": [str(r) for r in self.ratios],
            "growth": self.growth,
            "verdict": self.verdict,
            "heuristic": self.heuristic,
        }


def classify_growth(series) -> tuple:
    s = list(series)
    if len(s) < 4:
        raise ValueError("need at least c_0..c_3 to judge growth")
    ratios = tuple(Fraction(b, a) for a, b in zip(s, s[1:]))
    tail = s[1:]
    d1 = [b - a for a, b in zip(tail, tail[1:])]
    d2 = [b - a for a, b in zip(d1, d1[1:])]
    if all(x == 0 for x in d1):
        growth = "constant"
    elif all(x == 0 for x in d2):
        growth = "affine"
    elif all(b > a for a, b in zip(ratios[1:], ratios[2:])) and ratios[-1] > 2:
        growth = "superexponential"
    else:
        growth = "superlinear"
    verdict = "candidate-small" if growth in ("constant", "affine") else "candidate-large"
    return ratios, growth, verdict


def smallness_probe(spec: GroupSpec, N: int, bound: int | None = None) -> ProbeReport:
    """Heuristic growth check of the class counts c_0..c_N."""
    series = census_iso(spec, N, bound).series
    ratios, growth, verdict = classify_growth(series)
    return ProbeReport(tuple(series), ratios, growth, verdict)


def level_stabilizer(lg: LevelGroup, k: int) -> LevelGroup:
    """Elements acting trivially on T_k (the kernel of truncation to depth k)."""
    if not 0 <= k <= lg.depth:
        raise ValueError(f"level {k} outside 0..{lg.depth}")
    ident = tuple(range(lg.vs.layer_size(k)))
    return lg.subset([g for g in lg if g.actions[k] == ident], f"St({k})")


def rigid_stabilizer(lg: LevelGroup, v) -> LevelGroup:
    """Elements fixing every vertex outside the subtree at ``v``."""
    v = lg.vs.check_vertex(v)
    if len(v) > lg.depth:
        raise ValueError(f"vertex {v} below depth {lg.depth}")
    b = lg.vs.below(len(v), lg.depth)
    lo = lg.vs.index(v) * b
    hi = lo + b
    keep = []
    for g in lg:
        leaf = g.leaf_action
        if all(leaf[i] == i for i in range(lo)) and all(leaf[i] == i for i in range(hi, len(leaf))):
            keep.append(g)
    return lg.subset(keep, f"Rs({v})")


def rigid_level_stabilizer(lg: LevelGroup, k: int) -> LevelGroup:
    """Subgroup generated by the rigid stabilizers of all layer-``k`` vertices."""
    gens = []
    for i in range(lg.vs.layer_size(k)):
        gens.extend(g.leaf_action for g in rigid_stabilizer(lg, lg.vs.word(k, i)))
    leaves = _closure(lg.vs, lg.depth, gens, enumeration_bound())
    return lg.subset([Portrait.from_leaf_action(lg.vs, lg.depth, x) for x in leaves], f"Rs(level {k})")


def restrict(lg: LevelGroup, k: int) -> LevelGroup:
    """Image of ``lg`` under truncation to depth ``k``."""
    seen = {}
    for g in lg:
        t = truncate(g, k)
        seen.setdefault(t.leaf_action, t)
    return LevelGroup(lg.vs.truncate(k), k, tuple(seen.values()), f"restriction to level {k}")
