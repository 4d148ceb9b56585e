"""Concrete profinite group actions on rooted trees.

Each constructor returns a :class:`GroupSpec`: a tree, a finite list of
:class:`IsoGenerator` objects, and a JSON-friendly parameter block from which
the spec can be rebuilt.  The group acting on ``T_n`` is the closure of the
generators evaluated to depth ``n`` (see ``census.enumerate_group``).

Actions written naturally on the left (left multiplication on cosets, matrices
acting on column vectors) are turned into portraits element by element.  Under
the "first f, then g" product this is an anti-homomorphism, which changes
nothing about the generated group or its conjugacy classes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .isometry import IsoGenerator, identity_perm
from .padic import PadicInt, is_prime, least_primitive_root_mod_p2, one_unit_generator
from .tree import ValencySeq


class SpecError(ValueError):
    """Invalid parameters for a group constructor."""


@dataclass(frozen=True)
class GroupSpec:
    kind: str
    params: dict = field(compare=False)
    vs: ValencySeq
    generators: tuple = field(compare=False)

    @property
    def depth(self) -> int:
        return self.vs.max_depth

    def to_dict(self) -> dict:
        return {"kind": self.kind, **self.params}


# ---------------------------------------------------------------- finite groups

def cyclic_table(k: int) -> list:
    return [[(i + j) % k for j in range(k)] for i in range(k)]


def symmetric_table(k: int) -> list:
    """Sym(k) on its permutations in lexicographic order; entry [a][b] is a then b."""
    elems = list(itertools.permutations(range(k)))
    pos = {p: i for i, p in enumerate(elems)}
    return [[pos[tuple(b[x] for x in a)] for b in elems] for a in elems]


def check_table(table) -> int:
    """Validate a Cayley table, returning the index of the identity."""
    n = len(table)
    if n == 0 or any(len(row) != n for row in table):
        raise SpecError("Cayley table must be a non-empty square")
    rng = set(range(n))
    for row in table:
        if set(row) != rng:
            raise SpecError("Cayley table rows must be permutations")
    for j in range(n):
        if {table[i][j] for i in range(n)} != rng:
            raise SpecError("Cayley table columns must be permutations")
    ids = [e for e in range(n) if all(table[e][x] == x == table[x][e] for x in range(n))]
    if not ids:
        raise SpecError("Cayley table has no identity")
    for a, b, c in itertools.product(range(n), repeat=3):
        if table[table[a][b]][c] != table[a][table[b][c]]:
            raise SpecError(f"Cayley table is not associative at {(a, b, c)}")
    return ids[0]


def table_from_params(block) -> list:
    if "table" in block:
        return [list(map(int, row)) for row in block["table"]]
    if "cyclic" in block:
        return cyclic_table(int(block["cyclic"]))
    if "symmetric" in block:
        return symmetric_table(int(block["symmetric"]))
    raise SpecError(f"cannot build a finite group from {block!r}")


# ---------------------------------------------------------------- binary odometer

def _odometer_rule(v):
    return (1, 0) if all(a == 1 for a in v) else (0, 1)


def adding_machine(depth: int = 8) -> GroupSpec:
    """The binary adding machine: +1 on 2-adic digit strings, least significant first."""
    vs = ValencySeq.regular(2, depth)
    gen = IsoGenerator(vs, _odometer_rule, "adding_machine")
    return GroupSpec("adding_machine", {"depth": depth}, vs, (gen,))


def odometer_rule(shift: int):
    """Portrait rule of ``x -> x + shift`` on 2-adic integers (any integer shift)."""

    def rule(v):
        k = len(v)
        x = sum(a << i for i, a in enumerate(v))
        # letter k flips iff bit k of (prefix + shift) is set
        return (1, 0) if ((x + shift) >> k) & 1 else (0, 1)

    return rule


# ---------------------------------------------------------------- product powers

def _coordinate_rule(table, level: int, h: int):
    perm = tuple(table[h][x] for x in range(len(table)))
    ident = identity_perm(len(table))

    def rule(v):
        return perm if len(v) == level else ident

    return rule


def product_power(table, depth: int = 6, *, kind: str = "product_power", params=None) -> GroupSpec:
    """H^omega acting on |H|-ary words by left multiplication in each coordinate.

    The level-``n`` group is H^n; generators are single-coordinate embeddings
    of the non-identity elements of H.
    """
    e = check_table(table)
    k = len(table)
    if k < 2:
        raise SpecError("product_power needs a non-trivial group")
    vs = ValencySeq.regular(k, depth)
    gens = tuple(
        IsoGenerator(vs, _coordinate_rule(table, level, h), f"coord{level}:h{h}")
        for level in range(depth)
        for h in range(k)
        if h != e
    )
    if params is None:
        params = {"group": {"table": [list(r) for r in table]}, "depth": depth}
    return GroupSpec(kind, params, vs, gens)


def z2_power_binary(depth: int = 8) -> GroupSpec:
    """Z(2)^omega on the binary tree: carry-free addition of 0/1 sequences."""
    return product_power(cyclic_table(2), depth, kind="z2_power", params={"depth": depth})


def z2_power_element(bits) -> IsoGenerator:
    """The element of Z(2)^omega flipping letter ``k`` whenever ``bits[k]`` is 1."""
    bits = tuple(bits)
    vs = ValencySeq.regular(2, len(bits))

    def rule(v):
        return (1, 0) if bits[len(v)] else (0, 1)

    return IsoGenerator(vs, rule, "z2:" + "".join(map(str, bits)))


# ---------------------------------------------------------------- iterated wreath products

def iterated_wreath(levels, depth: int | None = None) -> GroupSpec:
    """Iterated wreath product of permutation groups P_1, P_2, ...

    ``levels`` is a list of ``(degree, generators)`` pairs; if ``depth``
    exceeds its length the last level repeats.  One generator is produced per
    (internal vertex, generator of its level's group).
    """
    levels = [(int(d), [tuple(map(int, g)) for g in gs]) for d, gs in levels]
    if not levels:
        raise SpecError("iterated_wreath needs at least one level")
    depth = len(levels) if depth is None else depth
    while len(levels) < depth:
        levels.append(levels[-1])
    levels = levels[:depth]
    for i, (deg, gs) in enumerate(levels):
        for g in gs:
            if len(g) != deg or sorted(g) != list(range(deg)):
                raise SpecError(f"level {i + 1}: {g} is not a permutation of degree {deg}")
    vs = ValencySeq(tuple(d for d, _ in levels))
    gens = []
    for k, (deg, gs) in enumerate(levels):
        for v in itertools.product(*(range(x) for x in vs.m[:k])):
            for g in gs:
                gens.append(IsoGenerator(vs, _single_vertex_rule(vs, v, g), f"{v}:{g}"))
    params = {
        "levels": [{"degree": d, "generators": [list(g) for g in gs]} for d, gs in levels],
        "depth": depth,
    }
    return GroupSpec("iterated_wreath", params, vs, tuple(gens))


def _single_vertex_rule(vs: ValencySeq, vertex, perm):
    vertex = tuple(vertex)

    def rule(v):
        if tuple(v) == vertex:
            return perm
        return identity_perm(vs.m[len(v)])

    return rule


def sym_generators(k: int) -> list:
    """A transposition and a k-cycle (or nothing for k = 1)."""
    if k == 1:
        return []
    if k == 2:
        return [(1, 0)]
    return [(1, 0) + tuple(range(2, k)), tuple(range(1, k)) + (0,)]


def full_wreath(k: int, depth: int) -> GroupSpec:
    """The full isometry group Iso(T_n) of the k-ary tree."""
    return iterated_wreath([(k, sym_generators(k))], depth)


def trivial_group(vs: ValencySeq) -> GroupSpec:
    return iterated_wreath([(d, []) for d in vs.m])


# ---------------------------------------------------------------- coset trees

def coset_tree(table, chain, generators=None) -> GroupSpec:
    """A finite group acting by left multiplication on cosets of a subgroup chain.

    ``chain`` lists element sets N_0 ⊇ N_1 ⊇ ... ⊇ N_k (N_0 = G is prepended
    if missing).  Level ``i`` vertices are the cosets gN_i; the children of a
    coset are the N_{i+1}-cosets inside it, lettered by their least element.
    """
    n = len(table)
    everything = frozenset(range(n))
    e = check_table(table)
    inv = [next(b for b in range(n) if table[a][b] == e) for a in range(n)]
    chain = [frozenset(int(x) for x in c) for c in chain]
    if not chain or chain[0] != everything:
        chain.insert(0, everything)
    for i, sub in enumerate(chain):
        if not sub or not all(table[a][b] in sub for a in sub for b in sub):
            raise SpecError(f"chain entry {i} is not a subgroup")
        if i and not sub <= chain[i - 1]:
            raise SpecError(f"chain entry {i} is not contained in entry {i - 1}")
        for g in range(n):
            if {table[table[g][h]][inv[g]] for h in sub} != sub:
                raise SpecError(f"chain entry {i} is not normal")

    def coset(g, i):
        return frozenset(table[g][h] for h in chain[i])

    # words for cosets, keyed by (level, coset), in lexicographic order
    words = {(0, coset(0, 0)): ()}
    levels = [[coset(0, 0)]]
    valency = []
    for i in range(len(chain) - 1):
        nxt = []
        deg = len(chain[i]) // len(chain[i + 1])
        valency.append(deg)
        for c in levels[-1]:
            subs = sorted({coset(g, i + 1) for g in c}, key=min)
            for a, s in enumerate(subs):
                words[i + 1, s] = words[i, c] + (a,)
                nxt.append(s)
        levels.append(nxt)
    vs = ValencySeq(tuple(valency))
    by_word = {w: c for (_, c), w in words.items()}

    def left_mult(x):
        def rule(v):
            k = len(v)
            kids = sorted({coset(g, k + 1) for g in by_word[tuple(v)]}, key=min)
            return tuple(words[k + 1, frozenset(table[x][g] for g in kid)][-1] for kid in kids)

        return rule

    if generators is None:
        generators = range(n)
    gens = tuple(IsoGenerator(vs, left_mult(int(x)), f"left:{x}") for x in generators)
    params = {
        "table": [list(r) for r in table],
        "chain": [sorted(c) for c in chain],
        "generators": [int(x) for x in generators],
    }
    return GroupSpec("coset_tree", params, vs, gens)


# ---------------------------------------------------------------- matrices over Z/p^n

def _entries(entries, q: int) -> tuple:
    flat = []
    for x in entries:
        if isinstance(x, (list, tuple)):
            flat.extend(x)
        else:
            flat.append(x)
    return tuple(int(x) % q for x in flat)


def mat_mul(a, b, d: int, q: int) -> tuple:
    return tuple(
        sum(a[i * d + k] * b[k * d + j] for k in range(d)) % q for i in range(d) for j in range(d)
    )


def mat_identity(d: int) -> tuple:
    return tuple(int(i == j) for i in range(d) for j in range(d))


def mat_pow(a, e: int, d: int, q: int) -> tuple:
    result, base = mat_identity(d), tuple(a)
    if e < 0:
        base, e = mat_inverse(base, d, q), -e
    while e:
        if e & 1:
            result = mat_mul(result, base, d, q)
        base = mat_mul(base, base, d, q)
        e >>= 1
    return result


def mat_det(a, d: int, q: int) -> int:
    if d == 1:
        return a[0] % q
    total = 0
    for j in range(d):
        minor = tuple(a[r * d + c] for r in range(1, d) for c in range(d) if c != j)
        total += (-1) ** j * a[j] * mat_det(minor, d - 1, q)
    return total % q


def mat_inverse(a, d: int, q: int) -> tuple:
    if d != 2:
        raise NotImplementedError("inverse only implemented for 2x2 matrices")
    det_inv = pow(mat_det(a, d, q), -1, q)
    a11, a12, a21, a22 = a
    return tuple(x * det_inv % q for x in (a22, -a12, -a21, a11))


def mat_vec(a, z, d: int, q: int) -> tuple:
    return tuple(sum(a[i * d + k] * z[k] for k in range(d)) % q for i in range(d))


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise SpecError(f"{p} is not prime")


def t_ad_matrix(p: int, d: int, entries, precision: int) -> IsoGenerator:
    """The isometry z + p^k Z_p^d -> Mz + p^k Z_p^d of the coset tree T_ad.

    A level-``k`` vertex is a word of ``k`` letters; letter ``i`` packs the
    ``i``-th p-adic digits of the ``d`` coordinates as ``sum_j digit_j p^j``.
    """
    _check_prime(p)
    q = p**precision
    a = _entries([x.residue if isinstance(x, PadicInt) else x for x in entries], q)
    if len(a) != d * d:
        raise SpecError(f"need {d * d} matrix entries, got {len(a)}")
    if mat_det(a, d, p) % p == 0:
        raise SpecError("matrix is not invertible mod p")
    vs = ValencySeq.regular(p**d, precision)
    digits = [tuple((c // p**j) % p for j in range(d)) for c in range(p**d)]

    def rule(v):
        k = len(v)
        z = [0] * d
        for i, c in enumerate(v):
            for j in range(d):
                z[j] += digits[c][j] * p**i
        out = []
        qk = p ** (k + 1)
        for c in range(p**d):
            zc = [z[j] + digits[c][j] * p**k for j in range(d)]
            y = mat_vec(a, zc, d, qk)
            out.append(sum(((y[j] // p**k) % p) * p**j for j in range(d)))
        return tuple(out)

    return IsoGenerator(vs, rule, f"M{a}")


def t_ad_vertex(p: int, d: int, z, k: int) -> tuple:
    """Word of the coset z + p^k Z_p^d."""
    return tuple(sum(((z[j] // p**i) % p) * p**j for j in range(d)) for i in range(k))


def t_ad_group(p: int, d: int, precision: int, matrices, family: str | None = None) -> GroupSpec:
    q = p**precision
    mats = [_entries(m, q) for m in matrices]
    gens = tuple(t_ad_matrix(p, d, m, precision) for m in mats)
    vs = ValencySeq.regular(p**d, precision)
    params = {"p": p, "d": d, "precision": precision, "matrices": [list(m) for m in mats]}
    if family:
        params["family"] = family
    return GroupSpec("t_ad_matrix", params, vs, gens)


def ut2(p: int, precision: int) -> GroupSpec:
    """Unitriangular 2x2 matrices; topologically generated by (1,1;0,1)."""
    return t_ad_group(p, 2, precision, [(1, 1, 0, 1)], family="UT2")


def sl2(p: int, precision: int) -> GroupSpec:
    """SL_2(Z/p^n), generated by the two elementary matrices."""
    return t_ad_group(p, 2, precision, [(1, 1, 0, 1), (1, 0, 1, 1)], family="SL2")


def sd2(p: int, precision: int) -> GroupSpec:
    """Diagonal (u, u^-1); u = t generates the units mod p^n."""
    q = p**precision
    t = least_primitive_root_mod_p2(p)
    return t_ad_group(p, 2, precision, [(t, 0, 0, pow(t, -1, q))], family="SD2")


def sd2_one_unit(z: int, p: int, precision: int) -> tuple:
    """The SD_2 matrix (l^z, l^-z) with l = t^(p-1)."""
    q = p**precision
    l = one_unit_generator(p) % q
    return (pow(l, z, q), 0, 0, pow(l, -z, q))


_FAMILIES = {"UT2": ut2, "SL2": sl2, "SD2": sd2}


# ---------------------------------------------------------------- Z_p cycle lengths

def zpl_cycle_length(orbit_size: int, s: int, p: int) -> int:
    """Cycle length of g^(p^s k), gcd(k, p) = 1, at a vertex whose <g>-orbit has ``orbit_size`` points."""
    e = 0
    x = orbit_size
    while x % p == 0:
        x //= p
        e += 1
    if x != 1:
        raise ValueError(f"orbit size {orbit_size} is not a power of {p}")
    return -(-orbit_size // p**s)


# ---------------------------------------------------------------- lattice tree

@dataclass(frozen=True)
class LatticeTree:
    """Projective points mod p^k, k = 0..n, rooted at the standard lattice.

    Level ``k`` vertices are the classes of primitive vectors u mod p^k under
    u ~ xu for units x.  Canonical representatives are (1, t) with t mod p^k
    (first letter t mod p) and (ps, 1) with s mod p^(k-1) (first letter p);
    further letters are the remaining p-adic digits of t or s.
    """

    p: int
    precision: int

    @property
    def vs(self) -> ValencySeq:
        return ValencySeq((self.p + 1,) + (self.p,) * (self.precision - 1))

    def representative(self, word) -> tuple:
        p, k = self.p, len(word)
        if k == 0:
            return (1, 0)
        if word[0] < p:
            return (1, sum(a * p**i for i, a in enumerate(word)))
        return (sum(a * p**i for i, a in enumerate(word[1:], start=1)), 1)

    def vertex(self, u, k: int) -> tuple:
        p = self.p
        if k == 0:
            return ()
        q = p**k
        u1, u2 = u[0] % q, u[1] % q
        if u1 % p:
            t = u2 * pow(u1, -1, q) % q
            return tuple((t // p**i) % p for i in range(k))
        if u2 % p == 0:
            raise ValueError(f"{u} is not primitive")
        s = u1 * pow(u2, -1, q) % q
        return (p,) + tuple((s // p**i) % p for i in range(1, k))

    def matrix_generator(self, entries) -> IsoGenerator:
        p = self.p
        a = _entries(entries, p**self.precision)
        if len(a) != 4 or mat_det(a, 2, p) % p == 0:
            raise SpecError("need an invertible 2x2 matrix mod p")
        vs = self.vs

        def rule(v):
            k = len(v)
            qk = p ** (k + 1)
            out = []
            for c in range(vs.m[k]):
                u = self.representative(tuple(v) + (c,))
                out.append(self.vertex(mat_vec(a, u, 2, qk), k + 1)[-1])
            return tuple(out)

        return IsoGenerator(vs, rule, f"PGL{a}")


def lattice_tree(p: int, precision: int) -> LatticeTree:
    _check_prime(p)
    if precision < 1:
        raise SpecError("precision must be at least 1")
    return LatticeTree(p, precision)


def lattice_group(p: int, precision: int, matrices) -> GroupSpec:
    lt = lattice_tree(p, precision)
    q = p**precision
    mats = [_entries(m, q) for m in matrices]
    gens = tuple(lt.matrix_generator(m) for m in mats)
    params = {"p": p, "precision": precision, "matrices": [list(m) for m in mats]}
    return GroupSpec("lattice_tree", params, lt.vs, gens)


# ---------------------------------------------------------------- JSON dispatch

def spec_from_dict(data: dict) -> GroupSpec:
    try:
        kind = data["kind"]
    except (KeyError, TypeError):
        raise SpecError("group spec needs a 'kind'") from None
    try:
        if kind == "adding_machine":
            return adding_machine(int(data.get("depth", 8)))
        if kind == "z2_power":
            return z2_power_binary(int(data.get("depth", 8)))
        if kind == "product_power":
            return product_power(table_from_params(data["group"]), int(data.get("depth", 6)))
        if kind == "iterated_wreath":
            if "full" in data:
                return full_wreath(int(data["full"]), int(data["depth"]))
            levels = [(lv["degree"], lv.get("generators", [])) for lv in data["levels"]]
            return iterated_wreath(levels, data.get("depth"))
        if kind == "trivial":
            return trivial_group(ValencySeq(tuple(data["valency"])))
        if kind == "coset_tree":
            table = data["table"] if "table" in data else table_from_params(data["group"])
            return coset_tree(table, data["chain"], data.get("generators"))
        if kind == "t_ad_matrix":
            p, prec = int(data["p"]), int(data["precision"])
            if "family" in data and "matrices" not in data:
                fam = _FAMILIES.get(data["family"])
                if fam is None:
                    raise SpecError(f"unknown matrix family {data['family']!r}")
                return fam(p, prec)
            return t_ad_group(p, int(data.get("d", 2)), prec, data["matrices"], data.get("family"))
        if kind == "lattice_tree":
            return lattice_group(int(data["p"]), int(data["precision"]), data["matrices"])
    except KeyError as exc:
        raise SpecError(f"{kind}: missing parameter {exc}") from None
    raise SpecError(f"unknown group kind {kind!r}")

