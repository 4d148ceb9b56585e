"""Truncated p-adic integers and the unit decomposition Z_p^x = mu_{p-1} x (1 + pZ_p)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


def valuation(x: int, p: int, cap: int | None = None) -> int | None:
    """p-adic valuation of an integer; None for zero (or for x = 0 mod p^cap)."""
    if cap is not None:
        x %= p**cap
    if x == 0:
        return None
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


@dataclass(frozen=True)
class PadicInt:
    """An element of Z_p / p^n Z_p."""

    p: int
    n: int
    residue: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("precision must be at least 1")
        object.__setattr__(self, "residue", self.residue % self.modulus)

    @property
    def modulus(self) -> int:
        return self.p**self.n

    def _coerce(self, other) -> int:
        if isinstance(other, PadicInt):
            if (other.p, other.n) != (self.p, self.n):
                raise ValueError("p-adic operands have different prime or precision")
            return other.residue
        if isinstance(other, int):
            return other
        return NotImplemented

    def _new(self, r: int) -> "PadicInt":
        return PadicInt(self.p, self.n, r)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.residue + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.residue - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(o - self.residue)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.residue * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-self.residue)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return self._new(pow(self.residue, e, self.modulus))

    def is_unit(self) -> bool:
        return self.residue % self.p != 0

    def inverse(self) -> "PadicInt":
        if not self.is_unit():
            raise ZeroDivisionError(f"{self.residue} is not a unit mod {self.p}^{self.n}")
        return self._new(pow(self.residue, -1, self.modulus))

    def valuation(self) -> int | None:
        """``v_p`` of the residue, or None when it is 0 mod p^n."""
        return valuation(self.residue, self.p)

    def digits(self) -> list:
        r, out = self.residue, []
        for _ in range(self.n):
            r, d = divmod(r, self.p)
            out.append(d)
        return out

    def __int__(self):
        return self.residue


@lru_cache(maxsize=None)
def least_primitive_root_mod_p2(p: int) -> int:
    """Least t generating (Z/p^2)^x; such t generates (Z/p^k)^x for all k (p odd)."""
    if p == 2 or not is_prime(p):
        raise ValueError(f"need an odd prime, got {p}")
    q = p * p
    phi = p * (p - 1)
    factors = [f for f in range(2, phi + 1) if phi % f == 0 and is_prime(f)]
    for t in range(2, q):
        if t % p and all(pow(t, phi // f, q) != 1 for f in factors):
            return t
    raise AssertionError("no primitive root found")


def one_unit_generator(p: int) -> int:
    """l = t^(p-1), a topological generator of 1 + pZ_p."""
    return pow(least_primitive_root_mod_p2(p), p - 1)


def teichmuller(u: int, p: int, n: int) -> int:
    """The (p-1)-th root of unity congruent to u mod p, computed mod p^n."""
    q = p**n
    x = u % q
    for _ in range(n):
        x = pow(x, p, q)
    return x


class UnitDecomposition(NamedTuple):
    j: int  # eps = teichmuller(t^j), t the fixed primitive root
    epsilon: int
    z: int  # u = eps * l^z mod p^n, 0 <= z < p^(n-1)


def unit_decompose(u, n: int | None = None, p: int | None = None) -> UnitDecomposition:
    """Write a unit as ``eps_j * l^z`` with ``eps_j`` a root of unity and ``l = t^(p-1)``."""
    if isinstance(u, PadicInt):
        p = u.p if p is None else p
        n = u.n if n is None else n
        u = u.residue
    if p is None or n is None:
        raise ValueError("prime and precision are required for integer input")
    if p == 2:
        raise ValueError("p = 2 is not supported")
    if u % p == 0:
        raise ValueError(f"{u} is not a unit mod {p}")
    q = p**n
    t = least_primitive_root_mod_p2(p)
    j = next(i for i in range(p - 1) if pow(t, i, p) == u % p)
    eps = teichmuller(u, p, n)
    w = u * pow(eps, -1, q) % q  # a 1-unit
    l = one_unit_generator(p) % q
    # solve l^z = w one p-adic digit at a time
    z = 0
    for i in range(n - 1):
        rest = w * pow(l, -z, q) % q
        step = pow(l, p**i, q)  # = 1 + (unit) p^(i+1)
        num = (rest - 1) // p ** (i + 1) % p
        den = (step - 1) // p ** (i + 1) % p
        z += (num * pow(den, -1, p) % p) * p**i
    if w * pow(l, -z, q) % q != 1 % q:
        raise AssertionError("discrete log failed")
    return UnitDecomposition(j, eps, z)
