"""Exact rational generating functions from finite prefixes.

Berlekamp-Massey over Q finds the shortest linear recurrence of a sequence;
a recurrence of order L becomes P(t)/Q(t) with Q the connection polynomial
and P = Q * S mod t^L.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm


def berlekamp_massey(seq) -> tuple:
    """Return ``(C, L)``: connection polynomial coefficients ``C[0] = 1`` and linear complexity ``L``.

    ``sum(C[i] * s[n - i] for i in 0..L) == 0`` for every ``n >= L``.
    """
    s = [Fraction(x) for x in seq]
    C = [Fraction(1)]
    B = [Fraction(1)]
    L, shift, b = 0, 1, Fraction(1)
    for n in range(len(s)):
        d = s[n] + sum(C[i] * s[n - i] for i in range(1, L + 1) if i < len(C))
        if d == 0:
            shift += 1
            continue
        coef = d / b
        T = list(C)
        need = len(B) + shift
        if len(C) < need:
            C.extend([Fraction(0)] * (need - len(C)))
        for i, x in enumerate(B):
            C[i + shift] -= coef * x
        if 2 * L <= n:
            L, B, b, shift = n + 1 - L, T, d, 1
        else:
            shift += 1
    C = C[: L + 1] + [Fraction(0)] * max(0, L + 1 - len(C))
    return C, L


def _strip(poly) -> list:
    poly = list(poly)
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return poly


def fit_rational(seq) -> tuple:
    """``(P, Q, L)`` for the shortest recurrence of ``seq`` as exact Fractions."""
    C, L = berlekamp_massey(seq)
    Q = _strip(C)
    P = []
    for n in range(L):
        P.append(sum(Q[i] * Fraction(seq[n - i]) for i in range(min(n, len(Q) - 1) + 1)))
    return _strip(P or [Fraction(0)]), Q, L


def integer_coefficients(P, Q) -> tuple:
    """Scale P/Q to integer coefficients with Q(0) > 0."""
    den = lcm(*(Fraction(x).denominator for x in list(P) + list(Q)))
    Pi = [int(Fraction(x) * den) for x in P]
    Qi = [int(Fraction(x) * den) for x in Q]
    if Qi[0] < 0:
        Pi, Qi = [-x for x in Pi], [-x for x in Qi]
    g = 0
    for x in Pi + Qi:
        g = gcd(g, x)
    if g > 1:
        Pi, Qi = [x // g for x in Pi], [x // g for x in Qi]
    return Pi, Qi


def detect_rational(series):
    """Integer ``(P, Q)`` with sum c_n t^n = P/Q if a recurrence of order <= N/2 fits, else None.

    ``series`` is ``c_0..c_N``; at least five terms are required.
    """
    series = list(series)
    N = len(series) - 1
    if N < 4:
        raise ValueError("need at least c_0..c_4 to test for a recurrence")
    P, Q, L = fit_rational(series)
    if 2 * L > N:
        return None
    return integer_coefficients(P, Q)


def series_coefficients(P, Q, count: int) -> list:
    """First ``count`` Taylor coefficients of P/Q (Q[0] != 0)."""
    P = [Fraction(x) for x in P]
    Q = [Fraction(x) for x in Q]
    out = []
    for n in range(count):
        acc = P[n] if n < len(P) else Fraction(0)
        for i in range(1, min(n, len(Q) - 1) + 1):
            acc -= Q[i] * out[n - i]
        out.append(acc / Q[0])
    return out
