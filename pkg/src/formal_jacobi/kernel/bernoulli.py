"""Exact Bernoulli numbers and divisor sums."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb


@lru_cache(maxsize=None)
def bernoulli_table(nmax: int) -> tuple[Fraction, ...]:
    """``(B_0, ..., B_nmax)`` with the convention ``B_1 = -1/2``.

    Uses the recurrence ``sum_{j=0}^{m} C(m+1, j) B_j = 0`` for ``m >= 1``.
    """
    if nmax < 0:
        raise ValueError("nmax must be non-negative")
    b = [Fraction(1)]
    for m in range(1, nmax + 1):
        if m > 1 and m % 2:
            b.append(Fraction(0))
            continue
        acc = sum(comb(m + 1, j) * b[j] for j in range(m))
        b.append(-acc / (m + 1))
    return tuple(b)


def bernoulli(n: int) -> Fraction:
    return bernoulli_table(n)[n]


def zeta_one_minus(k: int) -> Fraction:
    """Riemann zeta at ``1 - k`` for ``k >= 2``: ``-B_k / k``."""
    if k < 2:
        raise ValueError("zeta(1-k) is only tabulated for k >= 2")
    return -bernoulli(k) / k


def sigma(n: int, k: int) -> int:
    """Divisor power sum ``sum_{d | n} d^k``."""
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d**k
            e = n // d
            if e != d:
                total += e**k
        d += 1
    return total
