"""The psi functions and the vanishing-order inequality for Jacobi forms of even weight."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from ..jacobi import JacobiFormQExp, order_of


def prime_divisors(u: int) -> list[int]:
    out, p = [], 2
    while p * p <= u:
        if u % p == 0:
            out.append(p)
            while u % p == 0:
                u //= p
        p += 1
    if u > 1:
        out.append(u)
    return out


def psi_j(j: int, u: int) -> Fraction:
    """prod_{p | u} (1 - p^{-j}), with psi_j(1) = 1."""
    if j < 1 or u < 1:
        raise ValueError("psi_j needs j >= 1 and u >= 1")
    out = Fraction(1)
    for p in prime_divisors(u):
        out *= 1 - Fraction(1, p ** j)
    return out


def psi(t: int) -> Fraction:
    """t^2 psi_2(t) for t = 2 and t^2 psi_2(t) / 2 for t >= 3."""
    if t < 2:
        raise ValueError("psi is defined for t >= 2")
    val = t * t * psi_j(2, t)
    return val if t == 2 else val / 2


def t_condition_sides(t: int, k: int, m: int, mu) -> tuple[Fraction, Fraction]:
    """Both sides of the condition defining the t-sum."""
    mu = Fraction(mu)
    left = Fraction(0)
    for c in range(t):
        gap = mu - Fraction(m * c * (t - c), t * t)
        if gap > 0:
            left += psi_j(1, gcd(t, c)) * gap
    return left, Fraction(k * t, 12) * psi_j(2, t)


@dataclass
class OrderInequalityReport:
    k: int
    m: int
    mu: int
    t_max: int
    lhs: Fraction
    rhs: Fraction = Fraction(0)
    ts: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.lhs >= self.rhs


def order_inequality_bound(k: int, m: int, mu: int, t_max: int = 50) -> OrderInequalityReport:
    """Evaluate min(m, m - 6 mu + k/2) against the sum of psi(t) over 2 <= t <= t_max."""
    if k % 2:
        raise ValueError("the inequality is stated for even weight only")
    lhs = min(Fraction(m), m - 6 * Fraction(mu) + Fraction(k, 2))
    rep = OrderInequalityReport(k, m, mu, t_max, lhs)
    for t in range(2, t_max + 1):
        left, right = t_condition_sides(t, k, m, mu)
        if left > right:
            rep.ts.append(t)
            rep.rhs += psi(t)
    return rep


def aoki_inequality_check(phi: JacobiFormQExp, t_max: int = 50) -> OrderInequalityReport:
    """Check the inequality for ``phi`` with mu = ord(phi); ``passed`` on the report."""
    if phi.weight % 2:
        raise ValueError("the inequality is stated for even weight only")
    if phi.index < 1:
        raise ValueError("index must be positive")
    if phi.is_zero():
        raise ValueError("phi must be nonzero")
    return order_inequality_bound(phi.weight, phi.index, int(order_of(phi)), t_max)


def truncation_threshold(k: int, N: int) -> int:
    """floor(N k / 6): J_{k, N nu}(nu) vanishes for nu beyond it."""
    if k < 1 or N < 1:
        raise ValueError("k and N must be positive")
    return (N * k) // 6
