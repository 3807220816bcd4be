"""Classical expansions: eta, Eisenstein series, Delta, Jacobi theta functions and
the weak Jacobi form generators of weight -2, 0 (index 1) and -1 (index 2).

Theta conventions (q = e(tau), zeta = e(z))::

    theta_odd = sum_{r in Z+1/2} (-1)^(r-1/2) q^(r^2/2) zeta^r
    theta2    = sum_{r in Z+1/2}              q^(r^2/2) zeta^r
    theta3    = sum_{n in Z}                  q^(n^2/2) zeta^n
    theta4    = sum_{n in Z}          (-1)^n  q^(n^2/2) zeta^n

With these, ``theta_odd^2 / eta^6 = zeta - 2 + zeta^-1 + O(q)``, which is the
normalization of phi_{-2,1} used throughout.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import isqrt

from .bernoulli import bernoulli, sigma
from .series import BivariateQExpansion, QSeries, SeriesError, _frac, series_invert

GENERATOR_NAMES = (
    "eta", "E_k", "delta", "theta_odd", "theta2", "theta3", "theta4",
    "phi_0_1", "phi_m2_1", "phi_m1_2",
)


def _check_prec(prec) -> Fraction:
    prec = _frac(prec)
    if prec <= 0:
        raise SeriesError("truncation order must be positive")
    return prec


@lru_cache(maxsize=None)
def eta(prec) -> QSeries:
    """Dedekind eta via the pentagonal number theorem."""
    prec = _check_prec(prec)
    terms = {}
    j = 0
    while True:
        hit = False
        for jj in {j, -j}:
            e = Fraction(jj * (3 * jj - 1), 2) + Fraction(1, 24)
            if e < prec:
                terms[e] = (-1) ** (jj % 2)
                hit = True
        if not hit:
            break
        j += 1
    return QSeries.from_dict(terms, prec)


@lru_cache(maxsize=None)
def eisenstein(k: int, prec) -> QSeries:
    """Normalized E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n, k even >= 2."""
    prec = _check_prec(prec)
    if k < 2 or k % 2:
        raise SeriesError(f"E_k needs an even weight k >= 2, got {k}")
    factor = -Fraction(2 * k) / bernoulli(k)
    terms = {0: 1}
    n = 1
    while n < prec:
        terms[n] = factor * sigma(n, k - 1)
        n += 1
    return QSeries.from_dict(terms, prec)


@lru_cache(maxsize=None)
def delta(prec) -> QSeries:
    """Discriminant (E4^3 - E6^2) / 1728."""
    prec = _check_prec(prec)
    e4, e6 = eisenstein(4, prec), eisenstein(6, prec)
    return (e4 * e4 * e4 - e6 * e6).scale(Fraction(1, 1728))


def _theta(prec: Fraction, half: bool, signed: bool) -> BivariateQExpansion:
    terms = {}
    bound = isqrt(int(2 * prec) + 2) + 2
    for j in range(-bound, bound + 1):
        r = Fraction(2 * j + 1, 2) if half else Fraction(j)
        e = r * r / 2
        if e < prec:
            terms[(e, r)] = (-1) ** (j % 2) if signed else 1
    return BivariateQExpansion.from_dict(terms, prec)


@lru_cache(maxsize=None)
def theta_odd(prec) -> BivariateQExpansion:
    return _theta(_check_prec(prec), half=True, signed=True)


@lru_cache(maxsize=None)
def theta2(prec) -> BivariateQExpansion:
    return _theta(_check_prec(prec), half=True, signed=False)


@lru_cache(maxsize=None)
def theta3(prec) -> BivariateQExpansion:
    return _theta(_check_prec(prec), half=False, signed=False)


@lru_cache(maxsize=None)
def theta4(prec) -> BivariateQExpansion:
    return _theta(_check_prec(prec), half=False, signed=True)


def _as_biv(s: QSeries) -> BivariateQExpansion:
    return BivariateQExpansion.from_qseries(s)


@lru_cache(maxsize=None)
def phi_m2_1(prec) -> BivariateQExpansion:
    """Weak Jacobi form of weight -2, index 1: theta_odd^2 / eta^6."""
    prec = _check_prec(prec)
    # eta^-6 has valuation -1/4, so the numerator needs 1/4 extra precision
    work = prec + Fraction(1, 4)
    th = theta_odd(work)
    inv = series_invert(eta(work + Fraction(1, 4)) ** 6)
    out = th * th * _as_biv(inv)
    return _truncate(out, prec)


@lru_cache(maxsize=None)
def phi_0_1(prec) -> BivariateQExpansion:
    """Weak Jacobi form of weight 0, index 1: 4 sum_i theta_i(z)^2 / theta_i(0)^2."""
    prec = _check_prec(prec)
    work = prec + Fraction(1, 2)
    total = None
    for th in (theta2(work), theta3(work), theta4(work)):
        sq = th * th
        part = sq * _as_biv(series_invert(th.at_zeta_one() ** 2))
        total = part if total is None else total + part
    return _truncate(total.scale(4), prec)


@lru_cache(maxsize=None)
def phi_m1_2(prec) -> BivariateQExpansion:
    """Weak Jacobi form of weight -1, index 2: theta_odd(tau, 2z) / eta^3."""
    prec = _check_prec(prec)
    work = prec + Fraction(1, 8)
    th = theta_odd(work).zeta_power(2)
    inv = series_invert(eta(work + Fraction(1, 8)) ** 3)
    return _truncate(th * _as_biv(inv), prec)


def _truncate(s: BivariateQExpansion, prec: Fraction) -> BivariateQExpansion:
    if s.prec < prec:
        raise SeriesError(f"internal precision loss: {s.prec} < {prec}")
    terms = {key: v for key, v in s.terms().items() if key[0] < prec}
    return BivariateQExpansion.from_dict(terms, prec)


def generator(name: str, prec, k: int | None = None):
    """Expansion of a named classical generator to truncation order ``prec``."""
    prec = _check_prec(prec)
    if name == "E_k":
        if k is None:
            raise SeriesError("E_k needs a weight")
        return eisenstein(k, prec)
    table = {
        "eta": eta, "delta": delta, "theta_odd": theta_odd, "theta2": theta2,
        "theta3": theta3, "theta4": theta4, "phi_0_1": phi_0_1,
        "phi_m2_1": phi_m2_1, "phi_m1_2": phi_m1_2,
    }
    if name.startswith("E") and name[1:].isdigit():
        return eisenstein(int(name[1:]), prec)
    if name not in table:
        raise SeriesError(f"unknown generator {name!r}")
    return table[name](prec)
