"""Restriction of Fourier-Jacobi parts to the line z = x tau + y."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..formal import TruncatedFormalSeries
from ..jacobi import WindowError
from . import _kernels
from .numeric import float_table


@dataclass(frozen=True)
class SpecializationDatum:
    """Rational point (x, y) with D = Denom(x); requires N | D and y D integral."""

    x: Fraction
    y: Fraction
    N: int = 1

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))
        if self.N < 1:
            raise ValueError("level must be positive")
        if self.D % self.N:
            raise ValueError(f"level {self.N} does not divide Denom(x) = {self.D}")
        if (self.y * self.D).denominator != 1:
            raise ValueError(f"y Denom(x) = {self.y * self.D} is not an integer")

    @property
    def D(self) -> int:
        return self.x.denominator


@dataclass
class SpecializedSeries:
    """a(v; f_m) for 0 < v <= vmax, v in (1/D^2) Z, with the Lambda-set sizes."""

    m: int
    datum: SpecializationDatum
    vmax: Fraction
    coeffs: dict = field(default_factory=dict)
    lambda_sizes: dict = field(default_factory=dict)

    def lambda_bound_ok(self) -> bool:
        NmN = self.datum.N * self.m
        return all(size <= 4 * math.sqrt(NmN * v) + 1 for v, size in self.lambda_sizes.items())


def _root_of_unity(t: Fraction) -> complex:
    t = t - math.floor(t)
    return cmath.exp(2j * math.pi * t.numerator / t.denominator)


def lambda_set(Nm: int, x: Fraction, v: Fraction) -> list[tuple[int, int]]:
    """{(n, l) : N m x^2 + x l + n = v, 4 N m n > l^2}."""
    if v <= 0:
        return []
    # (l + 2 N m x)^2 < 4 N m v bounds l
    c = 2 * Nm * x
    w = math.isqrt(int(4 * Nm * v)) + 1
    out = []
    for l in range(math.floor(-c) - w, math.ceil(-c) + w + 1):
        n = v - Nm * x * x - x * l
        if n.denominator != 1:
            continue
        n = int(n)
        if 4 * Nm * n > l * l:
            out.append((n, l))
    return out


def specialize(f: TruncatedFormalSeries, s: SpecializationDatum, m: int, vmax) -> SpecializedSeries:
    """Coefficients of f_m(tau) = e(N m x^2 tau) phi_m(tau, x tau + y)."""
    if s.N != f.level:
        raise ValueError("specialization datum level differs from the series level")
    if not 1 <= m <= f.depth:
        raise WindowError(f"part {m} outside 1..{f.depth}")
    vmax = Fraction(vmax)
    phi = f.parts[m]
    Nm = f.level * m
    D2 = s.D * s.D
    out = SpecializedSeries(m, s, vmax)
    for j in range(1, int(vmax * D2) + 1):
        v = Fraction(j, D2)
        lam = lambda_set(Nm, s.x, v)
        out.lambda_sizes[v] = len(lam)
        total = 0j
        for n, l in lam:
            if n >= phi.prec:
                raise WindowError(f"coefficient c({n}, {l}) of part {m} is beyond prec {phi.prec}")
            c = phi.coefficient(n, l)
            if c:
                total += _root_of_unity(s.y * l) * float(c)
        if total != 0:
            out.coeffs[v] = total
    return out


def specialization_hb_integrand(f: TruncatedFormalSeries, s: SpecializationDatum, m: int, taus) -> np.ndarray:
    """v^{k/2} |f_m(tau)|, which equals the Jacobi Hecke integrand at (tau, x tau + y)."""
    phi = f.parts[m]
    taus = np.asarray(taus, dtype=np.complex128)
    zs = float(s.x) * taus + float(s.y)
    T = float_table(phi)
    t, z = _kernels.reduce_points(taus, zs)
    vals = np.abs(_kernels.fourier_sum(T, phi.rmax, t, z))
    v, y = t.imag, z.imag
    return v ** (phi.weight / 2) * np.exp(-2 * np.pi * phi.index * y * y / v) * vals


def specialization_hecke_bound(f: TruncatedFormalSeries, s: SpecializationDatum, m: int,
                               n_re: int = 96, n_im: int = 48, im_range: tuple = (0.04, 4.0)) -> float:
    """Grid estimate of HB(f_m) = sup v^{k/2} |f_m(tau)|.

    tau runs over Re in [0, D^2), a period of f_m, and log-spaced heights.
    """
    width = s.D * s.D
    x = np.linspace(0.0, width, n_re * width, endpoint=False)
    v = np.geomspace(*im_range, n_im)
    X, V = np.meshgrid(x, v, indexing="ij")
    return float(specialization_hb_integrand(f, s, m, (X + 1j * V).ravel()).max())
