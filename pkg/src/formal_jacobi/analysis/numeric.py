"""Floating point evaluation of Jacobi forms and Hecke bound diagnostics.

Nothing here is certified.  The exact layers carry every correctness-critical
result; these routines give double precision estimates with heuristic tails.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..formal import TruncatedFormalSeries
from ..jacobi import JacobiFormQExp
from . import _kernels

DEFAULT_IM_FLOOR = 0.05


@dataclass(frozen=True)
class EvaluationPoint:
    """(tau, z) in H x C, optionally with omega for a degree 2 point [[tau, z], [z, omega]]."""

    tau: complex
    z: complex = 0j
    omega: complex | None = None

    def __post_init__(self):
        if complex(self.tau).imag <= 0:
            raise ValueError("Im tau must be positive")
        if self.omega is not None:
            y = complex(self.z).imag
            if complex(self.tau).imag * complex(self.omega).imag <= y * y:
                raise ValueError("Im of the period matrix is not positive definite")


@dataclass(frozen=True)
class NumericValue:
    value: complex
    tail: float

    def __abs__(self) -> float:
        return abs(self.value)


def float_table(phi: JacobiFormQExp) -> np.ndarray:
    if phi.table.size == 0:
        return np.zeros((phi.prec, 2 * phi.rmax + 1), dtype=np.complex128)
    return phi.table.astype(np.float64).astype(np.complex128)


def _row_magnitudes(T: np.ndarray, rmax: int, tau: complex, z: complex) -> np.ndarray:
    v, y = tau.imag, z.imag
    n = np.arange(T.shape[0], dtype=np.float64)[:, None]
    r = np.arange(-rmax, rmax + 1, dtype=np.float64)[None, :]
    return (np.abs(T) * np.exp(-2 * np.pi * (n * v + r * y))).sum(axis=1)


def tail_estimate(T: np.ndarray, rmax: int, tau: complex, z: complex, inflate: float = 1.5) -> float:
    """Geometric envelope for the omitted rows n >= prec.

    The largest ratio of consecutive row magnitudes over the last rows, inflated
    by ``inflate``, is extrapolated; a non-contracting envelope gives ``inf``.
    """
    S = _row_magnitudes(T, rmax, tau, z)
    if not S.any():
        return 0.0
    nz = np.flatnonzero(S)
    last = S[nz[-1]]
    tail_rows = S[nz[-min(5, len(nz)):]]
    if len(tail_rows) < 2:
        return math.inf
    ratios = tail_rows[1:] / tail_rows[:-1]
    rho = inflate * float(ratios.max())
    if not rho < 1.0:
        return math.inf
    # rows beyond the last nonzero stored row up to prec also count as missing
    gap = T.shape[0] - nz[-1]
    return float(last * rho ** gap / (1.0 - rho))


def eval_jacobi_numeric(phi: JacobiFormQExp, point: EvaluationPoint, im_floor: float = DEFAULT_IM_FLOOR) -> NumericValue:
    """Truncated Fourier sum at (tau, z) plus an estimate of the omitted tail."""
    tau, z = complex(point.tau), complex(point.z)
    if tau.imag < im_floor:
        raise ValueError(f"Im tau = {tau.imag} is below the floor {im_floor}")
    T = float_table(phi)
    if not T.any():
        return NumericValue(0j, 0.0)
    val = _kernels.fourier_sum(T, phi.rmax, np.array([tau]), np.array([z]))[0]
    return NumericValue(complex(val), tail_estimate(T, phi.rmax, tau, z))


def hb_integrand(phi: JacobiFormQExp, taus, zs, T: np.ndarray | None = None) -> np.ndarray:
    """v^{k/2} exp(-2 pi m y^2 / v) |phi(tau, z)|, evaluated after reduction.

    The integrand is invariant under the Jacobi group, so points are first moved
    into the region where the truncated expansion converges fastest.
    """
    if T is None:
        T = float_table(phi)
    t, z = _kernels.reduce_points(np.asarray(taus), np.asarray(zs))
    vals = np.abs(_kernels.fourier_sum(T, phi.rmax, t, z))
    v, y = t.imag, z.imag
    return v ** (phi.weight / 2) * np.exp(-2 * np.pi * phi.index * y * y / v) * vals


@dataclass(frozen=True)
class HBGrid:
    """Sample grid for the Hecke bound: tau in a box, z = alpha tau + beta."""

    re_range: tuple = (-0.5, 0.5)
    n_re: int = 24
    im_range: tuple = (math.sqrt(3) / 2, 4.0)
    n_im: int = 24
    n_alpha: int = 8
    n_beta: int = 8
    re_shift: float = 0.0

    def points(self) -> tuple[np.ndarray, np.ndarray]:
        x = np.linspace(*self.re_range, self.n_re) + self.re_shift
        v = np.geomspace(*self.im_range, self.n_im)
        a = np.arange(self.n_alpha) / self.n_alpha
        b = np.arange(self.n_beta) / self.n_beta
        X, V, A, B = np.meshgrid(x, v, a, b, indexing="ij")
        tau = X + 1j * V
        return tau.ravel(), (A * tau + B).ravel()


def hecke_bound_estimate(phi: JacobiFormQExp, grid: HBGrid | None = None) -> float:
    """Grid maximum of the Hecke bound integrand, a lower estimate of HB(phi)."""
    if phi.is_zero():
        return 0.0
    taus, zs = (grid or HBGrid()).points()
    return float(hb_integrand(phi, taus, zs).max())


def coefficient_bound(k: int, m: int, D: int, hb: float) -> float:
    """HB (e pi |D| / (m k))^{k/2}."""
    return hb * (math.e * math.pi * abs(D) / (m * k)) ** (k / 2)


def coefficient_bound_violations(phi: JacobiFormQExp, hb: float, slack: float = 1.0) -> list:
    k, m = phi.weight, phi.index
    if k < 1 or m < 1:
        raise ValueError("the coefficient bound needs k >= 1 and m >= 1")
    if slack < 1:
        raise ValueError("slack must be at least 1")
    out = []
    for (n, r), c in phi.items():
        D = 4 * m * n - r * r
        bound = slack * coefficient_bound(k, m, D, hb)
        if abs(float(c)) > bound:
            out.append(((n, r), c, bound))
    return out


def coefficient_bound_check(phi: JacobiFormQExp, hb: float, slack: float = 1.0) -> bool:
    """True iff |c(n,r)| <= slack HB (e pi |4mn - r^2| / (m k))^{k/2} on the window."""
    return not coefficient_bound_violations(phi, hb, slack)


@dataclass
class ProbeResult:
    partial_sums: list = field(default_factory=list)
    increments: list = field(default_factory=list)
    tails: list = field(default_factory=list)

    @property
    def max_abs(self) -> float:
        return max((abs(s) for s in self.partial_sums), default=0.0)

    def ratios(self) -> list[float]:
        inc = self.increments
        return [inc[i + 1] / inc[i] if inc[i] else math.inf for i in range(len(inc) - 1)]


def partial_sum_probe(f: TruncatedFormalSeries, point: EvaluationPoint, M: int | None = None,
                      im_floor: float = DEFAULT_IM_FLOOR) -> ProbeResult:
    """S_M = sum_{m <= M} phi_m(tau, z) e(N m omega) for M = 0..depth."""
    if point.omega is None:
        raise ValueError("a degree 2 point with omega is required")
    M = f.depth if M is None else min(M, f.depth)
    omega = complex(point.omega)
    res = ProbeResult()
    total = 0j
    for m in range(M + 1):
        val = eval_jacobi_numeric(f.parts[m], point, im_floor)
        w = np.exp(2j * np.pi * f.level * m * omega)
        term = val.value * w
        total += term
        res.partial_sums.append(complex(total))
        res.increments.append(abs(term))
        res.tails.append(val.tail * abs(w))
    return res
