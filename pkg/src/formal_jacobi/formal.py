"""Truncated formal Fourier-Jacobi series sum_{m<=d} phi_m xi^{Nm}.

Coefficients are addressed by index matrices t = [[n, r/2], [r/2, N m]] via
``a(t; f) = c(n, r; phi_m)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .jacobi import (
    HOLOMORPHIC, InsufficientPrecisionError, JacobiFormQExp, WindowError,
    jacobi_basis, jacobi_dim, jacobi_mul, minimal_prec, order_kind,
)
from .kernel.linalg import ExactMatrix, exact_kernel


@dataclass(frozen=True, order=True)
class MatrixIndexEntry:
    """The half-integral matrix [[n, r/2], [r/2, N m]]."""

    n: int
    r: int
    m: int
    N: int = 1

    def discriminant(self) -> int:
        """4 N n m - r^2 (four times the determinant)."""
        return 4 * self.N * self.n * self.m - self.r * self.r

    def is_semidefinite(self) -> bool:
        return self.n >= 0 and self.m >= 0 and self.discriminant() >= 0

    def is_definite(self) -> bool:
        return self.n >= 1 and self.m >= 1 and self.discriminant() > 0

    def matrix(self) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
        h = Fraction(self.r, 2)
        return ((Fraction(self.n), h), (h, Fraction(self.N * self.m)))


@dataclass(frozen=True)
class GroupElement:
    """An element (a b; c d) of Gamma^0_pm(N): det = +-1 and N | b."""

    a: int
    b: int
    c: int
    d: int
    N: int = 1

    def __post_init__(self):
        if self.det() not in (1, -1):
            raise ValueError(f"determinant {self.det()} is not +-1")
        if self.b % self.N:
            raise ValueError(f"upper right entry {self.b} is not divisible by the level {self.N}")

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        if self.N != other.N:
            raise ValueError("level mismatch")
        return GroupElement(
            self.a * other.a + self.b * other.c, self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c, self.c * other.b + self.d * other.d, self.N,
        )


def act_index(t: MatrixIndexEntry, sigma: GroupElement) -> MatrixIndexEntry:
    """t[sigma] = sigma' t sigma."""
    if t.N != sigma.N:
        raise ValueError("level mismatch between index and group element")
    a, b, c, d, N = sigma.a, sigma.b, sigma.c, sigma.d, sigma.N
    n, r, m = t.n, t.r, t.m
    n1 = a * a * n + a * c * r + c * c * N * m
    r1 = 2 * a * b * n + (a * d + b * c) * r + 2 * c * d * N * m
    top = b * b * n + b * d * r
    if top % N:
        raise ValueError("group element does not preserve the index lattice")
    m1 = top // N + d * d * m
    return MatrixIndexEntry(n1, r1, m1, N)


def fricke_index_map(t: MatrixIndexEntry) -> MatrixIndexEntry:
    """(n, r, m) -> (m, -r, n)."""
    return MatrixIndexEntry(t.m, -t.r, t.n, t.N)


class TruncatedFormalSeries:
    """Weight ``k``, level ``N`` formal series truncated after ``xi^{N d}``."""

    __slots__ = ("weight", "level", "parts")

    def __init__(self, weight: int, level: int, parts: Sequence[JacobiFormQExp]):
        if level < 1:
            raise ValueError("level must be positive")
        if not parts:
            raise ValueError("need at least the part phi_0")
        self.weight, self.level = int(weight), int(level)
        prec = min(p.prec for p in parts)
        fixed = []
        for m, p in enumerate(parts):
            if p.index != level * m:
                raise ValueError(f"part {m} has index {p.index}, expected {level * m}")
            if p.weight != weight and not p.is_zero():
                raise ValueError(f"part {m} has weight {p.weight}, expected {weight}")
            if p.weight != weight:
                p = JacobiFormQExp(weight, p.index, p.prec, p.table)
            fixed.append(p.truncate(prec) if p.prec != prec else p)
        self.parts = tuple(fixed)

    @classmethod
    def zero(cls, k: int, N: int, d: int, prec: int) -> "TruncatedFormalSeries":
        return cls(k, N, [JacobiFormQExp(k, N * m, prec) for m in range(d + 1)])

    @classmethod
    def unit(cls, N: int, d: int, prec: int) -> "TruncatedFormalSeries":
        parts = [JacobiFormQExp(0, N * m, prec) for m in range(d + 1)]
        parts[0].table[0, 0] = 1
        return cls(0, N, parts)

    @property
    def depth(self) -> int:
        return len(self.parts) - 1

    @property
    def prec(self) -> int:
        return self.parts[0].prec

    def __getitem__(self, m: int) -> JacobiFormQExp:
        return self.parts[m]

    def __repr__(self) -> str:
        return f"TruncatedFormalSeries(k={self.weight}, N={self.level}, d={self.depth}, prec={self.prec})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedFormalSeries):
            return NotImplemented
        return (self.weight, self.level) == (other.weight, other.level) and self.parts == other.parts

    def coefficient_at(self, t: MatrixIndexEntry):
        return coefficient_at(self, t)

    def in_window(self, t: MatrixIndexEntry) -> bool:
        return 0 <= t.m <= self.depth and 0 <= t.n < self.prec

    def window(self):
        """All semidefinite index matrices visible in the truncation."""
        N = self.level
        for m in range(self.depth + 1):
            for n in range(self.prec):
                R = _isqrt(4 * N * n * m)
                for r in range(-R, R + 1):
                    yield MatrixIndexEntry(n, r, m, N)

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.parts)

    def scale(self, c) -> "TruncatedFormalSeries":
        return TruncatedFormalSeries(self.weight, self.level, [p.scale(c) for p in self.parts])

    def __add__(self, other: "TruncatedFormalSeries") -> "TruncatedFormalSeries":
        if (self.weight, self.level) != (other.weight, other.level):
            raise ValueError("weight/level mismatch")
        d = min(self.depth, other.depth)
        return TruncatedFormalSeries(self.weight, self.level, [self.parts[m] + other.parts[m] for m in range(d + 1)])

    def __mul__(self, other):
        if isinstance(other, TruncatedFormalSeries):
            return cauchy_product(self, other)
        return self.scale(other)

    def truncate(self, d: int | None = None, prec: int | None = None) -> "TruncatedFormalSeries":
        d = self.depth if d is None else d
        if d > self.depth:
            raise InsufficientPrecisionError("cannot increase the depth of a truncated series")
        parts = self.parts[: d + 1]
        if prec is not None:
            parts = [p.truncate(prec) for p in parts]
        return TruncatedFormalSeries(self.weight, self.level, parts)


def _isqrt(x: int) -> int:
    from math import isqrt
    return isqrt(x) if x > 0 else 0


def cauchy_product(f1: TruncatedFormalSeries, f2: TruncatedFormalSeries) -> TruncatedFormalSeries:
    """phi_m(f1 f2) = sum_{m1 + m2 = m} phi_{m1}(f1) phi_{m2}(f2)."""
    if f1.level != f2.level:
        raise ValueError(f"level mismatch: {f1.level} vs {f2.level}")
    N, k = f1.level, f1.weight + f2.weight
    d = min(f1.depth, f2.depth)
    prec = min(f1.prec, f2.prec)
    parts = []
    for m in range(d + 1):
        acc = JacobiFormQExp(k, N * m, prec)
        for m1 in range(m + 1):
            a, b = f1.parts[m1], f2.parts[m - m1]
            if a.is_zero() or b.is_zero():
                continue
            acc = acc + jacobi_mul(a, b)
        parts.append(acc)
    return TruncatedFormalSeries(k, N, parts)


def coefficient_at(f: TruncatedFormalSeries, t: MatrixIndexEntry):
    """a(t; f) = c(n, r; phi_m)."""
    if t.N != f.level:
        raise ValueError("level mismatch")
    if not 0 <= t.m <= f.depth:
        raise WindowError(f"part {t.m} is beyond depth {f.depth}")
    if t.n >= f.prec:
        raise WindowError(f"n = {t.n} is beyond the truncation order {f.prec}")
    if t.n < 0 or not t.is_semidefinite():
        return 0
    return f.parts[t.m].coefficient(t.n, t.r)


def fricke_involution_residuals(f: TruncatedFormalSeries, eps: int) -> list[tuple[MatrixIndexEntry, Fraction]]:
    """Nonzero residuals of c(n,r;phi_m) - (-1)^k eps c(m,r;phi_n) for n <= m <= d."""
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    s = (-1) ** (f.weight % 2) * eps
    N, d = f.level, f.depth
    if d >= f.prec:
        raise InsufficientPrecisionError(f"prec {f.prec} must exceed the depth {d}")
    out = []
    for m in range(d + 1):
        for n in range(m + 1):
            R = _isqrt(4 * N * n * m)
            for r in range(-R, R + 1):
                res = f.parts[m].coefficient(n, r) - s * f.parts[n].coefficient(m, r)
                if res != 0:
                    out.append((MatrixIndexEntry(n, r, m, N), res))
    return out


@dataclass
class SymmetryReport:
    residuals: list = field(default_factory=list)
    checked: int = 0
    skipped: int = 0

    def __bool__(self) -> bool:
        return bool(self.residuals)

    def __len__(self) -> int:
        return len(self.residuals)

    def __iter__(self):
        return iter(self.residuals)


def gamma0_symmetry_residuals(f: TruncatedFormalSeries, sigma: GroupElement) -> SymmetryReport:
    """Residuals a(t[sigma]) - det(sigma)^k a(t) over the visible window.

    Pairs whose image leaves the window are counted in ``skipped``.
    """
    if sigma.N != f.level:
        raise ValueError("group element level differs from the series level")
    sign = sigma.det() ** (f.weight % 2)
    rep = SymmetryReport()
    for t in f.window():
        t1 = act_index(t, sigma)
        if not f.in_window(t1):
            rep.skipped += 1
            continue
        rep.checked += 1
        res = coefficient_at(f, t1) - sign * coefficient_at(f, t)
        if res != 0:
            rep.residuals.append((t, res))
    return rep


@dataclass
class SolutionSpace:
    """Exact solution space of the involution condition on prod_{m<=d} J_{k,Nm}."""

    weight: int
    level: int
    eps: int
    depth: int
    prec: int
    bases: list
    vectors: list

    @property
    def dimension(self) -> int:
        return len(self.vectors)

    def series(self, i: int) -> TruncatedFormalSeries:
        """The i-th basis element as a truncated formal series."""
        v = self.vectors[i]
        parts, pos = [], 0
        for m, B in enumerate(self.bases):
            acc = JacobiFormQExp(self.weight, self.level * m, self.prec)
            for phi in B:
                if v[pos] != 0:
                    acc = acc + phi.scale(v[pos])
                pos += 1
            parts.append(acc)
        return TruncatedFormalSeries(self.weight, self.level, parts)


def solution_prec(k: int, N: int, d: int) -> int:
    """Default truncation order for the involution system at depth ``d``."""
    return max([d + 1] + [minimal_prec(k, N * m) for m in range(d + 1)])


def involution_solution_space(k: int, N: int, eps: int, d: int, prec: int | None = None,
                              check_stability: bool = False, basis_provider=None) -> SolutionSpace:
    """Solve c(n,r;phi_m) = (-1)^k eps c(m,r;phi_n) (n, m <= d) on Jacobi form bases.

    ``basis_provider(k, m, kind, prec)`` replaces :func:`jacobi_basis`, e.g. to read a cache.
    """
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    if d < 0:
        raise ValueError("depth must be non-negative")
    if prec is None:
        prec = solution_prec(k, N, d)
    if prec <= d:
        raise InsufficientPrecisionError(f"prec {prec} must exceed the depth {d}")
    provider = basis_provider or jacobi_basis
    bases = [list(provider(k, N * m, HOLOMORPHIC, prec)) for m in range(d + 1)]
    offsets = [0]
    for B in bases:
        offsets.append(offsets[-1] + len(B))
    s = (-1) ** (k % 2) * eps
    entries: dict = {}
    row = 0
    for m in range(d + 1):
        for n in range(m + 1):
            R = _isqrt(4 * N * n * m)
            for r in range(-R, R + 1):
                cur = {}
                for i, phi in enumerate(bases[m]):
                    v = phi.coefficient(n, r)
                    if v:
                        cur[offsets[m] + i] = cur.get(offsets[m] + i, 0) + v
                for j, phi in enumerate(bases[n]):
                    v = phi.coefficient(m, r)
                    if v:
                        cur[offsets[n] + j] = cur.get(offsets[n] + j, 0) - s * v
                cur = {c: v for c, v in cur.items() if v != 0}
                if cur:
                    for c, v in cur.items():
                        entries[(row, c)] = v
                    row += 1
    M = ExactMatrix(row, offsets[-1], entries)
    vectors = exact_kernel(M)
    space = SolutionSpace(k, N, eps, d, prec, bases, vectors)
    if check_stability:
        other = involution_solution_space(k, N, eps, d, prec + 5, basis_provider=basis_provider)
        if other.dimension != space.dimension:
            raise InsufficientPrecisionError(
                f"dimension changed from {space.dimension} to {other.dimension} between prec {prec} and {prec + 5}"
            )
    return space


def default_depth(k: int, N: int) -> int:
    return (N * k) // 6 + 3


def dim_upper_via_orders(k: int, N: int, eps: int) -> int:
    """sum_{j=0}^{floor(Nk/6)} dim J_{k,Nj}(j + delta), delta = 0 iff (-1)^k eps = 1."""
    if k < 1:
        raise ValueError("k must be positive")
    delta = 0 if (-1) ** (k % 2) * eps == 1 else 1
    return sum(jacobi_dim(k, N * j, order_kind(j + delta)) for j in range((N * k) // 6 + 1))
