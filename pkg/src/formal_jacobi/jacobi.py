"""Exact bases of Jacobi form spaces from the weak generators.

Even weight: ``J^weak_{k,m}`` is spanned by ``E4^a E6^b phi_{0,1}^c phi_{-2,1}^d``
with ``4a + 6b - 2d = k`` and ``c + d = m``.  Odd weight: ``phi_{-1,2}`` times the
even weight ``k+1``, index ``m-2`` weak space.  Holomorphic, cusp and order
subspaces are cut out by linear conditions on the truncated coefficients.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil, isqrt
from typing import Iterator, Union

import numpy as np

from .kernel.generators import eisenstein, phi_0_1, phi_m1_2, phi_m2_1
from .kernel.linalg import ExactMatrix, exact_kernel, rref
from .kernel.series import QSeries, _normalize, _zeros, conv2d


class InsufficientPrecisionError(ValueError):
    """Truncation order too small to determine the requested data."""


class WindowError(IndexError):
    """Coefficient requested outside the stored truncation window."""


def weak_window(m: int, prec: int) -> int:
    """Largest |r| with r^2 <= 4 m n + m^2 for some n < prec."""
    if prec <= 0:
        return 0
    return isqrt(4 * m * (prec - 1) + m * m)


class JacobiFormQExp:
    """Coefficient table ``c(n, r)`` of a weight ``k``, index ``m`` Jacobi form, ``0 <= n < prec``."""

    __slots__ = ("weight", "index", "prec", "table", "rmax")

    def __init__(self, weight: int, index: int, prec: int, table: np.ndarray | None = None):
        if index < 0:
            raise ValueError("index must be non-negative")
        if prec < 0:
            raise ValueError("prec must be non-negative")
        self.weight, self.index, self.prec = int(weight), int(index), int(prec)
        self.rmax = weak_window(index, prec)
        width = 2 * self.rmax + 1
        if table is None:
            table = _zeros((prec, width))
        table = np.asarray(table, dtype=object)
        if table.shape[0] < prec:
            raise ValueError("table has fewer rows than prec")
        table = table[:prec]
        w = table.shape[1]
        if w != width:
            # recentre a table of odd width onto this window
            if w % 2 == 0:
                raise ValueError("table width must be odd (centred at r = 0)")
            half = w // 2
            out = _zeros((prec, width))
            lo = max(0, half - self.rmax)
            hi = min(w, half + self.rmax + 1)
            if (table[:, :lo] != 0).any() or (table[:, hi:] != 0).any():
                raise ValueError("table has coefficients outside the weak support window")
            out[:, self.rmax - (half - lo) : self.rmax + (hi - half)] = table[:, lo:hi]
            table = out
        self.table = table

    # --- access ----------------------------------------------------------
    def coefficient(self, n: int, r: int):
        if n < 0:
            return 0
        if n >= self.prec:
            raise WindowError(f"c({n}, {r}) is beyond the truncation order {self.prec}")
        if abs(r) > self.rmax:
            return 0
        return self.table[n, r + self.rmax]

    def __getitem__(self, nr):
        return self.coefficient(*nr)

    @property
    def coeffs(self) -> dict:
        """``{(n, r): c(n, r)}`` over nonzero stored coefficients."""
        return dict(self.items())

    def items(self) -> Iterator[tuple[tuple[int, int], object]]:
        R = self.rmax
        for n, j in np.argwhere(self.table != 0) if self.table.size else []:
            yield (int(n), int(j) - R), self.table[n, j]

    def is_zero(self) -> bool:
        return not (self.table != 0).any() if self.table.size else True

    def truncate(self, prec: int) -> "JacobiFormQExp":
        if prec > self.prec:
            raise InsufficientPrecisionError(f"cannot extend a form known to q^{self.prec} up to q^{prec}")
        return JacobiFormQExp(self.weight, self.index, prec, self.table[:prec])

    def __eq__(self, other) -> bool:
        if not isinstance(other, JacobiFormQExp):
            return NotImplemented
        return (self.weight, self.index, self.prec) == (other.weight, other.index, other.prec) and \
            bool((self.table == other.table).all())

    def __repr__(self) -> str:
        shown = [f"({v})q^{n}z^{r}" for (n, r), v in list(self.items())[:6]]
        return f"JacobiFormQExp(k={self.weight}, m={self.index}, {' + '.join(shown) or '0'} + O(q^{self.prec}))"

    # --- arithmetic ---------------------------------------------------------
    def _check_same(self, other: "JacobiFormQExp"):
        if (self.weight, self.index) != (other.weight, other.index):
            raise ValueError("weight/index mismatch")

    def __add__(self, other: "JacobiFormQExp") -> "JacobiFormQExp":
        self._check_same(other)
        p = min(self.prec, other.prec)
        return JacobiFormQExp(self.weight, self.index, p, self.table[:p] + other.table[:p])

    def __sub__(self, other: "JacobiFormQExp") -> "JacobiFormQExp":
        return self + other.scale(-1)

    def scale(self, c) -> "JacobiFormQExp":
        return JacobiFormQExp(self.weight, self.index, self.prec, _normal_table(self.table * c))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return jacobi_mul(self, other)

    __rmul__ = __mul__

    def weak_support_ok(self) -> bool:
        m = self.index
        return all(r * r <= 4 * m * n + m * m for (n, r), _ in self.items())


def _normal_table(t: np.ndarray) -> np.ndarray:
    out = t.copy()
    for idx in zip(*np.nonzero(out != 0)):
        out[idx] = _normalize(out[idx])
    return out


def jacobi_mul(a: JacobiFormQExp, b: JacobiFormQExp) -> JacobiFormQExp:
    """Product of Jacobi forms (weights and indices add)."""
    p = min(a.prec, b.prec)
    t = conv2d(a.table, b.table, p)
    return JacobiFormQExp(a.weight + b.weight, a.index + b.index, p, t)


def from_qseries(s: QSeries, weight: int, prec: int) -> JacobiFormQExp:
    """An elliptic modular form viewed as a Jacobi form of index 0."""
    t = _zeros((prec, 1))
    for e, v in s.terms().items():
        if e.denominator != 1 or e < 0:
            raise ValueError("index-0 forms need integral non-negative exponents")
        if e < prec:
            t[int(e), 0] = v
    return JacobiFormQExp(weight, 0, prec, t)


# --- generators as tables ---------------------------------------------------

@lru_cache(maxsize=None)
def _gen_table(name: str, prec: int) -> JacobiFormQExp:
    if name == "phi_0_1":
        s, k, m = phi_0_1(prec), 0, 1
    elif name == "phi_m2_1":
        s, k, m = phi_m2_1(prec), -2, 1
    elif name == "phi_m1_2":
        s, k, m = phi_m1_2(prec), -1, 2
    else:
        raise KeyError(name)
    R = weak_window(m, prec)
    return JacobiFormQExp(k, m, prec, s.integral_table(R))


@lru_cache(maxsize=None)
def _gen_power(name: str, e: int, prec: int) -> JacobiFormQExp:
    if e == 0:
        t = _zeros((prec, 1))
        if prec:
            t[0, 0] = 1
        return JacobiFormQExp(0, 0, prec, t)
    if e == 1:
        return _gen_table(name, prec)
    half = _gen_power(name, e // 2, prec)
    out = jacobi_mul(half, half)
    if e % 2:
        out = jacobi_mul(out, _gen_table(name, prec))
    return out


@lru_cache(maxsize=None)
def _modular_monomial(a: int, b: int, prec: int) -> QSeries:
    s = QSeries.one(prec)
    if a:
        s = s * eisenstein(4, prec) ** a
    if b:
        s = s * eisenstein(6, prec) ** b
    return s


def _modular_exponents(w: int) -> list[tuple[int, int]]:
    """All (a, b) with 4a + 6b = w."""
    if w < 0 or w % 2:
        return []
    return [(a, (w - 4 * a) // 6) for a in range(w // 4 + 1) if (w - 4 * a) % 6 == 0]


def _scale_rows(f: JacobiFormQExp, s: QSeries) -> JacobiFormQExp:
    col = _zeros((f.prec, 1))
    for e, v in s.terms().items():
        if e < f.prec:
            col[int(e), 0] = v
    t = conv2d(col, f.table, f.prec)
    return JacobiFormQExp(f.weight, f.index, f.prec, t)


def weak_monomials(k: int, m: int, prec: int) -> list[tuple[tuple, JacobiFormQExp]]:
    """Labelled spanning monomials of ``J^weak_{k,m}`` truncated at ``prec``.

    Labels are ``(a, b, c, d, odd)`` for ``[phi_{-1,2}] E4^a E6^b phi_{0,1}^c phi_{-2,1}^d``.
    """
    out = []
    if k % 2:
        if m < 2:
            return []
        base = weak_monomials(k + 1, m - 2, prec)
        g = _gen_table("phi_m1_2", prec)
        for (a, b, c, d, _), f in base:
            out.append(((a, b, c, d, 1), jacobi_mul(g, f)))
        return out
    for d in range(m + 1):
        c = m - d
        w = k + 2 * d
        pairs = _modular_exponents(w)
        if not pairs:
            continue
        jpart = jacobi_mul(_gen_power("phi_0_1", c, prec), _gen_power("phi_m2_1", d, prec))
        for a, b in pairs:
            f = _scale_rows(jpart, _modular_monomial(a, b, prec))
            out.append(((a, b, c, d, 0), JacobiFormQExp(k, m, prec, f.table)))
    return out


# --- spaces -------------------------------------------------------------------

@dataclass(frozen=True)
class SpaceKind:
    """One of ``weak``, ``holomorphic``, ``cusp`` or ``order`` (with ``nu``)."""

    name: str
    nu: int = 0

    def __post_init__(self):
        if self.name not in ("weak", "holomorphic", "cusp", "order"):
            raise ValueError(f"unknown space kind {self.name!r}")
        if self.name == "order" and self.nu < 0:
            raise ValueError("order needs nu >= 0")
        if self.name == "order" and self.nu == 0:
            object.__setattr__(self, "name", "holomorphic")

    @classmethod
    def parse(cls, text: str) -> "SpaceKind":
        text = text.strip().lower()
        aliases = {"hol": "holomorphic", "holo": "holomorphic", "holomorphic": "holomorphic",
                   "weak": "weak", "cusp": "cusp"}
        if text in aliases:
            return cls(aliases[text])
        if text.startswith("order:") or text.startswith("order(") or text.startswith("order"):
            body = text[5:].strip(":() ")
            return cls("order", int(body))
        raise ValueError(f"cannot parse space kind {text!r}")

    def __str__(self) -> str:
        return f"order:{self.nu}" if self.name == "order" else self.name


WEAK = SpaceKind("weak")
HOLOMORPHIC = SpaceKind("holomorphic")
CUSP = SpaceKind("cusp")


def order_kind(nu: int) -> SpaceKind:
    return SpaceKind("order", nu)


KindLike = Union[SpaceKind, str]


def _kind(kind: KindLike) -> SpaceKind:
    return kind if isinstance(kind, SpaceKind) else SpaceKind.parse(kind)


def minimal_prec(k: int, m: int, kind: KindLike = HOLOMORPHIC) -> int:
    """Smallest truncation order at which the basis computation is exact.

    Negative-discriminant and zero-discriminant classes all have a
    representative with ``n <= m/4``; a nonzero holomorphic form has a nonzero
    coefficient with ``n <= (k + 2m)/12``; order conditions need ``n < nu``.
    """
    kind = _kind(kind)
    p = max(m // 4 + 1, (k + 2 * m) // 12 + 1, 1)
    if kind.name == "order":
        p = max(p, kind.nu + 1)
    return p + 1


def default_prec(k: int, m: int, kind: KindLike = HOLOMORPHIC) -> int:
    """Default truncation order ``ceil(k/12) (m+1) + 2``, never below :func:`minimal_prec`."""
    return max(ceil(max(k, 0) / 12) * (m + 1) + 2, minimal_prec(k, m, kind))


def positions(m: int, prec: int) -> list[tuple[int, int]]:
    """Coefficient positions in canonical order: n ascending, |r| ascending, +r before -r."""
    out = []
    for n in range(prec):
        R = isqrt(4 * m * n + m * m)
        for a in range(R + 1):
            out.append((n, a))
            if a:
                out.append((n, -a))
    return out


def _condition_positions(m: int, prec: int, kind: SpaceKind) -> list[tuple[int, int]]:
    if kind.name == "weak":
        return []
    cond = []
    for n, r in positions(m, prec):
        D = 4 * m * n - r * r
        if D < 0 or (kind.name == "cusp" and D == 0) or (kind.name == "order" and n < kind.nu):
            cond.append((n, r))
    return cond


def _combine(monos: list[JacobiFormQExp], vec, k: int, m: int, prec: int) -> JacobiFormQExp:
    t = _zeros((prec, 2 * weak_window(m, prec) + 1))
    for c, f in zip(vec, monos):
        if c != 0:
            t = t + f.table * c
    return JacobiFormQExp(k, m, prec, _normal_table(t))


def echelonize(forms: list[JacobiFormQExp]) -> list[JacobiFormQExp]:
    """Canonical reduced echelon basis of the span of ``forms``."""
    if not forms:
        return []
    k, m, prec = forms[0].weight, forms[0].index, min(f.prec for f in forms)
    pos = positions(m, prec)
    rows = [[f.coefficient(n, r) for n, r in pos] for f in forms]
    red, _ = rref(rows, len(pos))
    out = []
    for row in red:
        t = _zeros((prec, 2 * weak_window(m, prec) + 1))
        R = weak_window(m, prec)
        for (n, r), v in zip(pos, row):
            if v:
                t[n, r + R] = _normalize(v)
        out.append(JacobiFormQExp(k, m, prec, t))
    return out


@lru_cache(maxsize=None)
def _basis_cached(k: int, m: int, kind: SpaceKind, prec: int) -> tuple[JacobiFormQExp, ...]:
    if m == 0:
        return tuple(_index_zero_basis(k, kind, prec))
    monos = weak_monomials(k, m, prec)
    forms = [f for _, f in monos]
    if not forms:
        return ()
    cond = _condition_positions(m, prec, kind)
    entries = {}
    for i, (n, r) in enumerate(cond):
        for j, f in enumerate(forms):
            v = f.coefficient(n, r)
            if v != 0:
                entries[(i, j)] = v
    ker = exact_kernel(ExactMatrix(len(cond), len(forms), entries))
    combos = [_combine(forms, v, k, m, prec) for v in ker]
    basis = echelonize(combos)
    if len(basis) != len(ker):
        raise InsufficientPrecisionError(
            f"truncation to q^{prec} is not injective on J_{{{k},{m}}} ({kind}); raise prec"
        )
    return tuple(basis)


def _index_zero_basis(k: int, kind: SpaceKind, prec: int) -> list[JacobiFormQExp]:
    if k % 2 or k < 0:
        return []
    if kind.name == "weak":
        kind = HOLOMORPHIC
    forms = [from_qseries(_modular_monomial(a, b, prec), k, prec) for a, b in _modular_exponents(k)]
    if not forms:
        return []
    nu = {"holomorphic": 0, "cusp": 1, "order": kind.nu}[kind.name]
    if nu:
        entries = {(n, j): f.coefficient(n, 0) for n in range(min(nu, prec)) for j, f in enumerate(forms)}
        ker = exact_kernel(ExactMatrix(min(nu, prec), len(forms), entries))
        forms = [_combine(forms, v, k, 0, prec) for v in ker]
    return echelonize(forms)


def jacobi_basis(k: int, m: int, kind: KindLike = HOLOMORPHIC, prec: int | None = None) -> list[JacobiFormQExp]:
    """Reduced echelon basis of ``J_{k,m}`` (or its weak/cusp/order subspace) truncated at ``prec``."""
    kind = _kind(kind)
    if k < 0 and kind.name != "weak":
        return []
    if m < 0:
        raise ValueError("index must be non-negative")
    if prec is None:
        prec = default_prec(k, m, kind)
    need = minimal_prec(k, m, kind) if kind.name != "weak" else 1
    if prec < need:
        raise InsufficientPrecisionError(f"prec {prec} below the sufficiency bound {need} for J_{{{k},{m}}} ({kind})")
    if kind.name != "weak":
        _COMPUTED.add((k, m))
    return list(_basis_cached(k, m, kind, prec))


_COMPUTED: set[tuple[int, int]] = set()


def computed_spaces() -> set[tuple[int, int]]:
    """(k, m) pairs for which a holomorphic-type basis was requested in this process."""
    return set(_COMPUTED)


def jacobi_dim(k: int, m: int, kind: KindLike = HOLOMORPHIC) -> int:
    kind = _kind(kind)
    return len(jacobi_basis(k, m, kind, default_prec(k, m, kind)))


def coefficient(phi: JacobiFormQExp, n: int, r: int):
    return phi.coefficient(n, r)


INFINITY = float("inf")


def order_of(phi: JacobiFormQExp):
    """Least ``n`` with a nonzero ``c(n, r)``; ``INFINITY`` for the zero form."""
    for n in range(phi.prec):
        if (phi.table[n] != 0).any():
            return n
    return INFINITY


# --- invariant checks ------------------------------------------------------------

def check_form_invariants(phi: JacobiFormQExp, holomorphic: bool = True) -> list[str]:
    """Return a list of violated structural invariants (empty when all hold)."""
    bad = []
    k, m = phi.weight, phi.index
    sign = -1 if k % 2 else 1
    seen: dict = {}
    for n in range(phi.prec):
        R = isqrt(4 * m * n + m * m)
        for r in range(-phi.rmax, phi.rmax + 1):
            v = phi.coefficient(n, r)
            if v != 0 and abs(r) > R:
                bad.append(f"support: c({n},{r}) outside weak window")
            if phi.coefficient(n, -r) != sign * v:
                bad.append(f"parity: c({n},{-r}) != (-1)^k c({n},{r})")
            D = 4 * m * n - r * r
            if holomorphic and D < 0 and v != 0:
                bad.append(f"holomorphy: c({n},{r}) != 0 with D={D}")
            if m >= 1 and abs(r) <= R:
                key = (r % (2 * m), D)
                if key in seen and seen[key] != v:
                    bad.append(f"periodicity: c({n},{r}) differs within class {key}")
                seen.setdefault(key, v)
    return bad
