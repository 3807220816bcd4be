"""Truncated exact series in q (and q, zeta) with fractional exponents.

Both series kinds store a dense numpy object array of exact coefficients
(Python ints or ``Fraction``) on a shifted lattice of exponents:
slot ``i`` of the q axis has exponent ``qval + i / qden``.  The truncation
order ``prec`` is exclusive: coefficients at exponents ``>= prec`` are unknown.
"""
from __future__ import annotations

from fractions import Fraction
from math import ceil, gcd, lcm
from typing import Union

import numpy as np

Rational = Union[int, Fraction]


class SeriesError(ValueError):
    pass


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _normalize(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def _zeros(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(0)
    return out


def _restride(arr: np.ndarray, factor: int, axis: int = 0) -> np.ndarray:
    if factor == 1:
        return arr
    shape = list(arr.shape)
    n = shape[axis]
    shape[axis] = (n - 1) * factor + 1 if n else 0
    out = _zeros(tuple(shape))
    idx = [slice(None)] * arr.ndim
    idx[axis] = slice(None, None, factor)
    out[tuple(idx)] = arr
    return out


def conv1d(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    """First ``n`` terms of the Cauchy product of two object arrays."""
    out = _zeros(n)
    if n <= 0:
        return out
    nz_a = [i for i in range(min(len(a), n)) if a[i] != 0]
    nz_b = [i for i in range(min(len(b), n)) if b[i] != 0]
    if len(nz_b) < len(nz_a):
        a, b, nz_a = b, a, nz_b
    for i in nz_a:
        seg = b[: n - i]
        out[i : i + len(seg)] += a[i] * seg
    return out


def conv2d(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    """Product of two 2d tables, truncated to ``n`` rows along axis 0.

    Columns are a full (untruncated) convolution: width ``wa + wb - 1``.
    """
    wa, wb = a.shape[1], b.shape[1]
    out = _zeros((max(n, 0), wa + wb - 1))
    if n <= 0 or wa == 0 or wb == 0:
        return out
    nz_a = np.argwhere(a[:n] != 0)
    nz_b = np.argwhere(b[:n] != 0)
    if len(nz_b) < len(nz_a):
        a, b, nz_a = b, a, nz_b
        wb = b.shape[1]
    for i, j in nz_a:
        seg = b[: n - i]
        out[i : i + len(seg), j : j + wb] += a[i, j] * seg
    return out


def _slots_below(val: Fraction, den: int, prec: Fraction) -> int:
    return max(0, ceil((prec - val) * den))


class QSeries:
    r"""Truncated series :math:`\sum_i c_i q^{\mathrm{val} + i/\mathrm{den}} + O(q^{\mathrm{prec}})`."""

    __slots__ = ("_val", "_den", "_c", "_prec")

    def __init__(self, coeffs, val: Rational = 0, den: int = 1, prec: Rational = None):
        val = _frac(val)
        c = np.array(list(coeffs), dtype=object) if not isinstance(coeffs, np.ndarray) else coeffs.astype(object)
        if prec is None:
            prec = val + Fraction(len(c), den)
        prec = _frac(prec)
        n = _slots_below(val, den, prec)
        if len(c) < n:
            c = np.concatenate([c, _zeros(n - len(c))])
        c = c[:n].copy()
        for i in range(len(c)):
            c[i] = _normalize(c[i])
        self._val, self._den, self._c, self._prec = val, int(den), c, prec
        self._reduce()

    def _reduce(self) -> None:
        # drop leading zeros and shrink the lattice step when possible
        nz = [i for i in range(len(self._c)) if self._c[i] != 0]
        if not nz:
            self._c = _zeros(0)
            return
        if nz[0]:
            self._val += Fraction(nz[0], self._den)
            self._c = self._c[nz[0]:]
            nz = [i - nz[0] for i in nz]
        g = 0
        for i in nz:
            g = gcd(g, i)
        g = gcd(g, self._den) if g else self._den
        if g > 1:
            self._c = self._c[::g]
            self._den //= g

    @classmethod
    def from_dict(cls, terms: dict, prec: Rational) -> "QSeries":
        """Build from ``{exponent: coefficient}`` with rational exponents."""
        prec = _frac(prec)
        terms = {_frac(e): v for e, v in terms.items() if v != 0}
        if any(e >= prec for e in terms):
            raise SeriesError("term at or beyond the truncation order")
        if not terms:
            return cls([], 0, 1, prec)
        val = min(terms)
        den = 1
        for e in terms:
            den = lcm(den, (e - val).denominator)
        c = _zeros(_slots_below(val, den, prec))
        for e, v in terms.items():
            c[int((e - val) * den)] += v
        return cls(c, val, den, prec)

    @classmethod
    def one(cls, prec: Rational) -> "QSeries":
        return cls([1], 0, 1, prec)

    # --- views -------------------------------------------------------------
    @property
    def prec(self) -> Fraction:
        return self._prec

    @property
    def exp_denom(self) -> int:
        """Common denominator of all exponents."""
        return lcm(self._den, self._val.denominator)

    @property
    def coeffs(self) -> dict:
        """``{scaled exponent: coefficient}`` with exponent = key / exp_denom."""
        d = self.exp_denom
        return {int((self._val + Fraction(i, self._den)) * d): v for i, v in enumerate(self._c) if v != 0}

    def terms(self) -> dict:
        return {self._val + Fraction(i, self._den): v for i, v in enumerate(self._c) if v != 0}

    def valuation(self) -> Fraction | None:
        return self._val if len(self._c) else None

    def __getitem__(self, e: Rational):
        e = _frac(e)
        if e >= self._prec:
            raise SeriesError(f"coefficient of q^{e} is beyond the truncation order {self._prec}")
        if not len(self._c):
            return 0
        pos = (e - self._val) * self._den
        if pos < 0 or pos.denominator != 1 or pos >= len(self._c):
            return 0
        return self._c[int(pos)]

    def is_zero(self) -> bool:
        return not len(self._c)

    def __repr__(self) -> str:
        shown = list(self.terms().items())[:6]
        body = " + ".join(f"({v})*q^{e}" for e, v in shown) or "0"
        return f"QSeries({body} + O(q^{self._prec}))"

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self._prec == other._prec and self.terms() == other.terms()

    # --- arithmetic ----------------------------------------------------------
    def _aligned(self, other: "QSeries"):
        prec = min(self._prec, other._prec)
        if self.is_zero() and other.is_zero():
            return Fraction(0), 1, _zeros(0), _zeros(0), prec
        vals = [s._val for s in (self, other) if not s.is_zero()]
        val = min(vals)
        den = lcm(self._den, other._den)
        for v in vals:
            den = lcm(den, (v - val).denominator)
        n = _slots_below(val, den, prec)
        arrs = []
        for s in (self, other):
            a = _zeros(n)
            if not s.is_zero():
                r = _restride(s._c, den // s._den)
                off = int((s._val - val) * den)
                take = r[: max(0, n - off)]
                a[off : off + len(take)] = take
            arrs.append(a)
        return val, den, arrs[0], arrs[1], prec

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QSeries([other], 0, 1, self._prec)
        if not isinstance(other, QSeries):
            return NotImplemented
        val, den, a, b, prec = self._aligned(other)
        return QSeries(a + b, val, den, prec)

    __radd__ = __add__

    def __neg__(self):
        return QSeries(-self._c, self._val, self._den, self._prec)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Rational) -> "QSeries":
        return QSeries(self._c * c, self._val, self._den, self._prec)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return series_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int) -> "QSeries":
        if e < 0:
            return series_invert(self) ** (-e)
        if e == 0:
            return QSeries.one(self._prec)
        result, base = None, self
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def truncate(self, prec: Rational) -> "QSeries":
        prec = _frac(prec)
        if prec > self._prec:
            raise SeriesError("cannot extend a truncated series")
        return QSeries(self._c, self._val, self._den, prec)

    def subs_power(self, k: int) -> "QSeries":
        """Substitute q -> q^k."""
        if k < 1:
            raise SeriesError("substitution power must be a positive integer")
        if k == 1:
            return self
        return QSeries.from_dict({e * k: v for e, v in self.terms().items()}, self._prec * k)


class BivariateQExpansion:
    r"""Truncated series in q with Laurent-polynomial coefficients in zeta.

    Slot ``(i, j)`` holds the coefficient of ``q^(qval + i/qden) zeta^(zval + j/zden)``.
    """

    __slots__ = ("_qval", "_qden", "_zval", "_zden", "_c", "_prec")

    def __init__(self, table, qval: Rational = 0, qden: int = 1, zval: Rational = 0, zden: int = 1, prec: Rational = None):
        qval, zval = _frac(qval), _frac(zval)
        c = np.asarray(table, dtype=object)
        if c.ndim != 2:
            c = c.reshape(len(c), -1)
        if prec is None:
            prec = qval + Fraction(c.shape[0], qden)
        prec = _frac(prec)
        n = _slots_below(qval, qden, prec)
        if c.shape[0] < n:
            c = np.concatenate([c, _zeros((n - c.shape[0], c.shape[1]))])
        c = c[:n].copy()
        for idx in np.ndindex(c.shape):
            c[idx] = _normalize(c[idx])
        self._qval, self._qden, self._zval, self._zden = qval, int(qden), zval, int(zden)
        self._c, self._prec = c, prec
        self._reduce()

    def _reduce(self) -> None:
        c = self._c
        nz = np.argwhere(c != 0) if c.size else np.zeros((0, 2), dtype=int)
        if not len(nz):
            self._c = _zeros((0, 1))
            self._zval = Fraction(0)
            self._zden = 1
            return
        i0, j0 = nz[:, 0].min(), nz[:, 1].min()
        j1 = nz[:, 1].max()
        self._qval += Fraction(int(i0), self._qden)
        self._zval += Fraction(int(j0), self._zden)
        c = c[i0:, j0 : j1 + 1]
        nz = nz - [i0, j0]
        gq = gcd(*[int(x) for x in nz[:, 0]], self._qden)
        gz = gcd(*[int(x) for x in nz[:, 1]], self._zden)
        self._c = c[::gq, ::gz]
        self._qden //= gq
        self._zden //= gz

    @classmethod
    def from_dict(cls, terms: dict, prec: Rational) -> "BivariateQExpansion":
        """Build from ``{(q exponent, zeta exponent): coefficient}``."""
        prec = _frac(prec)
        terms = {(_frac(a), _frac(b)): v for (a, b), v in terms.items() if v != 0}
        if any(a >= prec for a, _ in terms):
            raise SeriesError("term at or beyond the truncation order")
        if not terms:
            return cls(_zeros((0, 1)), 0, 1, 0, 1, prec)
        qv = min(a for a, _ in terms)
        zv = min(b for _, b in terms)
        qd = zd = 1
        for a, b in terms:
            qd = lcm(qd, (a - qv).denominator)
            zd = lcm(zd, (b - zv).denominator)
        zw = max(int((b - zv) * zd) for _, b in terms) + 1
        c = _zeros((_slots_below(qv, qd, prec), zw))
        for (a, b), v in terms.items():
            c[int((a - qv) * qd), int((b - zv) * zd)] += v
        return cls(c, qv, qd, zv, zd, prec)

    @classmethod
    def from_qseries(cls, s: QSeries) -> "BivariateQExpansion":
        """View a q-series as a zeta-independent bivariate expansion."""
        return cls(s._c.reshape(-1, 1), s._val, s._den, 0, 1, s._prec)

    @property
    def prec(self) -> Fraction:
        return self._prec

    @property
    def q_exp_denom(self) -> int:
        return lcm(self._qden, self._qval.denominator)

    @property
    def zeta_exp_denom(self) -> int:
        return lcm(self._zden, self._zval.denominator)

    @property
    def coeffs(self) -> dict:
        """``{(scaled q exponent, scaled zeta exponent): coefficient}``."""
        dq, dz = self.q_exp_denom, self.zeta_exp_denom
        return {(int(a * dq), int(b * dz)): v for (a, b), v in self.terms().items()}

    def terms(self) -> dict:
        out = {}
        for i, j in np.argwhere(self._c != 0) if self._c.size else []:
            a = self._qval + Fraction(int(i), self._qden)
            b = self._zval + Fraction(int(j), self._zden)
            out[(a, b)] = self._c[i, j]
        return out

    def is_zero(self) -> bool:
        return not (self._c.size and (self._c != 0).any())

    def __getitem__(self, key):
        a, b = _frac(key[0]), _frac(key[1])
        if a >= self._prec:
            raise SeriesError(f"coefficient of q^{a} is beyond the truncation order {self._prec}")
        if self.is_zero():
            return 0
        i = (a - self._qval) * self._qden
        j = (b - self._zval) * self._zden
        if i < 0 or j < 0 or i.denominator != 1 or j.denominator != 1:
            return 0
        i, j = int(i), int(j)
        if i >= self._c.shape[0] or j >= self._c.shape[1]:
            return 0
        return self._c[i, j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, BivariateQExpansion):
            return NotImplemented
        return self._prec == other._prec and self.terms() == other.terms()

    def __repr__(self) -> str:
        shown = list(self.terms().items())[:6]
        body = " + ".join(f"({v})*q^{a}*z^{b}" for (a, b), v in shown) or "0"
        return f"BivariateQExpansion({body} + O(q^{self._prec}))"

    def _aligned(self, other: "BivariateQExpansion"):
        prec = min(self._prec, other._prec)
        live = [s for s in (self, other) if not s.is_zero()]
        if not live:
            return None, prec
        qv = min(s._qval for s in live)
        zv = min(s._zval for s in live)
        qd = lcm(self._qden, other._qden)
        zd = lcm(self._zden, other._zden)
        for s in live:
            qd = lcm(qd, (s._qval - qv).denominator)
            zd = lcm(zd, (s._zval - zv).denominator)
        n = _slots_below(qv, qd, prec)
        width = max(int((s._zval - zv) * zd) + (s._c.shape[1] - 1) * (zd // s._zden) + 1 for s in live)
        arrs = []
        for s in (self, other):
            a = _zeros((n, width))
            if not s.is_zero():
                r = _restride(_restride(s._c, qd // s._qden, 0), zd // s._zden, 1)
                oi = int((s._qval - qv) * qd)
                oj = int((s._zval - zv) * zd)
                take = r[: max(0, n - oi)]
                a[oi : oi + take.shape[0], oj : oj + take.shape[1]] = take
            arrs.append(a)
        return (qv, qd, zv, zd, arrs[0], arrs[1]), prec

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = BivariateQExpansion([[other]], 0, 1, 0, 1, self._prec)
        if not isinstance(other, BivariateQExpansion):
            return NotImplemented
        al, prec = self._aligned(other)
        if al is None:
            return BivariateQExpansion(_zeros((0, 1)), prec=prec)
        qv, qd, zv, zd, a, b = al
        return BivariateQExpansion(a + b, qv, qd, zv, zd, prec)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: Rational) -> "BivariateQExpansion":
        return BivariateQExpansion(self._c * c, self._qval, self._qden, self._zval, self._zden, self._prec)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return series_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int) -> "BivariateQExpansion":
        if e < 1:
            raise SeriesError("only positive powers of bivariate expansions are supported")
        result, base = None, self
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def at_zeta_one(self) -> QSeries:
        """Specialize zeta = 1 (i.e. z = 0)."""
        col = _zeros(self._c.shape[0])
        for i in range(self._c.shape[0]):
            col[i] = sum(self._c[i].tolist())
        return QSeries(col, self._qval, self._qden, self._prec)

    def zeta_power(self, k: int) -> "BivariateQExpansion":
        """Substitute zeta -> zeta^k (z -> k z); ``k`` a positive integer."""
        if k < 1:
            raise SeriesError("zeta substitution needs a positive integer")
        return BivariateQExpansion(self._c, self._qval, self._qden, self._zval * k, self._zden, self._prec) if k == 1 else \
            BivariateQExpansion(_restride(self._c, k, 1), self._qval, self._qden, self._zval * k, self._zden, self._prec)

    def integral_table(self, rmax: int) -> np.ndarray:
        """Dense table ``T[n, r + rmax]`` for integral exponents ``0 <= n < prec``."""
        nrows = max(0, ceil(self._prec))
        out = _zeros((nrows, 2 * rmax + 1))
        for (a, b), v in self.terms().items():
            if a.denominator != 1 or b.denominator != 1 or a < 0:
                raise SeriesError(f"non-integral or negative exponent q^{a} zeta^{b}")
            if abs(b) > rmax:
                raise SeriesError(f"zeta exponent {b} outside window {rmax}")
            out[int(a), int(b) + rmax] = v
        return out


def series_mul(a, b):
    """Product of two truncated series of the same kind.

    The result is known up to ``min(prec_a + val_b, prec_b + val_a)``; for
    series starting at ``q^0`` that is the smaller of the two truncation orders.
    """
    if type(a) is not type(b):
        raise SeriesError(f"cannot multiply {type(a).__name__} by {type(b).__name__}")
    if isinstance(a, QSeries):
        if a.is_zero() or b.is_zero():
            prec = min(a._prec + (b._val if not b.is_zero() else 0), b._prec + (a._val if not a.is_zero() else 0))
            return QSeries([], 0, 1, prec)
        prec = min(a._prec + b._val, b._prec + a._val)
        den = lcm(a._den, b._den)
        val = a._val + b._val
        ra = _restride(a._c, den // a._den)
        rb = _restride(b._c, den // b._den)
        return QSeries(conv1d(ra, rb, _slots_below(val, den, prec)), val, den, prec)
    if isinstance(a, BivariateQExpansion):
        if a.is_zero() or b.is_zero():
            pa = a._prec + (b._qval if not b.is_zero() else 0)
            pb = b._prec + (a._qval if not a.is_zero() else 0)
            return BivariateQExpansion(_zeros((0, 1)), prec=min(pa, pb))
        prec = min(a._prec + b._qval, b._prec + a._qval)
        qd, zd = lcm(a._qden, b._qden), lcm(a._zden, b._zden)
        ra = _restride(_restride(a._c, qd // a._qden, 0), zd // a._zden, 1)
        rb = _restride(_restride(b._c, qd // b._qden, 0), zd // b._zden, 1)
        qv = a._qval + b._qval
        table = conv2d(ra, rb, _slots_below(qv, qd, prec))
        return BivariateQExpansion(table, qv, qd, a._zval + b._zval, zd, prec)
    raise SeriesError(f"unsupported operand {type(a).__name__}")


def series_invert(a: QSeries) -> QSeries:
    """Multiplicative inverse ``q^-v u^-1`` of ``a = q^v u`` with ``u(0) != 0``."""
    if not isinstance(a, QSeries):
        raise SeriesError("only q-series can be inverted")
    if a.is_zero():
        raise SeriesError("cannot invert the zero series")
    v = a._val
    prec = a._prec - 2 * v
    n = _slots_below(-v, a._den, prec)
    u = a._c
    u0 = Fraction(u[0])
    inv = _zeros(n)
    if n:
        inv[0] = _normalize(1 / u0)
    for i in range(1, n):
        acc = 0
        for j in range(1, min(i, len(u) - 1) + 1):
            if u[j] != 0:
                acc += u[j] * inv[i - j]
        inv[i] = _normalize(-acc / u0) if acc != 0 else 0
    return QSeries(inv, -v, a._den, prec)
