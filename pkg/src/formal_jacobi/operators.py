"""Index raising operators, the Gritsenko lift and level raising of formal series."""
from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

from .formal import TruncatedFormalSeries, fricke_involution_residuals
from .jacobi import InsufficientPrecisionError, JacobiFormQExp, from_qseries
from .kernel.bernoulli import bernoulli
from .kernel.generators import eisenstein
from .kernel.series import _normalize

VARIANTS = ("eta", "theta", "theta_prime")


class PreconditionError(ValueError):
    """Input does not satisfy the hypothesis of a check (distinct from a failed check)."""


def _divisors(n: int) -> list[int]:
    return [a for a in range(1, n + 1) if n % a == 0]


def v_input_prec(out_prec: int, ell: int) -> int:
    """Input truncation order needed for ``apply_V(., ell)`` to reach ``out_prec``."""
    return (out_prec - 1) * ell + 1 if out_prec > 0 else 0


def apply_V(phi: JacobiFormQExp, ell: int, prec: int | None = None) -> JacobiFormQExp:
    """phi|V_ell: c(n, r) = sum_{a | gcd(n, r, ell)} a^{k-1} c(n ell / a^2, r / a; phi).

    The output precision defaults to the largest one the input determines.
    """
    if ell < 1:
        raise ValueError("ell must be a positive integer")
    if ell == 1 and prec is None:
        return phi
    k = phi.weight
    if prec is None:
        prec = (phi.prec - 1) // ell + 1 if phi.prec > 0 else 0
    if v_input_prec(prec, ell) > phi.prec:
        raise InsufficientPrecisionError(
            f"V_{ell} to prec {prec} needs input prec {v_input_prec(prec, ell)}, have {phi.prec}"
        )
    out = JacobiFormQExp(k, phi.index * ell, prec)
    R = out.rmax
    divs = _divisors(ell)
    for n in range(prec):
        for r in range(-R, R + 1):
            g = gcd(gcd(n, r), ell)  # gcd(0, 0, ell) = ell
            total = 0
            for a in divs:
                if g % a:
                    continue
                c = phi.coefficient(n * ell // (a * a), r // a)
                if c:
                    total += a ** (k - 1) * c if k >= 1 else Fraction(a) ** (k - 1) * c
            out.table[n, r + R] = _normalize(total)
    return out


def apply_U(phi: JacobiFormQExp, ell: int) -> JacobiFormQExp:
    """phi|U_ell (z -> ell z): c(n, r) = c(n, r / ell; phi) when ell | r, else 0."""
    if ell < 1:
        raise ValueError("ell must be a positive integer")
    if ell == 1:
        return phi
    out = JacobiFormQExp(phi.weight, phi.index * ell * ell, phi.prec)
    R = out.rmax
    for (n, r), v in phi.items():
        out.table[n, r * ell + R] = v
    return out


def gritsenko_fj(phi: JacobiFormQExp, d: int, prec: int | None = None) -> TruncatedFormalSeries:
    """Fourier-Jacobi parts of the Gritsenko lift of ``phi`` up to xi^{N d}.

    Part 0 is c(0,0) (zeta(1-k)/2) E_k, part m >= 1 is phi|V_m.
    """
    k, N = phi.weight, phi.index
    if N < 1:
        raise ValueError("the lift needs a positive index")
    if d < 0:
        raise ValueError("depth must be non-negative")
    if prec is None:
        prec = (phi.prec - 1) // max(d, 1) + 1
    if v_input_prec(prec, max(d, 1)) > phi.prec:
        raise InsufficientPrecisionError(
            f"lift to depth {d} and prec {prec} needs input prec {v_input_prec(prec, max(d, 1))}"
        )
    c00 = phi.coefficient(0, 0)
    if c00 != 0:
        if k % 2 or k < 4:
            raise ValueError(f"nonzero c(0,0) needs an even weight k >= 4, got k = {k}")
        const = c00 * (-bernoulli(k) / (2 * k))
        part0 = from_qseries(eisenstein(k, prec).scale(const), k, prec)
    else:
        part0 = JacobiFormQExp(k, 0, prec)
    parts = [part0] + [apply_V(phi, m, prec) for m in range(1, d + 1)]
    return TruncatedFormalSeries(k, N, parts)


def _theta_prime_part(f: TruncatedFormalSeries, ell: int, m: int) -> JacobiFormQExp:
    k, N = f.weight, f.level
    acc = JacobiFormQExp(k, N * ell * m, f.prec)
    for delta in _divisors(gcd(ell, m)):
        term = apply_U(f.parts[ell * m // (delta * delta)], delta)
        acc = acc + term.scale(delta ** (k - 1) if k >= 1 else Fraction(delta) ** (k - 1))
    return acc


def level_raise(f: TruncatedFormalSeries, ell: int, variant: str) -> TruncatedFormalSeries:
    """Raise the level of a cuspidal formal series.

    eta:         level N ell^2, part m = phi_m|U_ell (depth d)
    theta:       level N ell,   part m = phi_m|V_ell (depth d, prec shrinks by ell)
    theta_prime: level N ell,   part m = sum_{delta | (ell, m)} delta^{k-1} phi_{ell m/delta^2}|U_delta
                 (depth floor(d / ell))
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    if ell < 1:
        raise ValueError("ell must be a positive integer")
    if ell == 1:
        return f
    k, N, d = f.weight, f.level, f.depth
    if not f.parts[0].is_zero():
        raise ValueError("level raising expects a cuspidal series (phi_0 = 0)")
    if variant == "eta":
        return TruncatedFormalSeries(k, N * ell * ell, [apply_U(p, ell) for p in f.parts])
    if variant == "theta":
        prec = (f.prec - 1) // ell + 1
        if prec < 2:
            raise InsufficientPrecisionError("prec too small to apply V_ell")
        parts = [JacobiFormQExp(k, 0, prec)] + [apply_V(p, ell, prec) for p in f.parts[1:]]
        return TruncatedFormalSeries(k, N * ell, parts)
    depth = d // ell
    if depth < 1:
        raise InsufficientPrecisionError(f"depth {d} is too small to populate any part for ell = {ell}")
    parts = [JacobiFormQExp(k, 0, f.prec)] + [_theta_prime_part(f, ell, m) for m in range(1, depth + 1)]
    return TruncatedFormalSeries(k, N * ell, parts)


def theta_compatibility_residuals(f: TruncatedFormalSeries, ell: int, eps: int,
                                  check_precondition: bool = True) -> list:
    """Residuals (-1)^k c(m, r; (theta f)_n) - eps c(n, r; (theta' f)_m) at level N ell."""
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    if check_precondition and fricke_involution_residuals(f, eps):
        raise PreconditionError("input series does not satisfy the involution condition for this eps")
    if f.is_zero():
        return []
    A = level_raise(f, ell, "theta")
    B = level_raise(f, ell, "theta_prime")
    depth = min(A.depth, B.depth)
    M = ell * f.level
    s = (-1) ** (f.weight % 2)
    out = []
    for n in range(1, depth + 1):
        for m in range(1, depth + 1):
            if m >= A.prec or n >= B.prec:
                raise InsufficientPrecisionError("prec too small for the compatibility window")
            R = isqrt(4 * M * n * m)
            for r in range(-R, R + 1):
                res = s * A.parts[n].coefficient(m, r) - eps * B.parts[m].coefficient(n, r)
                if res != 0:
                    out.append(((n, r, m), res))
    return out


def theta_compatibility_check(f: TruncatedFormalSeries, ell: int, eps: int,
                              check_precondition: bool = True) -> bool:
    """True iff (theta_ell f)|mu_{N ell} agrees with theta'_ell(f|mu_N) on the common window."""
    return not theta_compatibility_residuals(f, ell, eps, check_precondition)
