"""Hot loops of the numeric layer.

Each kernel exists twice: a numba ``@njit`` version and a pure numpy version.
The numba path is used when numba imports and ``FORMAL_JACOBI_NUMBA`` is not
set to ``0``; the numpy path is always available as ``*_numpy``.
"""
from __future__ import annotations

import os

import numpy as np

TWO_PI = 2.0 * np.pi


def _numba_wanted() -> bool:
    return os.environ.get("FORMAL_JACOBI_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")


try:
    if not _numba_wanted():
        raise ImportError("disabled by FORMAL_JACOBI_NUMBA")
    from numba import njit
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


# --- numpy versions ----------------------------------------------------------

def fourier_sum_numpy(table: np.ndarray, rmax: int, taus: np.ndarray, zs: np.ndarray,
                      chunk: int = 512) -> np.ndarray:
    """sum_{n,r} table[n, r + rmax] e(n tau + r z) at each point."""
    taus = np.asarray(taus, dtype=np.complex128).ravel()
    zs = np.asarray(zs, dtype=np.complex128).ravel()
    table = np.asarray(table, dtype=np.complex128)
    P, W = table.shape
    n = np.arange(P, dtype=np.float64)
    r = np.arange(-rmax, rmax + 1, dtype=np.float64)
    out = np.empty(taus.shape[0], dtype=np.complex128)
    for s in range(0, taus.shape[0], chunk):
        t = taus[s:s + chunk, None, None]
        z = zs[s:s + chunk, None, None]
        # one exponent per term keeps large |zeta^r| and small |q^n| balanced
        ex = np.exp(1j * TWO_PI * (n[None, :, None] * t + r[None, None, :] * z))
        out[s:s + chunk] = (ex * table[None]).sum(axis=(1, 2))
    return out


def reduce_points_numpy(taus: np.ndarray, zs: np.ndarray, max_iter: int = 200):
    """Move (tau, z) into the standard domain of the Jacobi group.

    Afterwards |Re tau| <= 1/2, |tau| >= 1, |Im z| <= Im tau / 2, |Re z - ...| small.
    """
    t = np.array(taus, dtype=np.complex128).ravel()
    z = np.array(zs, dtype=np.complex128).ravel()
    for _ in range(max_iter):
        t = t - np.round(t.real)
        inside = np.abs(t) < 1.0 - 1e-13
        if not inside.any():
            break
        z = np.where(inside, z / t, z)
        t = np.where(inside, -1.0 / t, t)
    lam = np.round(z.imag / t.imag)
    z = z - lam * t
    z = z - np.round(z.real)
    return t, z


# --- numba versions -----------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=False)
    def _fourier_sum_nb(tre, tim, rmax, taus, zs):
        P, W = tre.shape
        K = taus.shape[0]
        out = np.empty(K, dtype=np.complex128)
        for k in range(K):
            t = taus[k]
            z = zs[k]
            acc = 0.0 + 0.0j
            for n in range(P):
                for j in range(W):
                    a = tre[n, j]
                    b = tim[n, j]
                    if a == 0.0 and b == 0.0:
                        continue
                    e = np.exp(1j * TWO_PI * (n * t + (j - rmax) * z))
                    acc += complex(a, b) * e
            out[k] = acc
        return out

    @njit(cache=False)
    def _reduce_points_nb(taus, zs, max_iter):
        K = taus.shape[0]
        t_out = np.empty(K, dtype=np.complex128)
        z_out = np.empty(K, dtype=np.complex128)
        for k in range(K):
            t = taus[k]
            z = zs[k]
            for _ in range(max_iter):
                t = t - np.round(t.real)
                if abs(t) >= 1.0 - 1e-13:
                    break
                z = z / t
                t = -1.0 / t
            lam = np.round(z.imag / t.imag)
            z = z - lam * t
            z = z - np.round(z.real)
            t_out[k] = t
            z_out[k] = z
        return t_out, z_out


def fourier_sum_numba(table, rmax, taus, zs):
    if not HAVE_NUMBA:
        raise RuntimeError("numba is not available")
    table = np.asarray(table, dtype=np.complex128)
    return _fourier_sum_nb(
        np.ascontiguousarray(table.real), np.ascontiguousarray(table.imag), int(rmax),
        np.asarray(taus, dtype=np.complex128).ravel(), np.asarray(zs, dtype=np.complex128).ravel(),
    )


def reduce_points_numba(taus, zs, max_iter: int = 200):
    if not HAVE_NUMBA:
        raise RuntimeError("numba is not available")
    return _reduce_points_nb(
        np.asarray(taus, dtype=np.complex128).ravel(), np.asarray(zs, dtype=np.complex128).ravel(), max_iter,
    )


# --- dispatch ---------------------------------------------------------------------

def fourier_sum(table, rmax, taus, zs):
    if HAVE_NUMBA:
        return fourier_sum_numba(table, rmax, taus, zs)
    return fourier_sum_numpy(table, rmax, taus, zs)


def reduce_points(taus, zs, max_iter: int = 200):
    if HAVE_NUMBA:
        return reduce_points_numba(taus, zs, max_iter)
    return reduce_points_numpy(taus, zs, max_iter)


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"
