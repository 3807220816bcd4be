"""Compare the numba and numpy backends of the floating analysis kernels.

    python benchmarks/bench_kernels.py [--points 20000] [--repeat 5]

Reports the best wall time of each backend on the Fourier sum and the point
reduction, plus the largest deviation between the two results.
"""
import argparse
import time

import numpy as np

from formal_jacobi.analysis import _kernels
from formal_jacobi.analysis.numeric import float_table
from formal_jacobi.jacobi import CUSP, jacobi_basis


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--prec", type=int, default=20)
    a = ap.parse_args()

    phi = jacobi_basis(12, 2, CUSP, a.prec)[0]
    T = float_table(phi)
    rng = np.random.default_rng(0)
    taus = rng.uniform(-3, 3, a.points) + 1j * rng.uniform(0.2, 3, a.points)
    zs = rng.uniform(-2, 2, a.points) + 1j * rng.uniform(-1, 1, a.points)
    rt, rz = _kernels.reduce_points_numpy(taus, zs)

    rows = []
    t_np, v_np = best_of(lambda: _kernels.fourier_sum_numpy(T, phi.rmax, rt, rz), a.repeat)
    r_np, p_np = best_of(lambda: _kernels.reduce_points_numpy(taus, zs), a.repeat)
    rows.append(("numpy", t_np, r_np))
    if _kernels.HAVE_NUMBA:
        _kernels.fourier_sum_numba(T, phi.rmax, rt[:4], rz[:4])   # compile outside the timing
        _kernels.reduce_points_numba(taus[:4], zs[:4])
        t_nb, v_nb = best_of(lambda: _kernels.fourier_sum_numba(T, phi.rmax, rt, rz), a.repeat)
        r_nb, p_nb = best_of(lambda: _kernels.reduce_points_numba(taus, zs), a.repeat)
        rows.append(("numba", t_nb, r_nb))

    print(f"form J_{{12,2}} cusp, prec {a.prec}, {a.points} points, best of {a.repeat}")
    print(f"{'backend':<8} {'fourier_sum [s]':>16} {'reduce_points [s]':>18}")
    for name, t1, t2 in rows:
        print(f"{name:<8} {t1:16.4f} {t2:18.4f}")
    if _kernels.HAVE_NUMBA:
        dev = np.max(np.abs(v_np - v_nb) / np.maximum(1.0, np.abs(v_np)))
        print(f"speedup  {t_np / t_nb:16.1f}x {r_np / r_nb:17.1f}x")
        print(f"max relative deviation of sums: {dev:.2e}")
    else:
        print("numba unavailable or disabled; only the numpy backend was timed")


if __name__ == "__main__":
    main()
