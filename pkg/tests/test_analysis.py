import cmath
import math
import os
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from formal_jacobi.analysis import (
    EvaluationPoint, HBGrid, SpecializationDatum, order_inequality_bound, aoki_inequality_check, coefficient_bound,
    coefficient_bound_check, coefficient_bound_violations, eval_jacobi_numeric, hb_integrand,
    hecke_bound_estimate, lambda_set, partial_sum_probe, psi, psi_j, specialization_hecke_bound, specialize,
    truncation_threshold,
)
from formal_jacobi.analysis import _kernels
from formal_jacobi.analysis.vanishing import prime_divisors, t_condition_sides
from formal_jacobi.jacobi import CUSP, HOLOMORPHIC, WindowError, jacobi_basis
from formal_jacobi.operators import gritsenko_fj


@pytest.fixture(scope="module")
def phi10():
    return jacobi_basis(10, 1, CUSP, 20)[0]


# --- psi functions and the vanishing-order inequality ------------------------------------------------

def test_prime_divisors():
    assert prime_divisors(1) == []
    assert prime_divisors(360) == [2, 3, 5]
    assert prime_divisors(97) == [97]


@pytest.mark.parametrize("u", range(1, 60))
def test_psi_j_against_totient(u):
    # u psi_1(u) is Euler's totient
    phi = sum(1 for a in range(1, u + 1) if math.gcd(a, u) == 1)
    assert u * psi_j(1, u) == phi


def test_psi_values():
    assert psi_j(2, 6) == Fraction(2, 3)
    assert psi(2) == 3
    assert psi(3) == 4
    assert psi(6) == 12
    with pytest.raises(ValueError):
        psi(1)


def test_t_condition_sides_exact_equality_for_index_one():
    # with k = 10 and m = mu = 1 both sides agree exactly, so no t enters the sum
    for t in range(2, 30):
        left, right = t_condition_sides(t, 10, 1, 1)
        assert left == right
    assert order_inequality_bound(10, 1, 1).ts == []


@pytest.mark.parametrize("k,m,kind", [(10, 1, CUSP), (12, 1, CUSP), (10, 2, HOLOMORPHIC), (12, 3, HOLOMORPHIC)])
def test_order_inequality_passes_on_bases(k, m, kind):
    for phi in jacobi_basis(k, m, kind):
        assert aoki_inequality_check(phi).passed


def test_order_inequality_detects_impossible_order():
    rep = order_inequality_bound(10, 1, 5)
    assert not rep.passed
    assert rep.lhs == -24


def test_order_inequality_rejects_odd_weight():
    with pytest.raises(ValueError):
        order_inequality_bound(11, 2, 1)
    with pytest.raises(ValueError):
        aoki_inequality_check(jacobi_basis(11, 2, CUSP)[0])


def test_truncation_threshold():
    assert truncation_threshold(10, 1) == 1
    assert truncation_threshold(12, 2) == 4
    with pytest.raises(ValueError):
        truncation_threshold(0, 1)


# --- numeric evaluation --------------------------------------------------------------------

def direct_sum(phi, tau, z):
    return sum(complex(float(c)) * cmath.exp(2j * math.pi * (n * tau + r * z)) for (n, r), c in phi.items())


def test_eval_matches_direct_sum(phi10):
    pt = EvaluationPoint(0.1 + 1.2j, 0.3 + 0.1j)
    assert abs(eval_jacobi_numeric(phi10, pt).value - direct_sum(phi10, pt.tau, pt.z)) < 1e-12


def test_eval_self_consistency_on_doubling(phi10):
    pt = EvaluationPoint(0.2 + 0.8j, 0.1 + 0.05j)
    lo = eval_jacobi_numeric(phi10.truncate(10), pt)
    hi = eval_jacobi_numeric(phi10, pt)
    diff = abs(lo.value - hi.value)
    assert diff <= lo.tail
    assert hi.tail < lo.tail


@settings(max_examples=30, deadline=None)
@given(st.floats(-0.5, 0.5), st.floats(0.6, 2.0), st.floats(-1, 1), st.floats(-0.2, 0.2))
def test_parity_in_z(x, v, a, b):
    for phi in (jacobi_basis(10, 1, CUSP, 12)[0], jacobi_basis(11, 2, CUSP, 12)[0]):
        tau, z = complex(x, v), complex(a, b)
        p = eval_jacobi_numeric(phi, EvaluationPoint(tau, z)).value
        q = eval_jacobi_numeric(phi, EvaluationPoint(tau, -z)).value
        assert abs(p - (-1) ** phi.weight * q) <= 1e-9 * max(1.0, abs(p))


def test_evaluation_point_validation(phi10):
    with pytest.raises(ValueError):
        EvaluationPoint(1 - 1j)
    with pytest.raises(ValueError):
        EvaluationPoint(1j, 2j, 1j)
    with pytest.raises(ValueError):
        eval_jacobi_numeric(phi10, EvaluationPoint(0.01j))


# --- Hecke bound --------------------------------------------------------------------------

def test_hb_integrand_is_invariant_under_the_jacobi_group(phi10):
    tau = np.array([0.13 + 1.1j, -0.31 + 0.9j])
    z = np.array([0.2 + 0.1j, -0.1 + 0.3j])
    base = hb_integrand(phi10, tau, z)
    moved = hb_integrand(phi10, tau + 1, z + tau + 2)
    inv = hb_integrand(phi10, -1 / tau, z / tau)
    assert np.allclose(base, moved, rtol=1e-9)
    assert np.allclose(base, inv, rtol=1e-7)


def test_hb_shift_invariance(phi10):
    g = HBGrid(n_re=8, n_im=8, n_alpha=4, n_beta=4)
    a = hecke_bound_estimate(phi10, g)
    b = hecke_bound_estimate(phi10, HBGrid(n_re=8, n_im=8, n_alpha=4, n_beta=4, re_shift=1.0))
    assert a > 0
    assert abs(a - b) <= 1e-9 * a


def test_finer_grid_never_decreases_estimate(phi10):
    coarse = HBGrid(n_re=6, n_im=6, n_alpha=4, n_beta=4)
    fine = HBGrid(n_re=11, n_im=11, n_alpha=8, n_beta=8)   # contains every coarse point
    assert hecke_bound_estimate(phi10, fine) >= hecke_bound_estimate(phi10, coarse)


def test_hb_zero_form():
    z = jacobi_basis(10, 1, CUSP, 5)[0].scale(0)
    assert hecke_bound_estimate(z) == 0.0


def test_coefficient_bound_and_mutation(phi10):
    hb = hecke_bound_estimate(phi10)
    assert coefficient_bound_check(phi10, hb)
    assert coefficient_bound_violations(phi10, hb / 1000)
    assert coefficient_bound(10, 1, 3, 1.0) == pytest.approx((math.e * math.pi * 3 / 10) ** 5)
    with pytest.raises(ValueError):
        coefficient_bound_check(phi10, hb, slack=0.5)


# --- specialization --------------------------------------------------------------------------

@pytest.fixture(scope="module")
def lift():
    (phi,) = jacobi_basis(10, 1, CUSP, 31)
    return gritsenko_fj(phi, 3, 11)


def test_datum_validation():
    assert SpecializationDatum(Fraction(1, 2), 0).D == 2
    with pytest.raises(ValueError):
        SpecializationDatum(Fraction(1, 2), Fraction(1, 3))
    with pytest.raises(ValueError):
        SpecializationDatum(Fraction(1, 3), 0, N=2)


@settings(max_examples=60)
@given(st.integers(1, 6), st.fractions(-2, 2, max_denominator=4), st.integers(1, 40))
def test_lambda_set_matches_brute_force(Nm, x, j):
    v = Fraction(j, x.denominator ** 2)
    got = set(lambda_set(Nm, x, v))
    brute = set()
    for l in range(-60, 61):
        n = v - Nm * x * x - x * l
        if n.denominator == 1 and 4 * Nm * n > l * l:
            brute.add((int(n), l))
    assert got == brute
    assert len(got) <= 4 * math.sqrt(Nm * v) + 1


def test_specialize_at_zero_sums_rows(lift):
    s = SpecializationDatum(0, 0)
    sp = specialize(lift, s, 1, 6)
    phi = lift.parts[1]
    for n in range(1, 7):
        assert sp.coeffs.get(Fraction(n), 0) == pytest.approx(sum(float(c) for (nn, r), c in phi.items() if nn == n))
    assert sp.lambda_bound_ok()


def test_specialize_matches_numeric_evaluation(lift):
    s = SpecializationDatum(Fraction(1, 2), 0)
    sp = specialize(lift, s, 2, 3)
    tau = 0.1 + 1.5j
    series = sum(c * cmath.exp(2j * math.pi * float(v) * tau) for v, c in sp.coeffs.items())
    # e(N m x^2 tau) phi_m(tau, x tau + y)
    direct = cmath.exp(2j * math.pi * 2 * 0.25 * tau) * direct_sum(lift.parts[2], tau, 0.5 * tau)
    assert abs(series - direct) < 1e-3 * abs(direct)


def test_specialize_window(lift):
    s = SpecializationDatum(Fraction(1, 2), 0)
    with pytest.raises(WindowError):
        specialize(lift, s, 4, 2)
    with pytest.raises(WindowError):
        specialize(lift, s, 1, 40)


def test_specialization_hb_is_positive(lift):
    s = SpecializationDatum(Fraction(1, 2), 0)
    hb = specialization_hecke_bound(lift, s, 1, n_re=24, n_im=16)
    assert 0 < hb < math.inf


# --- partial sums ---------------------------------------------------------------------------------

def test_partial_sum_probe_decays():
    (phi,) = jacobi_basis(10, 1, CUSP, 41)
    f = gritsenko_fj(phi, 5, 9)
    res = partial_sum_probe(f, EvaluationPoint(2j, 0.3 + 0.2j, 2j))
    inc = res.increments[1:]
    assert all(b < a for a, b in zip(inc, inc[1:]))
    assert all(r < 1e-3 for r in res.ratios()[1:])
    assert math.isfinite(res.max_abs)


def test_partial_sum_probe_needs_omega(lift):
    with pytest.raises(ValueError):
        partial_sum_probe(lift, EvaluationPoint(2j, 0.1))


# --- backends ----------------------------------------------------------------------------------

@pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not importable")
def test_numba_and_numpy_agree(phi10):
    rng = np.random.default_rng(7)
    taus = rng.uniform(-0.5, 0.5, 200) + 1j * rng.uniform(0.3, 2, 200)
    zs = rng.uniform(-1, 1, 200) + 1j * rng.uniform(-0.3, 0.3, 200)
    T = phi10.table.astype(np.float64).astype(np.complex128)
    a = _kernels.fourier_sum_numpy(T, phi10.rmax, taus, zs)
    b = _kernels.fourier_sum_numba(T, phi10.rmax, taus, zs)
    assert np.allclose(a, b, rtol=1e-10, atol=1e-14)
    ta, za = _kernels.reduce_points_numpy(taus, zs)
    tb, zb = _kernels.reduce_points_numba(taus, zs)
    assert np.allclose(ta, tb) and np.allclose(za, zb)


def test_env_flag_selects_numpy_backend():
    code = "from formal_jacobi.analysis import _kernels; print(_kernels.backend())"
    env = dict(os.environ, FORMAL_JACOBI_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
