from fractions import Fraction
from math import isqrt

import pytest
from hypothesis import given, settings, strategies as st

from formal_jacobi.formal import TruncatedFormalSeries, fricke_involution_residuals
from formal_jacobi.jacobi import (
    CUSP, HOLOMORPHIC, InsufficientPrecisionError, JacobiFormQExp, check_form_invariants, jacobi_basis,
)
from formal_jacobi.kernel.generators import eisenstein
from formal_jacobi.operators import (
    PreconditionError, apply_U, apply_V, gritsenko_fj, level_raise, theta_compatibility_check,
    theta_compatibility_residuals, v_input_prec,
)


def v_oracle(phi, ell, n, r):
    """Divisor sum of V_ell by explicit enumeration of common divisors."""
    total = Fraction(0)
    for a in range(1, ell + 1):
        if ell % a == 0 and n % a == 0 and r % a == 0:
            total += Fraction(a) ** (phi.weight - 1) * phi.coefficient(n * ell // (a * a), r // a)
    return total


@pytest.mark.parametrize("k,m,kind", [(10, 1, CUSP), (4, 1, HOLOMORPHIC), (11, 2, CUSP), (12, 2, HOLOMORPHIC)])
@pytest.mark.parametrize("ell", [2, 3, 4, 6])
def test_V_matches_divisor_enumeration(k, m, kind, ell):
    phi = jacobi_basis(k, m, kind, 25)[0]
    out = apply_V(phi, ell)
    assert out.index == m * ell and out.weight == k
    assert out.prec == (phi.prec - 1) // ell + 1
    for n in range(out.prec):
        for r in range(-out.rmax, out.rmax + 1):
            assert out.coefficient(n, r) == v_oracle(phi, ell, n, r)
    assert check_form_invariants(out) == []


def test_V_one_and_U_one_are_identity():
    (phi,) = jacobi_basis(10, 1, CUSP, 6)
    assert apply_V(phi, 1) == phi
    assert apply_U(phi, 1) == phi


def test_V_precision():
    (phi,) = jacobi_basis(10, 1, CUSP, 9)
    assert v_input_prec(5, 2) == 9
    assert apply_V(phi, 2, 5).prec == 5
    with pytest.raises(InsufficientPrecisionError):
        apply_V(phi, 2, 6)
    with pytest.raises(ValueError):
        apply_V(phi, 0)


@pytest.mark.parametrize("a,b", [(2, 2), (2, 3), (3, 1)])
def test_U_composes(a, b):
    phi = jacobi_basis(11, 2, CUSP, 6)[0]
    assert apply_U(apply_U(phi, a), b) == apply_U(phi, a * b)


def test_U_substitutes_zeta():
    (phi,) = jacobi_basis(10, 1, CUSP, 5)
    u = apply_U(phi, 3)
    assert u.index == 9
    for (n, r), v in u.items():
        assert r % 3 == 0 and phi.coefficient(n, r // 3) == v
    assert check_form_invariants(u) == []


def test_V_hecke_multiplicativity_for_coprime_indices():
    # V_2 V_3 = V_6 on Jacobi forms (coprime indices)
    phi = jacobi_basis(10, 1, CUSP, 31)[0]
    assert apply_V(apply_V(phi, 2), 3, 3) == apply_V(phi, 6, 3)


def test_lift_of_cusp_form():
    (phi,) = jacobi_basis(10, 1, CUSP, 17)
    f = gritsenko_fj(phi, 4)
    assert f.depth == 4 and f.prec == 5
    assert f.parts[0].is_zero()
    assert f.parts[1] == phi.truncate(5)
    assert fricke_involution_residuals(f, 1) == []


def test_lift_of_holomorphic_form_has_eisenstein_constant_term():
    phi = jacobi_basis(4, 1, HOLOMORPHIC, 13)[0]
    f = gritsenko_fj(phi, 3)
    # c(0,0) (-B_4 / 8) E_4 = E_4 / 240
    e4 = eisenstein(4, f.prec)
    for n in range(f.prec):
        assert f.parts[0].coefficient(n, 0) == phi.coefficient(0, 0) * Fraction(e4[n], 240)
    assert fricke_involution_residuals(f, 1) == []


@pytest.mark.parametrize("k,m", [(10, 2), (11, 2), (12, 2)])
def test_lift_satisfies_involution_with_sign(k, m):
    for phi in jacobi_basis(k, m, CUSP, 17):
        f = gritsenko_fj(phi, 4)
        # the lift of J_{k,N} lies in the (-1)^k eigenspace
        assert fricke_involution_residuals(f, (-1) ** k) == []
        assert fricke_involution_residuals(f, -(-1) ** k)


def test_lift_rejects_constant_term_in_odd_or_low_weight():
    bad = JacobiFormQExp(3, 1, 5)
    bad.table[0, bad.rmax] = 1
    with pytest.raises(ValueError):
        gritsenko_fj(bad, 2)
    bad2 = JacobiFormQExp(2, 1, 5)
    bad2.table[0, bad2.rmax] = 1
    with pytest.raises(ValueError):
        gritsenko_fj(bad2, 2)


def test_lift_precision_error():
    (phi,) = jacobi_basis(10, 1, CUSP, 9)
    with pytest.raises(InsufficientPrecisionError):
        gritsenko_fj(phi, 4, 4)


# --- level raising ---------------------------------------------------------------------

@pytest.fixture(scope="module")
def lift45():
    (phi,) = jacobi_basis(10, 1, CUSP, 45)
    return gritsenko_fj(phi, 4, 12)


def test_raise_identity_for_ell_one(lift45):
    for v in ("eta", "theta", "theta_prime"):
        assert level_raise(lift45, 1, v) is lift45


def test_raise_eta(lift45):
    g = level_raise(lift45, 2, "eta")
    assert (g.level, g.depth, g.prec) == (4, 4, 12)
    assert g.parts[1] == apply_U(lift45.parts[1], 2)
    assert fricke_involution_residuals(g, 1) == []


def test_raise_theta(lift45):
    g = level_raise(lift45, 2, "theta")
    assert (g.level, g.depth, g.prec) == (2, 4, 6)
    assert g.parts[3] == apply_V(lift45.parts[3], 2, 6)


def test_raise_theta_prime(lift45):
    g = level_raise(lift45, 2, "theta_prime")
    assert (g.level, g.depth) == (2, 2)
    f = lift45
    expect = f.parts[4] + apply_U(f.parts[1], 2).scale(2 ** 9)
    assert g.parts[2] == expect
    assert g.parts[1] == f.parts[2]


def test_raise_rejects_non_cuspidal_and_bad_variant(lift45):
    phi = jacobi_basis(4, 1, HOLOMORPHIC, 13)[0]
    f = gritsenko_fj(phi, 3)
    with pytest.raises(ValueError):
        level_raise(f, 2, "theta")
    with pytest.raises(ValueError):
        level_raise(lift45, 2, "zeta")
    with pytest.raises(InsufficientPrecisionError):
        level_raise(lift45, 5, "theta_prime")


@pytest.mark.parametrize("ell", [2, 3])
def test_theta_compatibility_on_lift(lift45, ell):
    assert theta_compatibility_residuals(lift45, ell, 1) == []
    assert theta_compatibility_check(lift45, ell, 1)


def test_theta_compatibility_on_odd_weight():
    (phi,) = jacobi_basis(11, 2, CUSP, 23)
    f = gritsenko_fj(phi, 2, 12)
    assert theta_compatibility_check(f, 2, -1)


def test_theta_compatibility_precondition(lift45):
    with pytest.raises(PreconditionError):
        theta_compatibility_check(lift45, 2, -1)
    with pytest.raises(ValueError):
        theta_compatibility_check(lift45, 2, 0)


@st.composite
def symmetric_series(draw, N=1, d=4, prec=12, k=10, eps=1):
    """Random tables obeying the involution condition c(n, r; phi_m) = (-1)^k eps c(m, r; phi_n)."""
    parts = [JacobiFormQExp(k, 0, prec)] + [JacobiFormQExp(k, N * m, prec) for m in range(1, d + 1)]
    s = (-1) ** k * eps
    for m in range(1, d + 1):
        for n in range(1, prec):
            R = isqrt(4 * N * n * m)
            for r in range(0, R + 1):
                if n <= d and n < m:
                    continue
                v = draw(st.integers(-2, 2)) if not (n == m and s == -1) else 0
                for rr in {r, -r}:
                    parts[m].table[n, rr + parts[m].rmax] = v
                    if n <= d and n != m:
                        parts[n].table[m, rr + parts[n].rmax] = s * v
    return TruncatedFormalSeries(k, N, parts)


@settings(max_examples=20, deadline=None)
@given(symmetric_series())
def test_compatibility_follows_from_involution(f):
    # on the common window the divisor sums of theta and theta' pair up term by term
    assert fricke_involution_residuals(f, 1) == []
    assert theta_compatibility_check(f, 2, 1)


def test_theta_compatibility_detects_mutation(lift45):
    parts = [p.scale(1) for p in lift45.parts]
    parts[2].table[1, parts[2].rmax + 1] += 5     # c(1, 1; phi_2) feeds (theta f)_2 at (2, 2)
    bad = TruncatedFormalSeries(10, 1, parts)
    with pytest.raises(PreconditionError):
        theta_compatibility_check(bad, 2, 1)
    res = theta_compatibility_residuals(bad, 2, 1, check_precondition=False)
    assert ((2, 2, 2), 5 * 2 ** 9) in res or ((2, 2, 2), -5 * 2 ** 9) in res


@settings(max_examples=10, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3))
def test_compatibility_is_linear(a, b):
    basis = jacobi_basis(10, 2, CUSP, 23)
    lifts = [gritsenko_fj(phi, 2, 12) for phi in basis]
    combo = lifts[0].scale(a)
    for f in lifts[1:]:
        combo = combo + f.scale(b)
    assert theta_compatibility_check(combo, 2, 1)


def test_window_coverage_of_compatibility(lift45):
    A = level_raise(lift45, 2, "theta")
    B = level_raise(lift45, 2, "theta_prime")
    depth = min(A.depth, B.depth)
    count = sum(2 * isqrt(4 * 2 * n * m) + 1 for n in range(1, depth + 1) for m in range(1, depth + 1))
    assert count > 20
