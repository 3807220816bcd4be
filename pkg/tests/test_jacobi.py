from fractions import Fraction
from math import ceil

import numpy as np
import pytest

from formal_jacobi.jacobi import (
    CUSP, HOLOMORPHIC, INFINITY, WEAK, InsufficientPrecisionError, JacobiFormQExp, SpaceKind, WindowError,
    check_form_invariants, default_prec, echelonize, jacobi_basis, jacobi_dim, jacobi_mul, minimal_prec,
    order_kind, order_of, positions, weak_monomials,
)


def dim_modular(k: int) -> int:
    if k < 0 or k % 2:
        return 0
    if k == 0:
        return 1
    if k == 2:
        return 0
    return k // 12 + (0 if k % 12 == 2 else 1)


def dim_jacobi_oracle(k: int, m: int) -> int:
    """Closed dimension formula for J_{k,m}, valid for k >= 3."""
    if k % 2 == 0:
        return sum(dim_modular(k + 2 * j) - ceil(j * j / (4 * m)) for j in range(m + 1))
    return sum(dim_modular(k + 2 * j - 1) - ceil(j * j / (4 * m)) for j in range(1, m))


@pytest.mark.parametrize("k", range(3, 15))
@pytest.mark.parametrize("m", range(1, 6))
def test_dimension_matches_closed_formula(k, m):
    assert jacobi_dim(k, m) == dim_jacobi_oracle(k, m)


@pytest.mark.parametrize("k", [4, 6, 8, 10, 12, 14, 16])
def test_index_one_cusp_dimension(k):
    # J_{k,1} is isomorphic to M_k + S_{k+2}; the cusp part to S_k + S_{k+2}
    s = lambda w: max(dim_modular(w) - 1, 0)
    assert jacobi_dim(k, 1, CUSP) == s(k) + s(k + 2)


@pytest.mark.parametrize("k,m", [(0, 1), (-2, 1), (-1, 2), (4, 3), (5, 4)])
def test_weak_dimension_counts_monomials(k, m):
    if k % 2 == 0:
        expect = sum(dim_modular(k + 2 * j) for j in range(m + 1))
    else:
        expect = sum(dim_modular(k + 1 + 2 * j) for j in range(m - 1))
    assert jacobi_dim(k, m, WEAK) == expect


def test_cusp_11_2_stable_across_prec():
    a = jacobi_basis(11, 2, CUSP, 12)
    b = jacobi_basis(11, 2, CUSP, 17)
    assert len(a) == len(b) == 1
    assert b[0].truncate(12) == a[0]


def test_basis_truncation_consistency():
    lo = jacobi_basis(10, 3, HOLOMORPHIC, 8)
    hi = jacobi_basis(10, 3, HOLOMORPHIC, 12)
    assert [f.truncate(8) for f in hi] == lo


def test_known_cusp_form_10_1():
    (phi,) = jacobi_basis(10, 1, CUSP, 4)
    # Delta * phi_{-2,1}, normalized to c(1, 0) = 1
    assert phi.coefficient(1, 0) == 1
    assert phi.coefficient(1, 1) == phi.coefficient(1, -1) == Fraction(-1, 2)
    assert phi.coefficient(2, 0) == -18  # (-12 + 48) / (-2)
    assert order_of(phi) == 1


def test_invariants_of_computed_bases():
    for k, m, kind in [(10, 2, HOLOMORPHIC), (11, 3, CUSP), (12, 4, CUSP), (9, 4, HOLOMORPHIC)]:
        for phi in jacobi_basis(k, m, kind):
            assert check_form_invariants(phi) == []
            if kind == CUSP:
                assert all(4 * m * n - r * r > 0 for (n, r), _ in phi.items())


def test_weak_generators_pass_weak_invariants():
    for _, f in weak_monomials(0, 2, 5):
        assert check_form_invariants(f, holomorphic=False) == []
        assert f.weak_support_ok()


def test_invariant_checker_flags_damage():
    (phi,) = jacobi_basis(10, 1, CUSP, 5)
    bad = phi.scale(1)
    bad.table[2, bad.rmax + 1] += 1
    assert check_form_invariants(bad)


def test_order_filtration():
    assert len(jacobi_basis(10, 4, order_kind(1))) <= len(jacobi_basis(10, 4, HOLOMORPHIC))
    assert jacobi_basis(10, 1, order_kind(0)) == jacobi_basis(10, 1, HOLOMORPHIC)
    assert jacobi_basis(4, 1, order_kind(1)) == []
    for phi in jacobi_basis(12, 4, order_kind(2)):
        assert order_of(phi) >= 2


def test_order_subspace_not_inside_cusp_space():
    # holomorphic, order >= 1 but with a zero-discriminant coefficient: E_{10,4} - E_{10,1}|U_2 type forms
    found = False
    for phi in jacobi_basis(10, 4, order_kind(1)):
        if any(4 * 4 * n == r * r for (n, r), _ in phi.items()):
            found = True
    assert found


def test_cusp_inside_holomorphic_inside_weak():
    for k, m in [(10, 2), (12, 3)]:
        prec = default_prec(k, m)
        assert len(jacobi_basis(k, m, CUSP, prec)) <= len(jacobi_basis(k, m, HOLOMORPHIC, prec))
        assert len(jacobi_basis(k, m, HOLOMORPHIC, prec)) <= len(jacobi_basis(k, m, WEAK, prec))


def test_echelon_form_is_canonical():
    basis = jacobi_basis(12, 3, HOLOMORPHIC)
    assert echelonize(list(reversed(basis))) == basis
    mixed = [basis[0] + basis[1], basis[1]] + [b.scale(5) for b in basis[2:]]
    assert echelonize(mixed) == basis


def test_insufficient_precision():
    need = minimal_prec(10, 4)
    with pytest.raises(InsufficientPrecisionError):
        jacobi_basis(10, 4, HOLOMORPHIC, need - 1)
    assert jacobi_basis(10, 4, HOLOMORPHIC, need)


def test_coefficient_access():
    (phi,) = jacobi_basis(10, 1, CUSP, 4)
    assert phi.coefficient(0, 0) == 0           # cusp form
    assert phi.coefficient(1, 7) == 0           # outside the support
    assert phi[(1, 0)] == phi.coefficient(1, 0)
    assert phi.coefficient(-1, 0) == 0
    with pytest.raises(WindowError):
        phi.coefficient(4, 0)


def test_product_of_jacobi_forms():
    (a,) = jacobi_basis(10, 1, CUSP, 6)
    e4 = jacobi_basis(4, 1, HOLOMORPHIC, 6)[0]
    p = jacobi_mul(a, e4)
    assert (p.weight, p.index) == (14, 2)
    # brute-force convolution of the two tables
    for n in range(6):
        for r in range(-6, 7):
            expect = sum(a.coefficient(n1, r1) * e4.coefficient(n - n1, r - r1)
                         for n1 in range(n + 1) for r1 in range(-a.rmax, a.rmax + 1))
            assert p.coefficient(n, r) == expect
    assert check_form_invariants(p) == []


def test_space_kind_parsing():
    assert SpaceKind.parse("hol") == HOLOMORPHIC
    assert SpaceKind.parse("cusp") == CUSP
    assert SpaceKind.parse("order:3") == order_kind(3)
    assert SpaceKind.parse("order:0") == HOLOMORPHIC
    assert str(order_kind(2)) == "order:2"
    with pytest.raises(ValueError):
        SpaceKind.parse("whatever")


def test_positions_order():
    pos = positions(1, 2)
    assert pos[:4] == [(0, 0), (0, 1), (0, -1), (1, 0)]


def test_zero_form():
    z = JacobiFormQExp(10, 2, 4)
    assert z.is_zero()
    assert order_of(z) == INFINITY
    assert z.coeffs == {}


def test_table_recentring():
    t = np.array([[0, 1, 0]], dtype=object)
    f = JacobiFormQExp(0, 1, 1, t)
    assert f.coefficient(0, 0) == 1
    with pytest.raises(ValueError):
        JacobiFormQExp(0, 1, 1, np.array([[0, 1]], dtype=object))
