"""Exact Jacobi forms and truncated formal Fourier-Jacobi series of paramodular level."""
from .formal import (
    GroupElement, MatrixIndexEntry, SolutionSpace, SymmetryReport, TruncatedFormalSeries, act_index,
    cauchy_product, coefficient_at, default_depth, dim_upper_via_orders, fricke_index_map,
    fricke_involution_residuals, gamma0_symmetry_residuals, involution_solution_space,
)
from .jacobi import (
    CUSP, HOLOMORPHIC, WEAK, InsufficientPrecisionError, JacobiFormQExp, SpaceKind, WindowError,
    check_form_invariants, coefficient, default_prec, jacobi_basis, jacobi_dim, minimal_prec, order_kind, order_of,
)
from .operators import (
    PreconditionError, apply_U, apply_V, gritsenko_fj, level_raise, theta_compatibility_check,
    theta_compatibility_residuals,
)

__version__ = "0.1.0"

__all__ = [
    "CUSP", "HOLOMORPHIC", "WEAK", "GroupElement", "InsufficientPrecisionError", "JacobiFormQExp",
    "MatrixIndexEntry", "PreconditionError", "SolutionSpace", "SpaceKind", "SymmetryReport",
    "TruncatedFormalSeries", "WindowError", "act_index", "apply_U", "apply_V", "cauchy_product",
    "check_form_invariants", "coefficient", "coefficient_at", "default_depth", "default_prec",
    "dim_upper_via_orders", "fricke_index_map", "fricke_involution_residuals", "gamma0_symmetry_residuals",
    "gritsenko_fj", "involution_solution_space", "jacobi_basis", "jacobi_dim", "level_raise", "minimal_prec",
    "order_kind", "order_of", "theta_compatibility_check", "theta_compatibility_residuals",
]
