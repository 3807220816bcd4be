"""Numeric diagnostics and the psi/vanishing-order arithmetic."""
from ._kernels import backend
from .vanishing import (
    OrderInequalityReport, aoki_inequality_check, order_inequality_bound, psi, psi_j, t_condition_sides,
    truncation_threshold,
)
from .numeric import (
    EvaluationPoint, HBGrid, NumericValue, ProbeResult, coefficient_bound, coefficient_bound_check,
    coefficient_bound_violations, eval_jacobi_numeric, hb_integrand, hecke_bound_estimate, partial_sum_probe,
)
from .specialization import (
    SpecializationDatum, SpecializedSeries, lambda_set, specialization_hecke_bound, specialize,
)

__all__ = [
    "OrderInequalityReport", "EvaluationPoint", "HBGrid", "NumericValue", "ProbeResult", "SpecializationDatum",
    "SpecializedSeries", "order_inequality_bound", "aoki_inequality_check", "backend", "coefficient_bound",
    "coefficient_bound_check", "coefficient_bound_violations", "eval_jacobi_numeric", "hb_integrand",
    "hecke_bound_estimate", "lambda_set", "partial_sum_probe", "psi", "psi_j", "t_condition_sides",
    "specialization_hecke_bound", "specialize", "truncation_threshold",
]
