from .bernoulli import bernoulli, bernoulli_table, sigma, zeta_one_minus
from .generators import GENERATOR_NAMES, generator
from .linalg import ExactMatrix, exact_kernel, rank, rref
from .series import BivariateQExpansion, QSeries, SeriesError, series_invert, series_mul

__all__ = [
    "BivariateQExpansion", "ExactMatrix", "GENERATOR_NAMES", "QSeries", "SeriesError",
    "bernoulli", "bernoulli_table", "exact_kernel", "generator", "rank", "rref",
    "series_invert", "series_mul", "sigma", "zeta_one_minus",
]
