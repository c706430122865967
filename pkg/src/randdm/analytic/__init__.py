"""Analytic asymptotic spectral laws and the special functions behind them."""

from .densities import (
    BURES_CONSTANT,
    BURES_EDGE,
    arcsine_density,
    brown_radial_density,
    bures_density,
    fc2_closed_form,
    fc_density,
    fc_edge,
    fc_moment,
    mp_density,
    mp_support,
    mu_k_density,
    nu_k_density,
    nu_k_moment,
)
from .joint import joint_logdensity_bures, joint_logdensity_induced
from .laws import (
    SpectralLaw,
    integrate_law,
    law_cdf,
    law_mean_entropy,
    law_mean_entropy_exact,
    law_moment,
    law_second_moment_exact,
    law_support,
)
from .predict import law_for, predicted_chebyshev_entropy, predicted_entropy
from .quadrature import integrate
from .special import ConvergenceError, generalized_hypergeometric, log_gamma

__all__ = [
    "BURES_CONSTANT", "BURES_EDGE", "ConvergenceError", "SpectralLaw",
    "arcsine_density", "brown_radial_density", "bures_density", "fc2_closed_form",
    "fc_density", "fc_edge", "fc_moment", "generalized_hypergeometric", "integrate",
    "integrate_law", "joint_logdensity_bures", "joint_logdensity_induced", "law_cdf",
    "law_for", "law_mean_entropy", "law_mean_entropy_exact", "law_moment",
    "law_second_moment_exact", "law_support", "log_gamma", "mp_density", "mp_support",
    "mu_k_density", "nu_k_density", "nu_k_moment", "predicted_chebyshev_entropy",
    "predicted_entropy",
]
