"""Growth of a two-sector economy (private and public wealth) under a wealth tax."""

from .analytics import GrowthResult, OptimalTax, growth_rate, optimal_tax
from .errors import DomainError, NumericalError, TaxGrowthError, UnsupportedError, ValidationError
from .model import DerivedParams, ModelParams, Regime, RegimeLabel, classify, derive, gini_from_alpha, pareto_alpha
from .special import bessel_k, bessel_k_ratio, gamma_fn

__all__ = [
    "DerivedParams",
    "DomainError",
    "GrowthResult",
    "ModelParams",
    "NumericalError",
    "OptimalTax",
    "Regime",
    "RegimeLabel",
    "TaxGrowthError",
    "UnsupportedError",
    "ValidationError",
    "bessel_k",
    "bessel_k_ratio",
    "classify",
    "derive",
    "gamma_fn",
    "gini_from_alpha",
    "growth_rate",
    "optimal_tax",
    "pareto_alpha",
]
