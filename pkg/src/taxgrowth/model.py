"""Parameter records, dressed quantities and the four-regime classifier.

All rates are per year. The private sector grows at the dressed rate
``m_tilde = m + (1 - rho) s^2 / 2`` and the public sector at ``mu_tilde``
(taken as an input). The log-ratio of private to public wealth feels the
drift ``delta = m_tilde - mu_tilde + f - phi`` and a noise of variance
``Sigma^2 = sigma^2 + rho s^2``.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, UnsupportedError, ValidationError

KAPPA_SUM_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Raw economic parameters of the two-sector model.

    ``kappa`` is the vector of redistribution weights (one per agent). Leaving
    it as ``None`` means uniform weights ``1/n_agents``.
    """

    m: float
    s: float
    rho: float
    tau: float
    mu_tilde: float
    sigma: float
    phi: float
    f: float
    j0: float = 0.0
    n_agents: int = 1
    kappa: Optional[Sequence[float]] = None

    def __post_init__(self):
        for name in ("m", "s", "rho", "tau", "mu_tilde", "sigma", "phi", "f", "j0"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float, np.floating, np.integer)):
                raise ValidationError(name, f"expected a real number, got {value!r}")
            if not math.isfinite(value):
                raise ValidationError(name, f"must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        for name in ("s", "sigma", "phi", "f", "j0"):
            if getattr(self, name) < 0:
                raise ValidationError(name, f"must be >= 0, got {getattr(self, name)!r}")
        if self.tau <= 0:
            raise ValidationError("tau", f"must be > 0, got {self.tau!r}")
        if not 0.0 <= self.rho <= 1.0:
            raise ValidationError("rho", f"must lie in [0, 1], got {self.rho!r}")
        if isinstance(self.n_agents, bool) or int(self.n_agents) != self.n_agents:
            raise ValidationError("n_agents", f"must be an integer, got {self.n_agents!r}")
        object.__setattr__(self, "n_agents", int(self.n_agents))
        if self.n_agents < 1:
            raise ValidationError("n_agents", f"must be >= 1, got {self.n_agents!r}")
        if self.kappa is not None:
            kappa = tuple(float(k) for k in self.kappa)
            if len(kappa) != self.n_agents:
                raise ValidationError(
                    "kappa", f"needs {self.n_agents} entries, got {len(kappa)}"
                )
            if any(not math.isfinite(k) or k < 0 for k in kappa):
                raise ValidationError("kappa", "entries must be finite and >= 0")
            total = math.fsum(kappa)
            if abs(total - 1.0) > KAPPA_SUM_TOL:
                raise ValidationError("kappa", f"must sum to 1, sums to {total!r}")
            object.__setattr__(self, "kappa", kappa)

    def replace(self, **changes) -> "ModelParams":
        return dataclasses.replace(self, **changes)

    def weights(self) -> np.ndarray:
        """Redistribution weights as an array (uniform when unset)."""
        if self.kappa is None:
            return np.full(self.n_agents, 1.0 / self.n_agents)
        return np.asarray(self.kappa, dtype=float)


@dataclass(frozen=True)
class DerivedParams:
    """Dressed quantities computed once from a :class:`ModelParams`.

    ``theta_minus`` is ``None`` when ``f == 0``: the threshold carries a
    ``1/f`` singularity and we prefer to surface it rather than return inf.
    """

    params: ModelParams
    m_tilde: float
    sigma2_total: float
    delta: float
    nu: float
    theta_plus: float
    theta_minus: Optional[float]

    @property
    def gap(self) -> float:
        """Performance gap ``m_tilde - mu_tilde``."""
        return self.m_tilde - self.params.mu_tilde

    @property
    def bessel_argument(self) -> float:
        """``4 sqrt(f phi) / Sigma^2``, the argument of the Bessel functions."""
        p = self.params
        return 4.0 * math.sqrt(p.f * p.phi) / self.sigma2_total


def derive(params: ModelParams) -> DerivedParams:
    p = params
    m_tilde = p.m + 0.5 * (1.0 - p.rho) * p.s**2
    sigma2 = p.sigma**2 + p.rho * p.s**2
    delta = m_tilde - p.mu_tilde + p.f - p.phi
    if sigma2 > 0:
        nu = 2.0 * delta / sigma2
    elif delta == 0:
        nu = math.nan
    else:
        nu = math.copysign(math.inf, delta)
    theta_minus = p.f + sigma2 / (4.0 * p.tau * p.f) if p.f > 0 else None
    return DerivedParams(
        params=p,
        m_tilde=m_tilde,
        sigma2_total=sigma2,
        delta=delta,
        nu=nu,
        theta_plus=0.5 * sigma2,
        theta_minus=theta_minus,
    )


class RegimeLabel(str, enum.Enum):
    NO_TAX = "NoTax"
    MODERATE_TAX = "ModerateTax"
    STRONG_TAX = "StrongTax"
    FULL_TAX = "FullTax"

    @property
    def number(self) -> int:
        return list(RegimeLabel).index(self) + 1


@dataclass(frozen=True)
class Regime:
    label: RegimeLabel
    gap: float
    theta_plus: float
    theta_minus: float

    def as_dict(self) -> dict:
        return {
            "regime": self.label.value,
            "regime_number": self.label.number,
            "gap": self.gap,
            "theta_plus": self.theta_plus,
            "theta_minus": self.theta_minus,
        }


def classify(derived: DerivedParams) -> Regime:
    """Place the economy in one of the four tax regimes.

    Ties at a threshold go to the adjacent taxed regime.
    """
    if derived.theta_minus is None:
        raise UnsupportedError("classification needs f > 0 (theta_minus is undefined at f = 0)")
    gap = derived.gap
    tp, tm = derived.theta_plus, derived.theta_minus
    if gap > tp:
        label = RegimeLabel.NO_TAX
    elif gap > 0:
        label = RegimeLabel.MODERATE_TAX
    elif gap >= -tm:
        label = RegimeLabel.STRONG_TAX
    else:
        label = RegimeLabel.FULL_TAX
    return Regime(label=label, gap=gap, theta_plus=tp, theta_minus=tm)


def pareto_alpha(params: ModelParams) -> float:
    """Mean-field Pareto tail exponent ``1 + 2 (J0 + phi) / ((1 - rho) s^2)``."""
    idio = (1.0 - params.rho) * params.s**2
    if idio <= 0:
        raise DomainError("tail exponent undefined: idiosyncratic variance (1 - rho) s^2 is zero")
    return 1.0 + 2.0 * (params.j0 + params.phi) / idio


def gini_from_alpha(alpha: float) -> float:
    """Gini coefficient ``1 / (2 alpha - 1)`` of a Pareto tail, clamped to [0, 1]."""
    if not alpha > 0.5:
        raise DomainError(f"Gini relation needs alpha > 1/2, got {alpha!r}")
    if math.isinf(alpha):
        return 0.0
    return min(1.0, max(0.0, 1.0 / (2.0 * alpha - 1.0)))
