"""Growth, tail and inequality estimators for simulated ensembles."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError, ValidationError


@dataclass(frozen=True)
class GrowthEstimate:
    g_hat: float
    std_error: float
    n_paths: int
    span: float


def estimate_growth(paths, variable: str = "h", remove_noise: bool = False) -> GrowthEstimate:
    """Mean over paths of ``(x(T) - x(T0)) / (T - T0)`` after burn-in.

    ``variable`` is ``"h"`` (private) or ``"H"`` (public). With
    ``remove_noise`` the recorded zero-mean noise integral is subtracted from
    each path, leaving the time-averaged drift; the estimator stays unbiased
    with a much smaller spread. The standard error is the across-path one.
    """
    if variable not in ("h", "H"):
        raise ValidationError("variable", f"expected 'h' or 'H', got {variable!r}")
    if paths.t_burnin >= paths.t_total:
        raise ValidationError("t_burnin", "burn-in must end before the horizon")
    incr, span = paths.growth_increments(variable, remove_noise)
    n = incr.size
    if n < 2:
        raise ValidationError("n_paths", "need at least 2 independent paths for a standard error")
    rates = incr / span
    return GrowthEstimate(
        g_hat=float(rates.mean()),
        std_error=float(rates.std(ddof=1) / math.sqrt(n)),
        n_paths=n,
        span=span,
    )


@dataclass(frozen=True)
class HillEstimate:
    alpha: float
    std_error: float
    k: int


def _wealth_array(snapshot) -> np.ndarray:
    w = getattr(snapshot, "wealth", snapshot)
    return np.asarray(w, dtype=float).ravel()


def default_hill_k(n: int) -> int:
    return int(math.ceil(n**0.6))


def _hill(sorted_desc: np.ndarray, k: int) -> float:
    logs = np.log(sorted_desc[:k] / sorted_desc[k])
    total = logs.sum()
    if total <= 0:
        raise DomainError("Hill estimator undefined: the top order statistics are all tied")
    return k / total


def hill_tail_exponent(snapshot, k: int = None, n_boot: int = 200, seed: int = 0) -> HillEstimate:
    """Hill estimate of the Pareto index from the ``k`` largest wealths.

    ``alpha = k / sum_{i<=k} ln(w_(i) / w_(k+1))``; the standard error comes
    from ``n_boot`` bootstrap resamples of the whole snapshot.
    """
    w = _wealth_array(snapshot)
    n = w.size
    k = default_hill_k(n) if k is None else int(k)
    if k < 10 or k > n / 10:
        raise ValidationError("k", f"need 10 <= k <= N/10 = {n / 10:g}, got {k}")
    if np.any(w <= 0):
        raise DomainError("Hill estimator needs strictly positive wealths")
    top = -np.sort(-w)
    alpha = _hill(top, k)
    rng = np.random.default_rng(seed)
    boots = np.empty(n_boot)
    for b in range(n_boot):
        sample = w[rng.integers(0, n, n)]
        part = -np.partition(-sample, k)[: k + 1]
        part.sort()
        try:
            boots[b] = _hill(part[::-1], k)
        except DomainError:
            boots[b] = np.nan
    se = float(np.nanstd(boots, ddof=1)) if n_boot > 1 else math.nan
    return HillEstimate(alpha=alpha, std_error=se, k=k)


def sample_gini(snapshot) -> float:
    """Gini coefficient ``sum_ij |w_i - w_j| / (2 N^2 mean)`` via the sorted form."""
    w = np.sort(_wealth_array(snapshot))
    n = w.size
    if n < 2:
        raise ValidationError("wealth", "Gini needs at least 2 agents")
    if np.any(w < 0):
        raise DomainError("Gini needs non-negative wealths")
    total = w.sum()
    if total <= 0:
        raise DomainError("Gini undefined: all wealths are zero")
    ranks = np.arange(1, n + 1)
    g = float(np.sum((2 * ranks - n - 1) * w) / (n * total))
    return max(g, 0.0)  # rounding can leave -1e-17 for equal wealths
