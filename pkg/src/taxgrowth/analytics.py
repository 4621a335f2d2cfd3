"""Stationary law of the private/public log-ratio and the resulting growth rate.

In the white-noise limit the log-ratio ``Delta = h - H`` has the Gibbs density
``P(Delta) ~ exp(-2 U(Delta) / Sigma^2)`` with the confining potential
``U = f e^{-Delta} + phi e^{Delta} - delta Delta``. The growth rate of the
economy is ``g = m_tilde + f <e^{-Delta}> - phi``. The average is available in
closed form through Bessel functions and, independently, by quadrature over
``Delta``; the two routes check each other.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import integrate, optimize

from .errors import DomainError, NumericalError, UnsupportedError, ValidationError
from .model import DerivedParams, ModelParams, derive
from .special import bessel_k_ratio, gamma_fn

METHODS = (
    "closed_form",
    "quadrature",
    "small_phi_expansion",
    "large_phi_expansion",
    "weighted_average",
    "nu_half",
    "nu_zero",
)

# truncation height of 2U/Sigma^2 above its minimum (density factor e^-80)
TRUNCATION_HEIGHT = 80.0
BRANCH_EPS = 1e-9
SMALL_ARG_FRACTION = 0.1
EULER_GAMMA = 0.5772156649015329


@dataclass(frozen=True)
class GibbsSpec:
    """Stationary density of ``Delta`` in the white-noise limit."""

    f: float
    phi: float
    delta: float
    sigma2_total: float

    def __post_init__(self):
        if not self.sigma2_total > 0:
            raise ValidationError("sigma2_total", "Gibbs measure needs Sigma^2 > 0")
        if self.f < 0 or self.phi < 0:
            raise ValidationError("f/phi", "transfer rates must be >= 0")

    @classmethod
    def from_derived(cls, derived: DerivedParams) -> "GibbsSpec":
        p = derived.params
        return cls(f=p.f, phi=p.phi, delta=derived.delta, sigma2_total=derived.sigma2_total)

    @property
    def confining(self) -> bool:
        return self.f > 0 and self.phi > 0

    def potential(self, x):
        return self.f * np.exp(-x) + self.phi * np.exp(x) - self.delta * x

    def _exponent(self, tilt: float):
        # 2U/Sigma^2 - tilt*Delta, written as gamma e^-x + beta e^x - a x
        s2 = self.sigma2_total
        return 2 * self.f / s2, 2 * self.phi / s2, 2 * self.delta / s2 + tilt

    def _bulk(self, tilt: float):
        """Minimum location/value of the tilted exponent and its truncation window."""
        gam, beta, a = self._exponent(tilt)
        root = math.sqrt(a * a + 4 * beta * gam)
        # positive root of beta u^2 - a u - gam = 0, written without cancellation
        u = (a + root) / (2 * beta) if a >= 0 else 2 * gam / (root - a)
        x0 = math.log(u)

        def v(x):
            return gam * math.exp(-x) + beta * math.exp(x) - a * x

        v0 = v(x0)

        def excess(x):
            try:
                return v(x) - v0 - TRUNCATION_HEIGHT
            except OverflowError:
                return math.inf

        edges = []
        for direction in (-1.0, 1.0):
            step = 1.0
            while excess(x0 + direction * step) < 0:
                step *= 2.0
                if step > 1e6:
                    raise NumericalError("could not bracket the Gibbs window")
            edges.append(optimize.brentq(excess, x0, x0 + direction * step, xtol=1e-12))
        return x0, v0, edges[0], edges[1], v

    def _log_integral(self, tilt: float) -> float:
        """``log int exp(-(2U/Sigma^2) + tilt * Delta) dDelta`` over the window."""
        x0, v0, lo, hi, v = self._bulk(tilt)

        def integrand(x):
            return math.exp(v0 - v(x))

        total = 0.0
        for a, b in ((lo, x0), (x0, hi)):
            val, _ = integrate.quad(integrand, a, b, epsabs=0.0, epsrel=1e-12, limit=500)
            total += val
        return math.log(total) - v0

    def log_normalization(self) -> float:
        self._require_confining()
        return self._log_integral(0.0)

    def moment_exp(self, k: float) -> float:
        """``<e^{k Delta}>`` under the normalised density."""
        self._require_confining()
        return math.exp(self._log_integral(k) - self._log_integral(0.0))

    def log_density(self, x):
        x = np.asarray(x, dtype=float)
        gam, beta, a = self._exponent(0.0)
        return -(gam * np.exp(-x) + beta * np.exp(x) - a * x) - self.log_normalization()

    def density(self, x):
        return np.exp(self.log_density(x))

    def window(self):
        """Interval outside which the density is below e^-80 of its peak."""
        self._require_confining()
        _, _, lo, hi, _ = self._bulk(0.0)
        return lo, hi

    def cdf_table(self, n: int = 8001):
        """Grid and cumulative distribution (Simpson) across the window."""
        lo, hi = self.window()
        x = np.linspace(lo, hi, n)
        dens = self.density(x)
        cdf = integrate.cumulative_simpson(dens, x=x, initial=0.0)
        return x, cdf / cdf[-1]

    def _require_confining(self):
        if not self.confining:
            raise UnsupportedError("no stationary measure: the potential is not confining (f = 0 or phi = 0)")


@dataclass(frozen=True)
class GrowthResult:
    g: float
    method: str
    note: str = ""
    details: dict = field(default_factory=dict)


def gibbs_expectation_quadrature(spec: GibbsSpec) -> float:
    """``<e^{-Delta}>`` by adaptive quadrature of the Gibbs density."""
    return spec.moment_exp(-1.0)


def closed_form_expectation(derived: DerivedParams) -> float:
    """``<e^{-Delta}> = sqrt(phi/f) K_{nu-1}(z) / K_nu(z)`` with ``z = 4 sqrt(f phi) / Sigma^2``."""
    p = derived.params
    if p.f <= 0 or p.phi <= 0:
        raise UnsupportedError("closed form needs f > 0 and phi > 0 (Bessel argument degenerates)")
    if not derived.sigma2_total > 0:
        raise UnsupportedError("closed form needs Sigma^2 > 0")
    z = derived.bessel_argument
    return math.sqrt(p.phi / p.f) * bessel_k_ratio(derived.nu, z)


def validity_note(derived: DerivedParams) -> str:
    p = derived.params
    return f"phi*tau={p.phi * p.tau:.6g} f*tau={p.f * p.tau:.6g}"


def _boundary_growth(derived: DerivedParams) -> Optional[GrowthResult]:
    """Growth rate when one of the transfer rates vanishes (no Bessel needed)."""
    p = derived.params
    mt = derived.m_tilde
    if p.f == 0 and p.phi == 0:
        return GrowthResult(mt, "closed_form", "uncoupled sectors")
    if p.phi == 0:
        # Delta escapes to +inf when delta > 0, otherwise settles with f<e^-Delta> = -delta
        return GrowthResult(max(mt, p.mu_tilde - p.f), "closed_form", "phi = 0 limit")
    if p.f == 0:
        return GrowthResult(mt - p.phi, "closed_form", "f = 0: private sector receives no inflow")
    return None


def growth_rate(derived: DerivedParams, method: str = "closed_form") -> GrowthResult:
    """Long-run growth rate ``g = m_tilde + f <e^{-Delta}> - phi`` by the chosen method."""
    p = derived.params
    mt = derived.m_tilde
    if method in ("closed_form", "quadrature"):
        limit = _boundary_growth(derived)
        if limit is not None:
            return GrowthResult(limit.g, method, limit.note)
        if method == "closed_form":
            mean = closed_form_expectation(derived)
        else:
            mean = gibbs_expectation_quadrature(GibbsSpec.from_derived(derived))
        return GrowthResult(mt + p.f * mean - p.phi, method, validity_note(derived))
    if method == "small_phi_expansion":
        return small_phi_expansion(derived)
    if method == "large_phi_expansion":
        return large_phi_expansion(derived)
    if method == "weighted_average":
        if p.f + p.phi <= 0:
            raise UnsupportedError("weighted_average needs f + phi > 0")
        g = (p.f * mt + p.phi * p.mu_tilde) / (p.f + p.phi)
        return GrowthResult(g, method, "valid when f, phi are large")
    if method == "nu_half":
        if abs(derived.nu - 0.5) >= BRANCH_EPS:
            raise UnsupportedError(f"nu_half requires |nu - 1/2| < {BRANCH_EPS}, got nu = {derived.nu!r}")
        return GrowthResult(mt - p.phi + math.sqrt(p.f * p.phi), method, validity_note(derived))
    if method == "nu_zero":
        return _nu_zero(derived)
    raise UnsupportedError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")


def _require_small_phi(derived: DerivedParams, what: str):
    p = derived.params
    if not 2.0 * math.sqrt(p.f * p.phi) < SMALL_ARG_FRACTION * derived.sigma2_total:
        raise UnsupportedError(
            f"{what} requires 2 sqrt(f phi) < {SMALL_ARG_FRACTION} Sigma^2 "
            f"(got {2.0 * math.sqrt(p.f * p.phi):.3g} vs {derived.sigma2_total:.3g})"
        )


def _nu_zero(derived: DerivedParams) -> GrowthResult:
    # K_1(z) ~ 1/z and K_0(z) ~ -ln(z/2) - gamma_E give
    # f <e^-Delta> ~ (Sigma^2/4) / (-ln(2 sqrt(f phi)/Sigma^2) - gamma_E)
    p = derived.params
    if abs(derived.nu) >= BRANCH_EPS:
        raise UnsupportedError(f"nu_zero requires |nu| < {BRANCH_EPS}, got nu = {derived.nu!r}")
    if p.f <= 0 or p.phi <= 0:
        raise UnsupportedError("nu_zero requires f > 0 and phi > 0")
    _require_small_phi(derived, "nu_zero")
    s2 = derived.sigma2_total
    log_term = -math.log(2.0 * math.sqrt(p.f * p.phi) / s2) - EULER_GAMMA
    g = derived.m_tilde - p.phi + 0.25 * s2 / log_term
    return GrowthResult(g, "nu_zero", "leading order in 1/ln(sqrt(f phi)/Sigma^2)")


def _gamma_ratio(a: float) -> float:
    return gamma_fn(1.0 - a) / gamma_fn(a)


def small_phi_expansion(derived: DerivedParams) -> GrowthResult:
    """Leading behaviour of ``g`` as ``phi -> 0`` at fixed ``f``."""
    _require_small_phi(derived, "small_phi_expansion")
    p = derived.params
    nu = derived.nu
    s2 = derived.sigma2_total
    mt, mu = derived.m_tilde, p.mu_tilde
    if abs(nu) < BRANCH_EPS:
        raise UnsupportedError("nu = 0 is a branch point; use method='nu_zero'")
    if abs(nu - 1.0) < BRANCH_EPS:
        raise UnsupportedError("nu = 1 is a branch point; use the closed form")
    if 0.0 < nu < 1.0:
        coef = _gamma_ratio(nu) * (0.5 * s2) ** (1.0 - 2.0 * nu)
        g = mt - p.phi + coef * p.f**nu * p.phi**nu
        return GrowthResult(g, "small_phi_expansion", "0 < nu < 1", {"branch": "0<nu<1"})
    if nu > 1.0:
        slope = (mu - mt + 0.5 * s2) / (mt - mu + p.f - 0.5 * s2)
        return GrowthResult(mt + slope * p.phi, "small_phi_expansion", "nu > 1", {"branch": "nu>1", "slope": slope})
    if nu > -1.0 + BRANCH_EPS:
        a = -nu
        coef = _gamma_ratio(a) * (0.5 * s2) ** (1.0 - 2.0 * a)
        g = mu - p.f + coef * p.f**a * p.phi**a
        return GrowthResult(g, "small_phi_expansion", "-1 < nu < 0", {"branch": "-1<nu<0"})
    raise UnsupportedError(f"no small-phi expansion for nu <= -1 (nu = {nu!r}); use the closed form")


def large_phi_expansion(derived: DerivedParams, tau: Optional[float] = None) -> GrowthResult:
    """``g ~ mu_tilde + C / phi`` with ``C = Sigma^2/(4 tau) - f (mu_tilde - m_tilde - f)``."""
    p = derived.params
    tau = p.tau if tau is None else tau
    if not tau > 0:
        raise ValidationError("tau", "must be > 0")
    if not p.phi > 0:
        raise UnsupportedError("large_phi_expansion needs phi > 0")
    c = derived.sigma2_total / (4.0 * tau) - p.f * (p.mu_tilde - derived.m_tilde - p.f)
    approach = "above" if c > 0 else ("below" if c < 0 else "exact")
    return GrowthResult(
        p.mu_tilde + c / p.phi,
        "large_phi_expansion",
        f"approach from {approach}",
        {"C": c, "approach": approach},
    )


# ----------------------------------------------------------------------------
# optimal tax


@dataclass(frozen=True)
class OptimalTax:
    """Growth-maximising tax rate.

    ``phi_star`` comes from the numerical maximiser and is authoritative; it is
    ``inf`` when growth keeps rising up to the window edge and the large-phi
    asymptote is approached from below. ``phi_root`` is the small-phi
    closed-form root, present only when ``0 < nu < 1``.
    """

    phi_star: float
    g_star: float
    excess: float
    m_tilde: float
    phi_root: Optional[float]
    g_root: Optional[float]
    root_valid: bool
    unimodal: bool
    at_window_edge: bool
    window: tuple
    warning: Optional[str] = None


def _profile_params(params: ModelParams, phi: float, hold_nu: Optional[float]) -> ModelParams:
    p = params.replace(phi=phi)
    if hold_nu is None:
        return p
    d = derive(p)
    # choose mu_tilde so that 2 delta / Sigma^2 stays at hold_nu
    mu = d.m_tilde + p.f - phi - 0.5 * hold_nu * d.sigma2_total
    return p.replace(mu_tilde=mu)


def growth_profile(params: ModelParams, phis, hold_nu: Optional[float] = None, method: str = "closed_form"):
    """``g(phi)`` on an array of tax rates (other parameters fixed, or nu held)."""
    return np.array(
        [growth_rate(derive(_profile_params(params, float(ph), hold_nu)), method).g for ph in np.atleast_1d(phis)]
    )


def default_window(params: ModelParams) -> tuple:
    d = derive(params)
    return 0.0, max(10.0 * params.f, 10.0 * d.sigma2_total, 1.0 / params.tau)


def small_phi_root(params: ModelParams, hold_nu: Optional[float] = None):
    """Root of dg/dphi = 0 for the small-phi expansion, or None outside 0 < nu < 1."""
    d = derive(params.replace(phi=0.0))
    nu = d.nu if hold_nu is None else hold_nu
    if not (BRANCH_EPS < nu < 1.0 - BRANCH_EPS) or params.f <= 0:
        return None
    s2 = d.sigma2_total
    ratio = nu * gamma_fn(1.0 - nu) / gamma_fn(nu)
    return 0.5 * s2 * ratio ** (1.0 / (1.0 - nu)) * (2.0 * params.f / s2) ** (nu / (1.0 - nu))


def optimal_tax(
    params: ModelParams,
    window: Optional[tuple] = None,
    hold_nu: Optional[float] = None,
    n_grid: int = 400,
    xtol: float = 1e-8,
) -> OptimalTax:
    """Maximise the closed-form growth rate over ``phi`` in ``window``.

    A coarse scan (``phi = lo`` plus a geometric grid) locates the maximum and
    counts slope sign changes; a bounded Brent search then refines it to
    ``xtol``. With ``hold_nu`` set, ``mu_tilde`` co-varies with ``phi`` so the
    reduced drift stays fixed.
    """
    if params.f <= 0:
        raise UnsupportedError("optimal tax search needs f > 0")
    lo, hi = default_window(params) if window is None else (float(window[0]), float(window[1]))
    if not (0 <= lo < hi and math.isfinite(hi)):
        raise ValidationError("window", f"expected 0 <= lo < hi < inf, got {(lo, hi)!r}")

    def g_of(phi):
        return growth_rate(derive(_profile_params(params, phi, hold_nu)), "closed_form").g

    span = hi - lo
    grid = np.concatenate([[lo], lo + np.geomspace(span * 1e-10, span, n_grid - 1)])
    values = np.array([g_of(float(ph)) for ph in grid])
    if not np.all(np.isfinite(values)):
        raise NumericalError("growth profile is not finite on the search grid")

    diffs = np.diff(values)
    scale = max(1e-300, float(np.max(np.abs(values))))
    signs = np.sign(diffs[np.abs(diffs) > 1e-12 * scale])
    n_changes = int(np.count_nonzero(signs[1:] != signs[:-1])) if signs.size else 0
    unimodal = n_changes <= 1

    m_tilde = derive(params).m_tilde
    phi_root = small_phi_root(params, hold_nu)
    g_root = None
    root_valid = False
    if phi_root is not None:
        root_valid = 2.0 * math.sqrt(params.f * phi_root) < SMALL_ARG_FRACTION * derive(params).sigma2_total
        if lo <= phi_root <= hi:
            g_root = g_of(phi_root)

    i = int(np.argmax(values))
    warning = None
    at_edge = False
    if not unimodal:
        warning = f"non-unimodal growth profile ({n_changes} slope sign changes); returning grid maximum"
        warnings.warn(warning, RuntimeWarning, stacklevel=2)
        phi_star, g_star = float(grid[i]), float(values[i])
    elif i == 0 and values[0] >= values[1]:
        phi_star, g_star = float(grid[0]), float(values[0])
    elif i == len(grid) - 1:
        at_edge = True
        c = large_phi_expansion(derive(_profile_params(params, hi, hold_nu))).details["C"]
        if c <= 0:
            phi_star, g_star = math.inf, derive(_profile_params(params, hi, hold_nu)).params.mu_tilde
            if hold_nu is not None:
                g_star = float(values[-1])
        else:
            phi_star, g_star = float(grid[-1]), float(values[-1])
            warning = "maximum at the upper edge of the search window"
    else:
        a, b = float(grid[max(i - 1, 0)]), float(grid[i + 1])
        res = optimize.minimize_scalar(
            lambda ph: -g_of(ph), bounds=(a, b), method="bounded", options={"xatol": xtol, "maxiter": 500}
        )
        phi_star, g_star = float(res.x), float(-res.fun)
        if values[i] > g_star:
            phi_star, g_star = float(grid[i]), float(values[i])

    return OptimalTax(
        phi_star=phi_star,
        g_star=g_star,
        excess=g_star - m_tilde,
        m_tilde=m_tilde,
        phi_root=phi_root,
        g_root=g_root,
        root_valid=root_valid,
        unimodal=unimodal,
        at_window_edge=at_edge,
        window=(lo, hi),
        warning=warning,
    )
