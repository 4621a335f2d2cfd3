import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taxgrowth.analytics import (
    GibbsSpec,
    closed_form_expectation,
    default_window,
    gibbs_expectation_quadrature,
    growth_profile,
    growth_rate,
    large_phi_expansion,
    optimal_tax,
    small_phi_expansion,
    small_phi_root,
)
from taxgrowth.errors import UnsupportedError, ValidationError
from taxgrowth.model import ModelParams, derive

from oracles import gibbs_moment_brute

BASE = dict(m=0.03, s=0.10, rho=0.2, tau=4.0, sigma=0.05, f=0.02)
S2 = 0.0045
MT = 0.034

# (f, phi, delta, Sigma^2) -> <e^{-Delta}>, frozen from a dense uniform Simpson
# rule (tests/oracles.py) and cross-checked against scipy.special.kv.
MOMENTS = [
    ((0.02, 0.005, 0.001125, 0.0045), 0.5),
    ((0.3, 0.2, -0.05, 0.1), 0.9443978266500855),
    ((0.05, 0.5, 0.01, 0.02), 3.113427491754519),
    ((0.001, 0.002, -0.004, 0.01), 5.020358459684007),
]


def derived_from(f, phi, delta, s2):
    # rho = 0, s = 0 so Sigma^2 = sigma^2 and m_tilde = m
    p = ModelParams(m=0.0, s=0.0, rho=0.0, tau=1.0, sigma=math.sqrt(s2), f=f, phi=phi, mu_tilde=f - phi - delta)
    return derive(p)


def with_nu(nu, phi, **kw):
    """Reference economy with mu_tilde chosen so that nu takes the given value."""
    f = kw.pop("f", BASE["f"])
    return ModelParams(**{**BASE, "f": f, **kw}, phi=phi, mu_tilde=MT + f - phi - nu * S2 / 2)


@pytest.mark.parametrize("args,expected", MOMENTS)
def test_moment_table(args, expected):
    d = derived_from(*args)
    assert closed_form_expectation(d) == pytest.approx(expected, rel=1e-12)
    assert gibbs_expectation_quadrature(GibbsSpec.from_derived(d)) == pytest.approx(expected, rel=1e-10)


def test_quadrature_against_brute_force():
    args = (0.07, 0.02, 0.003, 0.01)
    spec = GibbsSpec.from_derived(derived_from(*args))
    assert spec.moment_exp(1.0) == pytest.approx(gibbs_moment_brute(*args, weight=np.exp), rel=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, math.log10(50)), st.floats(0.1, 10))
def test_closed_form_equals_quadrature(nu, log_z, ratio):
    s2 = 0.01
    z = 10**log_z
    # z = 4 sqrt(f phi)/s2 with phi = ratio f
    f = z * s2 / (4 * math.sqrt(ratio))
    phi = ratio * f
    d = derived_from(f, phi, nu * s2 / 2, s2)
    q = gibbs_expectation_quadrature(GibbsSpec.from_derived(d))
    assert closed_form_expectation(d) == pytest.approx(q, rel=1e-10)


def test_density_normalised_and_cdf_monotone():
    spec = GibbsSpec.from_derived(derived_from(0.05, 0.02, 0.004, 0.01))
    lo, hi = spec.window()
    x = np.linspace(lo, hi, 20001)
    from scipy.integrate import simpson

    assert simpson(spec.density(x), x=x) == pytest.approx(1.0, abs=1e-9)
    grid, cdf = spec.cdf_table(2001)
    assert np.all(np.diff(cdf) >= 0)
    assert cdf[0] == 0.0 and cdf[-1] == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=50, deadline=None)
@given(st.floats(1e-4, 1.0), st.floats(1e-4, 1.0))
def test_nu_half_identity(f, phi):
    p = with_nu(0.5, phi, f=f)
    d = derive(p)
    exact = d.m_tilde - phi + math.sqrt(f * phi)
    assert growth_rate(d).g == pytest.approx(exact, rel=1e-12)
    assert growth_rate(d, "nu_half").g == pytest.approx(exact, rel=1e-15)


def test_boundary_limits():
    d = derive(ModelParams(**{**BASE, "f": 0.0}, phi=0.0, mu_tilde=0.05))
    assert growth_rate(d).g == MT
    # phi = 0: private sector wins if it outgrows mu_tilde - f
    d = derive(ModelParams(**BASE, phi=0.0, mu_tilde=0.03))
    assert growth_rate(d).g == MT
    d = derive(ModelParams(**BASE, phi=0.0, mu_tilde=0.08))
    assert growth_rate(d).g == pytest.approx(0.06)
    d = derive(ModelParams(**{**BASE, "f": 0.0}, phi=0.01, mu_tilde=0.03))
    assert growth_rate(d).g == pytest.approx(MT - 0.01)


def test_growth_is_continuous_at_small_phi():
    p = ModelParams(**BASE, phi=1e-12, mu_tilde=0.03)
    assert growth_rate(derive(p)).g == pytest.approx(MT, abs=1e-9)


def test_unknown_method():
    with pytest.raises(UnsupportedError):
        growth_rate(derive(with_nu(0.5, 0.005)), "bogus")


def test_nu_half_method_guard():
    with pytest.raises(UnsupportedError):
        growth_rate(derive(with_nu(0.6, 0.005)), "nu_half")


@pytest.mark.parametrize("nu", [0.3, 0.7, 1.5, -0.9])
def test_small_phi_expansion_converges(nu):
    errs = []
    for phi in (1e-6, 1e-8):
        d = derive(with_nu(nu, phi))
        exact = growth_rate(d).g
        approx = small_phi_expansion(d).g
        errs.append(abs(approx - exact) / abs(exact - d.m_tilde + phi))
    assert errs[1] < errs[0]
    assert errs[1] < 0.1


def test_small_phi_expansion_exact_for_minus_half():
    d = derive(with_nu(-0.5, 1e-6))
    assert small_phi_expansion(d).g == pytest.approx(growth_rate(d).g, rel=1e-13)


def test_small_phi_expansion_guards():
    with pytest.raises(UnsupportedError):
        small_phi_expansion(derive(with_nu(0.5, 0.005)))  # argument not small
    with pytest.raises(UnsupportedError):
        small_phi_expansion(derive(with_nu(-1.5, 1e-8)))
    with pytest.raises(UnsupportedError):
        small_phi_expansion(derive(with_nu(0.0, 1e-8)))


def test_nu_zero_branch_converges():
    errs = []
    for phi in (1e-6, 1e-9, 1e-12):
        d = derive(with_nu(0.0, phi))
        exact = growth_rate(d).g
        errs.append(abs(growth_rate(d, "nu_zero").g - exact) / (exact - d.m_tilde + phi))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-6


def test_weighted_average_limit():
    # fixed phi/f = 4; the deviation from the weighted average settles at
    # (Sigma^2/2) f phi / (f + phi)^2 rather than vanishing
    rel_to_avg, rel_to_limit = [], []
    for z in (100.0, 300.0, 1000.0):
        f = z * S2 / 8
        d = derive(ModelParams(**{**BASE, "f": f}, phi=4 * f, mu_tilde=0.03))
        g = growth_rate(d).g
        avg = growth_rate(d, "weighted_average").g
        limit = avg + 0.5 * S2 * 4 * f * f / (5 * f) ** 2
        rel_to_avg.append(abs(g - avg) / avg)
        rel_to_limit.append(abs(g - limit) / limit)
    assert rel_to_avg[0] > rel_to_avg[1] > rel_to_avg[2]
    assert rel_to_limit[0] > rel_to_limit[1] > rel_to_limit[2]
    assert rel_to_limit[2] < 1e-4


def test_large_phi_expansion_sign():
    d = derive(ModelParams(**BASE, phi=1.0, mu_tilde=0.03))
    res = large_phi_expansion(d)
    c = S2 / (4 * 4.0) - 0.02 * (0.03 - MT - 0.02)
    assert res.details["C"] == pytest.approx(c)
    assert res.g == pytest.approx(0.03 + c)
    assert res.details["approach"] == "above"
    below = large_phi_expansion(derive(ModelParams(**BASE, phi=1.0, mu_tilde=0.2)))
    assert below.details["approach"] == "below"


def test_optimal_tax_nu_half():
    res = optimal_tax(with_nu(0.5, 0.005), hold_nu=0.5)
    assert res.phi_star == pytest.approx(0.005, rel=1e-6)
    assert res.excess == pytest.approx(0.005, abs=1e-9)
    assert res.phi_root == pytest.approx(0.005, rel=1e-12)


def test_optimal_tax_regimes():
    m = ModelParams(**BASE, phi=0.0, mu_tilde=0.0)
    d = derive(m)
    at = lambda gap: optimal_tax(m.replace(mu_tilde=MT - gap))
    assert at(d.theta_plus + 0.01).phi_star == 0.0
    moderate = at(d.theta_plus / 4)
    assert 0 < moderate.phi_star < math.inf
    assert moderate.g_star >= MT
    assert at(-d.theta_minus - 0.01).phi_star == math.inf


def test_optimal_tax_is_grid_maximum():
    p = with_nu(0.3, 0.0)
    res = optimal_tax(p, hold_nu=0.3)
    phis = np.linspace(0, res.window[1], 2001)
    assert res.g_star >= growth_profile(p, phis, hold_nu=0.3).max() - 1e-12


def test_small_phi_root_only_for_fractional_nu():
    assert small_phi_root(with_nu(1.5, 0.0), hold_nu=1.5) is None
    assert small_phi_root(with_nu(0.5, 0.0), hold_nu=0.5) == pytest.approx(0.005)


def test_optimal_tax_window_validation():
    with pytest.raises(ValidationError):
        optimal_tax(with_nu(0.5, 0.005), window=(0.1, 0.05))
    with pytest.raises(UnsupportedError):
        optimal_tax(ModelParams(**{**BASE, "f": 0.0}, phi=0.0, mu_tilde=0.03))


def test_default_window_covers_all_scales():
    lo, hi = default_window(ModelParams(**BASE, phi=0.0, mu_tilde=0.03))
    assert lo == 0.0 and hi == pytest.approx(max(0.2, 10 * S2, 0.25))
