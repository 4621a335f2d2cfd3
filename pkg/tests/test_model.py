import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from taxgrowth.errors import DomainError, UnsupportedError, ValidationError
from taxgrowth.model import ModelParams, RegimeLabel, classify, derive, gini_from_alpha, pareto_alpha

US = dict(m=0.03, s=0.10, rho=0.2, tau=4.0, sigma=0.05, f=0.02)


def params(**kw):
    base = dict(US, mu_tilde=0.03, phi=0.005)
    base.update(kw)
    return ModelParams(**base)


def test_dressed_rates_reference_numbers():
    d = derive(params())
    assert d.m_tilde == pytest.approx(0.034, rel=1e-15)
    assert d.sigma2_total == pytest.approx(0.0045, rel=1e-15)
    assert d.theta_plus == pytest.approx(0.00225, rel=1e-15)
    assert d.theta_minus == pytest.approx(0.02 + 0.0045 / (4 * 4 * 0.02), rel=1e-15)
    assert d.delta == pytest.approx(0.034 - 0.03 + 0.02 - 0.005, rel=1e-14)
    assert d.nu == pytest.approx(2 * d.delta / 0.0045, rel=1e-15)


def test_zero_noise_nu_is_signed_infinity():
    d = derive(params(s=0.0, sigma=0.0))
    assert d.nu == math.inf
    d = derive(params(s=0.0, sigma=0.0, mu_tilde=1.0))
    assert d.nu == -math.inf


def test_theta_minus_undefined_without_redistribution():
    assert derive(params(f=0.0)).theta_minus is None
    with pytest.raises(UnsupportedError):
        classify(derive(params(f=0.0)))


@pytest.mark.parametrize(
    "field,value",
    [("s", -0.1), ("rho", 1.5), ("tau", 0.0), ("phi", -1e-3), ("m", math.nan), ("f", math.inf), ("n_agents", 0)],
)
def test_validation(field, value):
    with pytest.raises(ValidationError) as info:
        params(**{field: value})
    assert info.value.field == field


def test_kappa_must_sum_to_one():
    ModelParams(**dict(US, mu_tilde=0.03, phi=0.01), n_agents=3, kappa=[0.5, 0.25, 0.25])
    with pytest.raises(ValidationError):
        ModelParams(**dict(US, mu_tilde=0.03, phi=0.01), n_agents=3, kappa=[0.5, 0.25, 0.2])
    with pytest.raises(ValidationError):
        ModelParams(**dict(US, mu_tilde=0.03, phi=0.01), n_agents=2, kappa=[0.5, 0.25, 0.25])


def test_uniform_weights_by_default():
    p = params(n_agents=4)
    assert np.array_equal(p.weights(), np.full(4, 0.25))


def regime_for_gap(gap):
    base = params()
    return classify(derive(base.replace(mu_tilde=derive(base).m_tilde - gap)))


def test_reference_gap_is_no_tax():
    r = regime_for_gap(0.03)
    assert r.label is RegimeLabel.NO_TAX
    assert r.label.number == 1
    assert r.as_dict()["regime"] == "NoTax"


def test_regime_ordering_and_ties():
    d = derive(params())
    tp, tm = d.theta_plus, d.theta_minus
    assert regime_for_gap(tp + 1e-4).label is RegimeLabel.NO_TAX
    assert regime_for_gap(tp / 2).label is RegimeLabel.MODERATE_TAX
    assert regime_for_gap(-tm / 2).label is RegimeLabel.STRONG_TAX
    assert regime_for_gap(-tm - 1e-4).label is RegimeLabel.FULL_TAX
    # exact ties go to the taxed side
    exact = classify(derive(params(mu_tilde=0.034)))
    assert exact.gap == 0.0 and exact.label is RegimeLabel.STRONG_TAX


@given(st.floats(-0.2, 0.2))
def test_classify_is_monotone_in_gap(gap):
    lower = regime_for_gap(gap - 1e-3).label.number
    upper = regime_for_gap(gap).label.number
    assert lower >= upper


def test_pareto_alpha_and_gini():
    p = params(s=1.0, rho=0.0, phi=0.125, j0=0.125)
    assert pareto_alpha(p) == pytest.approx(1.5)
    assert gini_from_alpha(1.5) == pytest.approx(0.5)
    assert gini_from_alpha(math.inf) == 0.0
    assert gini_from_alpha(0.9) == 1.0  # clamped
    with pytest.raises(DomainError):
        gini_from_alpha(0.5)
    with pytest.raises(DomainError):
        pareto_alpha(params(rho=1.0))
