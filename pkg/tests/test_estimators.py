import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from taxgrowth.errors import DomainError, ValidationError
from taxgrowth.simulator import hill_tail_exponent, sample_gini
from taxgrowth.simulator.agents import WealthSnapshot
from taxgrowth.simulator.estimators import default_hill_k

positive_wealth = arrays(np.float64, st.integers(2, 200), elements=st.floats(1e-3, 1e3))


def pareto_sample(alpha, n, seed):
    return np.random.default_rng(seed).pareto(alpha, n) + 1.0


def test_hill_on_exact_pareto():
    est = hill_tail_exponent(pareto_sample(1.5, 100_000, 0), k=1000)
    assert est.alpha == pytest.approx(1.5, abs=0.1)
    assert 0 < est.std_error < 0.1


def test_hill_accepts_snapshots_and_default_k():
    w = pareto_sample(2.0, 10_000, 1)
    est = hill_tail_exponent(WealthSnapshot(0.0, w, 1.0))
    assert est.k == default_hill_k(10_000) == 252
    assert est.alpha == pytest.approx(2.0, abs=0.3)


def test_hill_scale_invariant():
    w = pareto_sample(1.5, 5000, 2)
    a = hill_tail_exponent(w, k=100, n_boot=20).alpha
    b = hill_tail_exponent(3.7 * w, k=100, n_boot=20).alpha
    assert a == pytest.approx(b, rel=1e-12)


def test_hill_bootstrap_is_seeded():
    w = pareto_sample(1.5, 5000, 3)
    assert hill_tail_exponent(w, k=100, seed=4).std_error == hill_tail_exponent(w, k=100, seed=4).std_error


@pytest.mark.parametrize("k", [9, 501])
def test_hill_k_bounds(k):
    with pytest.raises(ValidationError):
        hill_tail_exponent(pareto_sample(1.5, 5000, 0), k=k)


def test_hill_ties():
    with pytest.raises(DomainError):
        hill_tail_exponent(np.ones(1000), k=20)


def test_gini_examples():
    assert sample_gini(np.full(10, 3.0)) == 0.0
    assert sample_gini(np.array([0.0, 1.0])) == 0.5
    with pytest.raises(DomainError):
        sample_gini(np.zeros(5))
    with pytest.raises(ValidationError):
        sample_gini(np.array([1.0]))
    with pytest.raises(DomainError):
        sample_gini(np.array([1.0, -1.0]))


def gini_pairs(w):
    return np.abs(w[:, None] - w[None, :]).sum() / (2 * w.size**2 * w.mean())


@settings(max_examples=80)
@given(positive_wealth)
def test_gini_matches_pairwise_definition(w):
    assert sample_gini(w) == pytest.approx(gini_pairs(w), rel=1e-10, abs=1e-12)


@settings(max_examples=50)
@given(positive_wealth, st.floats(1e-3, 1e3), st.randoms())
def test_gini_invariances(w, c, rnd):
    g = sample_gini(w)
    assert 0.0 <= g <= 1.0 - 1.0 / w.size + 1e-12
    perm = w.copy()
    rnd.shuffle(perm)
    assert sample_gini(perm) == pytest.approx(g, abs=1e-12)
    assert sample_gini(c * w) == pytest.approx(g, rel=1e-9, abs=1e-12)
