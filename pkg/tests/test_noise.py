import math

import numpy as np
import pytest

from taxgrowth.simulator.noise import ou_integrated_coefficients, ou_step, path_generators, stationary_variance


def test_large_step_reaches_stationary_law():
    rng = np.random.default_rng(1)
    tau = 2.0
    y = ou_step(np.full(200_000, 5.0), 1e6, tau, rng.standard_normal(200_000))
    assert y.var() == pytest.approx(stationary_variance(tau), rel=0.02)
    assert abs(y.mean()) < 5 * math.sqrt(stationary_variance(tau) / y.size)


def test_lag_tau_autocovariance():
    rng = np.random.default_rng(7)
    tau, dt, n = 1.5, 0.15, 1_000_000
    lag = int(round(tau / dt))
    y = np.empty(n)
    y[0] = rng.standard_normal() * math.sqrt(stationary_variance(tau))
    xi = rng.standard_normal(n)
    decay = math.exp(-dt / tau)
    amp = math.sqrt(-math.expm1(-2 * dt / tau) / (2 * tau))
    for i in range(1, n):
        y[i] = y[i - 1] * decay + amp * xi[i]
    prods = y[:-lag] * y[lag:]
    batches = prods[: (prods.size // 100) * 100].reshape(100, -1).mean(axis=1)
    se = batches.std(ddof=1) / math.sqrt(batches.size)
    target = math.exp(-1) / (2 * tau)
    assert abs(prods.mean() - target) < 3 * se


def test_vectorised_step_matches_formula():
    y = np.array([0.3, -1.0])
    xi = np.array([0.5, 2.0])
    out = ou_step(y, 0.1, 4.0, xi)
    expected = y * math.exp(-0.025) + math.sqrt((1 - math.exp(-0.05)) / 8.0) * xi
    assert np.allclose(out, expected, rtol=1e-15)


@pytest.mark.parametrize("theta", [1e-4, 9.99e-4, 1e-3, 0.05, 1.0, 30.0])
def test_integrated_noise_moments(theta):
    tau = 0.7
    dt = theta * tau
    decay, mean_int, a11, a21, a22 = ou_integrated_coefficients(dt, tau)
    var_i = tau * (theta - 2 * (-math.expm1(-theta)) + 0.5 * (-math.expm1(-2 * theta)))
    assert a21**2 + a22**2 == pytest.approx(var_i, rel=1e-9)
    assert a11 * a21 == pytest.approx(0.5 * math.expm1(-theta) ** 2, rel=1e-12)
    assert decay == pytest.approx(math.exp(-theta))
    assert mean_int == pytest.approx(tau * (1 - math.exp(-theta)), rel=1e-12)


def test_integrated_noise_is_unit_white_over_long_spans():
    # variance of int_0^T y dt, from a stationary start, tends to T for T >> tau
    rng = np.random.default_rng(3)
    tau, dt, steps, paths = 0.5, 0.05, 4000, 4000
    decay, mean_int, a11, a21, a22 = ou_integrated_coefficients(dt, tau)
    y = rng.standard_normal(paths) * math.sqrt(stationary_variance(tau))
    total = np.zeros(paths)
    for _ in range(steps):
        x1, x2 = rng.standard_normal((2, paths))
        total += mean_int * y + a21 * x1 + a22 * x2
        y = decay * y + a11 * x1
    T = steps * dt
    exact = T - tau * (1 - math.exp(-T / tau))  # finite-T correction
    assert total.var() == pytest.approx(exact, rel=0.08)


def test_path_generators_are_reproducible_and_distinct():
    a = [g.standard_normal(3) for g in path_generators(11, 3)]
    b = [g.standard_normal(3) for g in path_generators(11, 3)]
    for x, y in zip(a, b):
        assert np.array_equal(x, y)
    assert not np.array_equal(a[0], a[1])
    # a larger ensemble shares its leading streams
    c = [g.standard_normal(3) for g in path_generators(11, 5)]
    assert np.array_equal(a[2], c[2])
