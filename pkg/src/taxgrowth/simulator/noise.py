"""Standardised Ornstein-Uhlenbeck noise and per-path random streams.

The standardised process ``y`` has covariance ``exp(-|t - t'|/tau) / (2 tau)``
so that ``int y dt`` over a span ``T >> tau`` has variance ``T``: in the limit
``tau -> 0`` it becomes unit white noise.
"""

from __future__ import annotations

import math

import numpy as np


def stationary_variance(tau: float) -> float:
    return 1.0 / (2.0 * tau)


def ou_step(y, dt: float, tau: float, xi):
    """Exact update ``y' = y e^{-dt/tau} + sqrt((1 - e^{-2 dt/tau}) / (2 tau)) xi``."""
    decay = math.exp(-dt / tau)
    return y * decay + math.sqrt(-math.expm1(-2.0 * dt / tau) / (2.0 * tau)) * xi


def ou_integrated_coefficients(dt: float, tau: float):
    """Coefficients for the joint exact update of ``y`` and ``I = int_t^{t+dt} y ds``.

    Returns ``(decay, mean_int, a11, a21, a22)`` such that, with ``xi1, xi2``
    independent unit normals::

        y' = decay * y + a11 * xi1
        I  = mean_int * y + a21 * xi1 + a22 * xi2
    """
    theta = dt / tau
    em1 = -math.expm1(-theta)  # 1 - e^-theta
    em2 = -math.expm1(-2.0 * theta)
    var_y = em2 / (2.0 * tau)
    # tau [theta - 2(1 - e^-theta) + (1 - e^-2theta)/2]; series below theta=1e-3
    if theta < 1e-3:
        var_i = tau * theta**3 * (1.0 / 3.0 - theta / 4.0 + 7.0 * theta**2 / 60.0 - theta**3 / 24.0)
    else:
        var_i = tau * (theta - 2.0 * em1 + 0.5 * em2)
    cov = 0.5 * em1 * em1
    a11 = math.sqrt(var_y)
    a21 = cov / a11
    a22 = math.sqrt(max(var_i - a21 * a21, 0.0))
    return math.exp(-theta), tau * em1, a11, a21, a22


def path_generators(seed: int, n_paths: int):
    """One independent generator per path, derived from ``(seed, path index)``."""
    children = np.random.SeedSequence(int(seed)).spawn(n_paths)
    return [np.random.Generator(np.random.PCG64(c)) for c in children]
