"""Coupled private/public wealth in log coordinates.

    dh/dt = (m_tilde - phi) + f e^{H - h} + sqrt(rho) s xi(t)
    dH/dt = (mu_tilde - f)  + phi e^{h - H} + sigma xi'(t)

The noise is additive in ``(h, H)``, so the Ito/Stratonovich distinction
disappears. Each step adds the exact noise increment (white: Gaussian with
variance ``dt``; colored: the exact integral of the OU process over the step)
and treats the coupling terms with Heun's predictor-corrector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from ..errors import NumericalError
from ..model import ModelParams, derive
from .config import SimConfig
from .noise import ou_integrated_coefficients, path_generators, stationary_variance

# e^{|Delta|} > 1e300
DELTA_LIMIT = 300.0 * math.log(10.0)
CHUNK = 20_000


@numba.njit(cache=True)
def _advance(state, acc, normals, k0, colored, coef, record_every, burn_step, rec):
    """Advance one path by ``len(normals)`` steps starting at step index ``k0``.

    state: h, H, y_private, y_public, cumulative noise in h, in H
    acc:   int e^{-Delta} dt, int e^{Delta} dt after burn-in, then h, H,
           noise_h, noise_H at the burn-in step
    rec:   (4, n_records) rows h, H, noise_h, noise_H
    Returns -1 on success, or the failing step index.
    """
    a_h0, f, a_H0, phi, amp_h, amp_H, dt, decay, mean_int, a11, a21, a22 = coef
    sqdt = math.sqrt(dt)
    h, H, yc, yp, nh, nH = state[0], state[1], state[2], state[3], state[4], state[5]
    for j in range(normals.shape[0]):
        k = k0 + j
        if colored:
            ic = mean_int * yc + a21 * normals[j, 0] + a22 * normals[j, 1]
            yc = decay * yc + a11 * normals[j, 0]
            ip = mean_int * yp + a21 * normals[j, 2] + a22 * normals[j, 3]
            yp = decay * yp + a11 * normals[j, 2]
            dnh = amp_h * ic
            dnH = amp_H * ip
        else:
            dnh = amp_h * sqdt * normals[j, 0]
            dnH = amp_H * sqdt * normals[j, 1]
        d0 = h - H
        e_m = math.exp(-d0)
        e_p = math.exp(d0)
        fh = a_h0 + f * e_m
        fH = a_H0 + phi * e_p
        hp = h + fh * dt + dnh
        Hp = H + fH * dt + dnH
        dp = hp - Hp
        if abs(dp) > 700.0:
            return k
        h = h + 0.5 * (fh + a_h0 + f * math.exp(-dp)) * dt + dnh
        H = H + 0.5 * (fH + a_H0 + phi * math.exp(dp)) * dt + dnH
        nh += dnh
        nH += dnH
        d1 = h - H
        if abs(d1) > 690.7755278982137:
            return k
        if k + 1 > burn_step:
            acc[0] += 0.5 * (e_m + math.exp(-d1)) * dt
            acc[1] += 0.5 * (e_p + math.exp(d1)) * dt
        if k + 1 == burn_step:
            acc[2] = h
            acc[3] = H
            acc[4] = nh
            acc[5] = nH
        if (k + 1) % record_every == 0:
            r = (k + 1) // record_every
            rec[0, r] = h
            rec[1, r] = H
            rec[2, r] = nh
            rec[3, r] = nH
    state[0], state[1], state[2], state[3], state[4], state[5] = h, H, yc, yp, nh, nH
    return -1


@dataclass(frozen=True)
class TwoSectorPaths:
    """Recorded log-wealth paths of an ensemble (rows are paths)."""

    params: ModelParams
    config: SimConfig
    times: np.ndarray
    h: np.ndarray
    H: np.ndarray
    noise_h: np.ndarray
    noise_H: np.ndarray
    burnin_state: np.ndarray  # (n_paths, 4): h, H, noise_h, noise_H at t_burnin
    final_state: np.ndarray  # (n_paths, 4) at t_total
    mean_exp_minus_delta: np.ndarray  # per-path time average after burn-in
    mean_exp_delta: np.ndarray
    t_burnin: float
    t_total: float

    @property
    def delta(self) -> np.ndarray:
        return self.h - self.H

    @property
    def n_paths(self) -> int:
        return self.h.shape[0]

    def growth_increments(self, variable: str = "h", remove_noise: bool = False):
        """Per-path log increment between burn-in and horizon, and the span."""
        col = {"h": 0, "H": 1}[variable]
        incr = self.final_state[:, col] - self.burnin_state[:, col]
        if remove_noise:
            incr = incr - (self.final_state[:, col + 2] - self.burnin_state[:, col + 2])
        return incr, self.t_total - self.t_burnin

    def delta_after_burnin(self) -> np.ndarray:
        keep = self.times >= self.t_burnin
        return self.delta[:, keep].ravel()


def simulate_two_sector(params: ModelParams, config: SimConfig, h0: float = None, H0: float = None) -> TwoSectorPaths:
    """Integrate an ensemble of independent paths.

    Initial condition defaults to ``W = calW = n_agents`` (so ``Delta(0) = 0``),
    matching the agent simulator's start. Raises :class:`NumericalError` when
    ``e^{|Delta|}`` exceeds 1e300, which signals a divergent parameter set.
    """
    config.check_against(params.tau)
    d = derive(params)
    p = params
    colored = config.mode == "colored"
    if colored:
        decay, mean_int, a11, a21, a22 = ou_integrated_coefficients(config.dt, p.tau)
    else:
        decay = mean_int = a11 = a21 = a22 = 0.0
    coef = (
        d.m_tilde - p.phi,
        p.f,
        p.mu_tilde - p.f,
        p.phi,
        math.sqrt(p.rho) * p.s,
        p.sigma,
        config.dt,
        decay,
        mean_int,
        a11,
        a21,
        a22,
    )
    n_steps = config.n_steps
    burn_step = config.burnin_steps
    stride = config.record_every
    n_rec = n_steps // stride + 1
    times = np.arange(n_rec) * stride * config.dt
    start = math.log(p.n_agents)
    h0 = start if h0 is None else h0
    H0 = start if H0 is None else H0
    n_normals = 4 if colored else 2

    shape = (config.n_paths, n_rec)
    h_rec, H_rec = np.empty(shape), np.empty(shape)
    nh_rec, nH_rec = np.empty(shape), np.empty(shape)
    burn = np.empty((config.n_paths, 4))
    final = np.empty((config.n_paths, 4))
    avg_m = np.empty(config.n_paths)
    avg_p = np.empty(config.n_paths)
    span = (n_steps - burn_step) * config.dt

    for i, rng in enumerate(path_generators(config.seed, config.n_paths)):
        y_sd = math.sqrt(stationary_variance(p.tau))
        y0 = rng.standard_normal(2) * y_sd if colored else np.zeros(2)
        state = np.array([h0, H0, y0[0], y0[1], 0.0, 0.0])
        acc = np.zeros(6)
        acc[2:] = state[[0, 1, 4, 5]]
        rec = np.empty((4, n_rec))
        rec[:, 0] = state[[0, 1, 4, 5]]
        k = 0
        while k < n_steps:
            n = min(CHUNK, n_steps - k)
            normals = rng.standard_normal((n, n_normals))
            bad = _advance(state, acc, normals, k, colored, coef, stride, burn_step, rec)
            if bad >= 0:
                raise NumericalError(
                    f"path {i}: |Delta| exceeded {DELTA_LIMIT:.1f} at t = {bad * config.dt:.4g}; "
                    f"parameters imply divergence (f = {p.f}, phi = {p.phi}, delta = {d.delta:.4g})"
                )
            k += n
        h_rec[i], H_rec[i], nh_rec[i], nH_rec[i] = rec
        burn[i] = acc[2:]
        final[i] = state[[0, 1, 4, 5]]
        avg_m[i] = acc[0] / span if span > 0 else math.nan
        avg_p[i] = acc[1] / span if span > 0 else math.nan

    return TwoSectorPaths(
        params=params,
        config=config,
        times=times,
        h=h_rec,
        H=H_rec,
        noise_h=nh_rec,
        noise_H=nH_rec,
        burnin_state=burn,
        final_state=final,
        mean_exp_minus_delta=avg_m,
        mean_exp_delta=avg_p,
        t_burnin=burn_step * config.dt,
        t_total=n_steps * config.dt,
    )
