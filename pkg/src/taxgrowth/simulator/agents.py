"""N-agent mean-field economy.

Each agent's wealth follows

    dw_i/dt = J0 (W/N - w_i) + eta_i(t) w_i - phi w_i + f kappa_i calW

with ``eta_i = m + sqrt(1-rho) s y_i + sqrt(rho) s y_common``, and the public
wealth ``calW`` grows at ``mu_tilde`` with its own noise, pays out ``f calW``
and collects ``phi W``. A step is Strang-split: half a step of the linear
transfers (Heun), the multiplicative growth in exact exponential form
(Stratonovich), then the second half of the transfers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List

import numpy as np

from ..errors import NumericalError, ValidationError
from ..model import ModelParams
from .config import SimConfig
from .noise import ou_integrated_coefficients, path_generators, stationary_variance

CHUNK_STEPS = 256


@dataclass(frozen=True)
class WealthSnapshot:
    time: float
    wealth: np.ndarray
    public_wealth: float

    @property
    def total(self) -> float:
        return float(self.wealth.sum())

    @property
    def n_agents(self) -> int:
        return self.wealth.size


@dataclass(frozen=True)
class TransferFlows:
    tax_paid: float
    tax_received: float
    redistribution_paid: float
    redistribution_received: float
    exchange_net: float


def transfer_flows(w: np.ndarray, public: float, params: ModelParams, kappa: np.ndarray) -> TransferFlows:
    """Instantaneous transfer rates between the agents and the state."""
    total = w.sum()
    n = w.size
    return TransferFlows(
        tax_paid=float(np.sum(params.phi * w)),
        tax_received=float(params.phi * total),
        redistribution_paid=float(params.f * public),
        redistribution_received=float(np.sum(params.f * kappa * public)),
        exchange_net=float(np.sum(params.j0 * (total / n - w))),
    )


def _transfer_rates(w, public, p: ModelParams, kappa):
    total = w.sum()
    dw = p.j0 * (total / w.size - w) - p.phi * w + p.f * public * kappa
    dpub = -p.f * public + p.phi * total
    return dw, dpub


def _transfer_half(w, public, p, kappa, h):
    dw0, dp0 = _transfer_rates(w, public, p, kappa)
    w1 = w + h * dw0
    pub1 = public + h * dp0
    dw1, dp1 = _transfer_rates(w1, pub1, p, kappa)
    return w + 0.5 * h * (dw0 + dw1), public + 0.5 * h * (dp0 + dp1)


@dataclass
class AgentRun:
    """Output of :func:`simulate_agents` for an ensemble of independent economies.

    ``snapshots[i]`` holds the recorded states of realisation ``i``; the log
    aggregates are sampled on the same grid.
    """

    params: ModelParams
    config: SimConfig
    times: np.ndarray
    snapshots: List[List[WealthSnapshot]] = field(default_factory=list)
    log_private: np.ndarray = None
    log_public: np.ndarray = None
    burnin_state: np.ndarray = None  # (n_paths, 2) log W, log calW at t_burnin
    final_state: np.ndarray = None
    t_burnin: float = 0.0
    t_total: float = 0.0

    def growth_increments(self, variable: str = "h", remove_noise: bool = False):
        if remove_noise:
            raise ValidationError("remove_noise", "not available for agent runs")
        col = {"h": 0, "H": 1}[variable]
        return self.final_state[:, col] - self.burnin_state[:, col], self.t_total - self.t_burnin

    def stationary_snapshots(self, path: int = 0) -> List[WealthSnapshot]:
        return [s for s in self.snapshots[path] if s.time >= self.t_burnin]


def simulate_agents(params: ModelParams, config: SimConfig) -> AgentRun:
    """Run ``config.n_paths`` independent economies of ``params.n_agents`` agents.

    Agents start with unit wealth and the state with ``N`` (so ``Delta = 0``).
    Raises :class:`NumericalError` if a wealth turns non-positive, which only
    happens when ``dt`` is too large for the transfer rates.
    """
    p = params
    if p.n_agents < 2:
        raise ValidationError("n_agents", "agent simulation needs n_agents >= 2")
    config.check_against(p.tau)
    n = p.n_agents
    kappa = p.weights()
    dt = config.dt
    colored = config.mode == "colored"
    if colored:
        decay, mean_int, a11, a21, a22 = ou_integrated_coefficients(dt, p.tau)
    amp_idio = math.sqrt(1.0 - p.rho) * p.s
    amp_common = math.sqrt(p.rho) * p.s
    sqdt = math.sqrt(dt)

    n_steps = config.n_steps
    burn_step = config.burnin_steps
    stride = config.record_every
    n_rec = n_steps // stride + 1
    times = np.arange(n_rec) * stride * dt
    log_w = np.empty((config.n_paths, n_rec))
    log_pub = np.empty((config.n_paths, n_rec))
    burn = np.empty((config.n_paths, 2))
    final = np.empty((config.n_paths, 2))
    all_snaps = []

    for path, rng in enumerate(path_generators(config.seed, config.n_paths)):
        w = np.ones(n)
        public = float(n)
        if colored:
            y_sd = math.sqrt(stationary_variance(p.tau))
            y = rng.standard_normal(n) * y_sd
            yc, yp = rng.standard_normal(2) * y_sd
        snaps = [WealthSnapshot(0.0, w.copy(), public)]
        log_w[path, 0] = math.log(w.sum())
        log_pub[path, 0] = math.log(public)
        burn[path] = log_w[path, 0], log_pub[path, 0]
        k = 0
        while k < n_steps:
            m_steps = min(CHUNK_STEPS, n_steps - k)
            if colored:
                xi = rng.standard_normal((m_steps, 2, n))
                xs = rng.standard_normal((m_steps, 4))
            else:
                xi = rng.standard_normal((m_steps, n))
                xs = rng.standard_normal((m_steps, 2))
            for j in range(m_steps):
                w, public = _transfer_half(w, public, p, kappa, 0.5 * dt)
                if colored:
                    inc = mean_int * y + a21 * xi[j, 0] + a22 * xi[j, 1]
                    y = decay * y + a11 * xi[j, 0]
                    inc_c = mean_int * yc + a21 * xs[j, 0] + a22 * xs[j, 1]
                    yc = decay * yc + a11 * xs[j, 0]
                    inc_p = mean_int * yp + a21 * xs[j, 2] + a22 * xs[j, 3]
                    yp = decay * yp + a11 * xs[j, 2]
                else:
                    inc = sqdt * xi[j]
                    inc_c = sqdt * xs[j, 0]
                    inc_p = sqdt * xs[j, 1]
                w = w * np.exp(p.m * dt + amp_idio * inc + amp_common * inc_c)
                public = public * math.exp(p.mu_tilde * dt + p.sigma * inc_p)
                w, public = _transfer_half(w, public, p, kappa, 0.5 * dt)
                step = k + j + 1
                if not (public > 0 and np.all(w > 0)) or not np.isfinite(public):
                    raise NumericalError(
                        f"non-positive or non-finite wealth at t = {step * dt:.4g}; reduce dt (now {dt})"
                    )
                if step == burn_step:
                    burn[path] = math.log(w.sum()), math.log(public)
                if step % stride == 0:
                    r = step // stride
                    log_w[path, r] = math.log(w.sum())
                    log_pub[path, r] = math.log(public)
                    snaps.append(WealthSnapshot(step * dt, w.copy(), public))
            k += m_steps
        final[path] = math.log(w.sum()), math.log(public)
        all_snaps.append(snaps)

    return AgentRun(
        params=params,
        config=config,
        times=times,
        snapshots=all_snaps,
        log_private=log_w,
        log_public=log_pub,
        burnin_state=burn,
        final_state=final,
        t_burnin=burn_step * dt,
        t_total=n_steps * dt,
    )
