"""Command-line front end: ``taxgrowth <verb> --config job.ini [--out DIR]``.

Exit status is 0 on success, 2 for invalid input and 3 when a computation
fails numerically.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path
from typing import Optional

import numpy as np

from .analytics import BRANCH_EPS, SMALL_ARG_FRACTION, default_window, growth_rate, optimal_tax
from .config import JOB_KINDS, ConfigError, JobSpec, OptimizeSpec, apply_axis, parse_config
from .errors import DomainError, NumericalError, TaxGrowthError, UnsupportedError
from .model import ModelParams, classify, derive, gini_from_alpha, pareto_alpha
from .simulator.config import SimConfig
from .simulator.io import fmt, write_paths, write_rows, write_snapshots

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3
LARGE_ARG = 100.0
# phi*tau or f*tau above this and the Gibbs (white-noise) picture is doubtful
VALIDITY_LIMIT = 0.1

GROWTH_HEADER = ("phi", "f", "nu", "g_closed", "g_quadrature", "method_flags")
PHASE_HEADER = ("gap", "phi_star", "g_star", "regime")


def _json_value(x):
    if isinstance(x, float) and not math.isfinite(x):
        return fmt(x)
    if isinstance(x, np.floating):
        return _json_value(float(x))
    return x


def _dump(record: dict) -> str:
    return json.dumps({k: _json_value(v) for k, v in record.items()})


def _write_json(path: Path, record: dict) -> str:
    line = _dump(record)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(line + "\n", encoding="utf-8")
    return line


def _try_growth(derived, method):
    try:
        return growth_rate(derived, method).g
    except (UnsupportedError, DomainError, NumericalError):
        return None


def analytic_row(params: ModelParams) -> tuple:
    """One ``growth.csv`` row: closed form, quadrature and diagnostic flags."""
    d = derive(params)
    p = params
    flags = []
    g_closed = _try_growth(d, "closed_form")
    g_quad = _try_growth(d, "quadrature")
    if g_closed is None:
        flags.append("closed_unavailable")
    if g_quad is None:
        flags.append("quadrature_unavailable")
    if p.f == 0 or p.phi == 0:
        flags.append("boundary")
    elif d.sigma2_total > 0:
        if abs(d.nu - 0.5) < BRANCH_EPS:
            flags.append("nu_half")
        if abs(d.nu) < BRANCH_EPS:
            flags.append("nu_zero")
        if abs(d.nu - 1.0) < BRANCH_EPS:
            flags.append("nu_one")
        if 2.0 * math.sqrt(p.f * p.phi) < SMALL_ARG_FRACTION * d.sigma2_total:
            flags.append("small_arg")
        if d.bessel_argument > LARGE_ARG:
            flags.append("large_arg")
    if p.phi * p.tau > VALIDITY_LIMIT:
        flags.append("phi_tau_large")
    if p.f * p.tau > VALIDITY_LIMIT:
        flags.append("f_tau_large")
    return (
        p.phi,
        p.f,
        d.nu,
        "" if g_closed is None else g_closed,
        "" if g_quad is None else g_quad,
        ";".join(flags) if flags else "none",
    )


def _window(params: ModelParams, opt: OptimizeSpec) -> tuple:
    hi = default_window(params)[1] if opt.phi_max is None else opt.phi_max
    return opt.phi_min, hi


def optimal_record(params: ModelParams, opt: OptimizeSpec) -> dict:
    d = derive(params)
    regime = classify(d)
    res = optimal_tax(params, window=_window(params, opt), hold_nu=opt.hold_nu, n_grid=opt.n_grid)
    return {
        "gap": d.gap,
        "regime": regime.label.value,
        "phi_star": res.phi_star,
        "g_star": res.g_star,
        "excess": res.excess,
        "m_tilde": res.m_tilde,
        "phi_root": res.phi_root,
        "root_valid": res.root_valid,
        "unimodal": res.unimodal,
        "at_window_edge": res.at_window_edge,
        "window_hi": res.window[1],
        "warning": res.warning,
    }


def phase_row(params: ModelParams, opt: OptimizeSpec) -> tuple:
    rec = optimal_record(params, opt)
    return rec["gap"], rec["phi_star"], rec["g_star"], rec["regime"]


def _map(fn, items, threads: int):
    """Ordered map, optionally over a process pool."""
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * threads))))


def _points(job: JobSpec):
    if job.sweep is None:
        return [job.model]
    axis = job.sweep
    return [apply_axis(job.model, axis.parameter, float(v)) for v in axis.values()]


def _sim_config(job: JobSpec, seed: Optional[int]) -> SimConfig:
    cfg = job.sim if job.sim is not None else SimConfig()
    return cfg if seed is None else cfg.replace(seed=seed)


def run_analytic(job, out: Path, threads: int, seed=None):
    rows = _map(analytic_row, _points(job), threads)
    path = write_rows(out / "growth.csv", GROWTH_HEADER, rows)
    return [path]


def run_sweep(job, out: Path, threads: int, seed=None):
    if job.sweep is None:
        raise ConfigError("sweep job needs a [sweep] section", key="sweep")
    rows = _map(partial(phase_row, opt=job.optimize), _points(job), threads)
    return [write_rows(out / "phase.csv", PHASE_HEADER, rows)]


def run_optimal(job, out: Path, threads: int, seed=None):
    line = _write_json(out / "optimal_tax.json", optimal_record(job.model, job.optimize))
    print(line)
    return [out / "optimal_tax.json"]


def run_classify(job, out: Path, threads: int, seed=None):
    line = _write_json(out / "classify.json", classify(derive(job.model)).as_dict())
    print(line)
    return [out / "classify.json"]


def run_simulate(job, out: Path, threads: int, seed=None):
    from .simulator.estimators import estimate_growth
    from .simulator.two_sector import simulate_two_sector

    cfg = _sim_config(job, seed)
    paths = simulate_two_sector(job.model, cfg)
    d = derive(job.model)
    rec = {"seed": cfg.seed, "mode": cfg.mode, "n_paths": cfg.n_paths, "t_burnin": paths.t_burnin, "t_total": paths.t_total}
    if cfg.n_paths >= 2:
        for var in ("h", "H"):
            est = estimate_growth(paths, var)
            rec[f"g_hat_{var}"], rec[f"se_{var}"] = est.g_hat, est.std_error
        est = estimate_growth(paths, "h", remove_noise=True)
        rec["g_hat_drift"], rec["se_drift"] = est.g_hat, est.std_error
        avg = paths.mean_exp_minus_delta
        rec["mean_exp_minus_delta"] = float(avg.mean())
        rec["se_exp_minus_delta"] = float(avg.std(ddof=1) / math.sqrt(avg.size))
    rec["g_theory"] = _try_growth(d, "closed_form")
    line = _write_json(out / "estimate.json", rec)
    write_paths(paths, out / "paths.csv")
    print(line)
    return [out / "estimate.json", out / "paths.csv"]


def run_agents(job, out: Path, threads: int, seed=None):
    from .simulator.agents import simulate_agents
    from .simulator.estimators import estimate_growth, hill_tail_exponent, sample_gini

    cfg = _sim_config(job, seed)
    run = simulate_agents(job.model, cfg)
    rec = {"seed": cfg.seed, "mode": cfg.mode, "n_paths": cfg.n_paths, "n_agents": job.model.n_agents}
    if cfg.n_paths >= 2:
        est = estimate_growth(run, "h")
        rec["g_hat"], rec["se"] = est.g_hat, est.std_error
    finals = [snaps[-1] for snaps in run.snapshots]
    try:
        hills = [hill_tail_exponent(s) for s in finals]
        rec["alpha_hat"] = float(np.mean([h.alpha for h in hills]))
        rec["alpha_se"] = float(np.mean([h.std_error for h in hills]) / math.sqrt(len(hills)))
    except (TaxGrowthError, ValueError) as exc:
        rec["alpha_hat"], rec["alpha_note"] = None, str(exc)
    rec["gini"] = float(np.mean([sample_gini(s) for s in finals]))
    try:
        alpha = pareto_alpha(job.model)
        rec["alpha_theory"] = alpha
        rec["gini_theory"] = gini_from_alpha(alpha)
    except DomainError:
        rec["alpha_theory"] = None
    rec["g_theory"] = _try_growth(derive(job.model), "closed_form")
    line = _write_json(out / "estimate.json", rec)
    write_snapshots(run.snapshots[0], out / "snapshots.csv", out / "public.csv")
    print(line)
    return [out / "estimate.json", out / "snapshots.csv", out / "public.csv"]


HANDLERS = {
    "analytic": run_analytic,
    "simulate": run_simulate,
    "agents": run_agents,
    "sweep": run_sweep,
    "optimal-tax": run_optimal,
    "classify": run_classify,
}


def run(job: JobSpec, out_dir, threads: int = 1, seed: Optional[int] = None):
    """Execute a parsed job and return the list of files written."""
    return HANDLERS[job.kind](job, Path(out_dir), threads, seed)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="taxgrowth", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in JOB_KINDS:
        p = sub.add_parser(verb)
        p.add_argument("--config", required=True, help="job file")
        p.add_argument("--out", default=None, help="output directory (overrides [output] dir)")
        p.add_argument("--seed", type=int, default=None, help="RNG seed (overrides [sim] seed)")
        p.add_argument("--threads", type=int, default=1, help="worker processes for sweeps")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1", key="threads")
        if args.seed is not None and not 0 <= args.seed < 2**64:
            raise ConfigError("--seed must be an unsigned 64-bit integer", key="seed")
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}", key="config") from None
        job = parse_config(text, kind=args.verb)
        out = args.out or job.out_dir or "out"
        run(job, out, threads=args.threads, seed=args.seed)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (TaxGrowthError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
