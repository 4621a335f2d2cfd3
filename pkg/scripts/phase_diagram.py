"""Optimal tax rate across the performance gap (data for a regime diagram).

    python scripts/phase_diagram.py --points 81 --out results/phase.csv
"""

import argparse

import numpy as np

from taxgrowth.cli import PHASE_HEADER, phase_row
from taxgrowth.config import OptimizeSpec, apply_axis, auto_gap_bounds
from taxgrowth.model import ModelParams
from taxgrowth.simulator.io import write_rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=81)
    ap.add_argument("--tau", type=float, default=4.0)
    ap.add_argument("--f", type=float, default=0.02)
    ap.add_argument("--out", default="results/phase.csv")
    args = ap.parse_args()

    base = ModelParams(m=0.03, s=0.10, rho=0.2, tau=args.tau, sigma=0.05, f=args.f, phi=0.0, mu_tilde=0.03)
    lo, hi = auto_gap_bounds(base)
    rows = [phase_row(apply_axis(base, "gap", g), OptimizeSpec()) for g in np.linspace(lo, hi, args.points)]
    write_rows(args.out, PHASE_HEADER, rows)
    for gap, phi_star, g_star, regime in rows[:: max(1, len(rows) // 20)]:
        print(f"{gap:+.5f}  {regime:12s} phi*={phi_star:<10.4g} g*={g_star:.5f}")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
