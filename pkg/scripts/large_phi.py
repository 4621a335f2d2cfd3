"""Colored-noise growth at large phi against the 1/phi corrections.

Prints phi (g - mu_tilde) from simulation next to the closed-form coefficient
C = Sigma^2/(4 tau) - f (mu_tilde - m_tilde - f) and to f (m_tilde - mu_tilde),
the coefficient of the noiseless fixed point.

    python scripts/large_phi.py
"""

import argparse

from taxgrowth.analytics import large_phi_expansion
from taxgrowth.model import ModelParams, classify, derive
from taxgrowth.simulator import SimConfig, estimate_growth, simulate_two_sector


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sigma", type=float, default=0.05)
    ap.add_argument("--paths", type=int, default=16)
    args = ap.parse_args()

    base = ModelParams(m=0.03, s=0.10, rho=0.2, tau=4.0, sigma=args.sigma, f=0.02, phi=1.0, mu_tilde=0.0)
    d0 = derive(base)
    tm = d0.theta_minus
    for gap in (0.5 * d0.theta_plus, -0.5 * tm, -1.5 * tm):
        for phi_tau in (5, 10, 20, 40):
            phi = phi_tau / base.tau
            p = base.replace(phi=phi, mu_tilde=d0.m_tilde - gap)
            d = derive(p)
            c = large_phi_expansion(d).details["C"]
            cfg = SimConfig(dt=min(0.2, 0.05 / phi), t_total=400, t_burnin=40, n_paths=args.paths, seed=3,
                            mode="colored", record_every=10**6)
            est = estimate_growth(simulate_two_sector(p, cfg), "H", remove_noise=True)
            print(f"{classify(d).label.value:12s} phi*tau={phi_tau:3d}  sim {phi * (est.g_hat - p.mu_tilde):+.3e} "
                  f"(+- {phi * est.std_error:.1e})  C {c:+.3e}  f*gap {p.f * gap:+.3e}")


if __name__ == "__main__":
    main()
