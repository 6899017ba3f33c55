"""Extremal eigenvalues of G_t on a fine t grid for one seeded tuple."""

import argparse

from gtmean import testkit as tk
from gtmean.cli import sweep_rows, sweep_violations
from gtmean.fixed_point_means import SolverOptions


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--points", type=int, default=21)
    ap.add_argument("--cond", type=float, default=1e3)
    args = ap.parse_args()
    T = tk.random_tuple(args.seed, 0, n=4, dim=5, cond_max=args.cond)
    grid = [i / (args.points - 1) for i in range(args.points)]
    rows = sweep_rows(T, grid, SolverOptions())
    for r in rows:
        print(f"{r['t']:.3f}  lmax={r['lambda_max']:.10f}  lmin={r['lambda_min']:.10f}  "
              f"d(G,A)={r['d_arithmetic']:.3e}  d(G,H)={r['d_harmonic']:.3e}")
    print("non-monotone rows:", sweep_violations(rows) or "none")


if __name__ == "__main__":
    main()
