"""Distance of G_t(A^p)^(1/p) to the log-Euclidean mean as p shrinks."""

import argparse

from gtmean import testkit as tk
from gtmean.fixed_point_means import lie_trotter_limit

P_GRID = (1.0, 0.3, 1e-1, 3e-2, 1e-2, 3e-3, 1e-3)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--pairs", type=int, default=5)
    ap.add_argument("--t", type=float, default=0.5)
    args = ap.parse_args()
    print("p:      " + "  ".join(f"{p:>8.0e}" for p in P_GRID))
    for i in range(args.pairs):
        T = tk.random_tuple(args.seed, 1, i, n=2, uniform=True, cond_max=1e2, dim_range=(2, 6))
        dists = [d for _, d in lie_trotter_limit(T, args.t, P_GRID)]
        print(f"pair {i}: " + "  ".join(f"{d:>8.1e}" for d in dists))


if __name__ == "__main__":
    main()
