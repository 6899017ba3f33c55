"""Iteration counts, contraction bound and wall time of the G_t solver against t and conditioning."""

import argparse
import time

import numpy as np

from gtmean import g_mean
from gtmean import testkit as tk


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--reps", type=int, default=10)
    ap.add_argument("--dim", type=int, default=6)
    args = ap.parse_args()
    print(f"{'cond':>8} {'t':>6} {'iters':>7} {'bound':>8} {'ms':>8} {'method'}")
    for cond in (1e1, 1e3, 1e6):
        for t in (1e-3, 0.1, 0.5, 0.9):
            its, rates, secs, methods = [], [], [], set()
            for r in range(args.reps):
                T = tk.random_tuple(args.seed, 2, r, n=4, dim=args.dim, cond_max=cond)
                start = time.perf_counter()
                rep = g_mean(t, T)
                secs.append(time.perf_counter() - start)
                its.append(rep.iterations)
                rates.append(rep.contraction_estimate)
                methods.add(rep.method)
            print(f"{cond:>8.0e} {t:>6} {np.mean(its):>7.1f} {np.max(rates):>8.3f} "
                  f"{1e3 * np.mean(secs):>8.2f} {','.join(sorted(methods))}")


if __name__ == "__main__":
    main()
