"""Commuting 2x2 triple: G_t over a few t, the Cartan mean, and their Loewner relation."""

import numpy as np

from gtmean import cartan_mean, g_mean
from gtmean.explore import loewner_relation, worked_triple


def main():
    T = worked_triple()
    L = cartan_mean(T)
    print(f"Cartan mean ({L.iterations} iterations):\n{np.round(L.solution, 8)}")
    for t in (0.1, 0.25, 0.5, 0.75, 0.9):
        rep = g_mean(t, T)
        rel = loewner_relation(rep.solution, L.solution)
        print(f"t={t:<5} iterations={rep.iterations:<3} residual={rep.residual:.1e} "
              f"vs Cartan: {rel}\n{np.round(rep.solution, 8)}")


if __name__ == "__main__":
    main()
