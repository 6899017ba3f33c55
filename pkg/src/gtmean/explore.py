"""Evidence gathering for two open questions about G_t.

``g_vs_cartan`` compares G_t with the Cartan mean in the Loewner order:
is ``G_t >= Cartan`` for ``t <= 1/2`` and ``G_t <= Cartan`` for ``t >= 1/2``?

``log_majorization`` follows ``G_t((1/2, 1/2); A^p, B^p)^(1/p)`` as ``p``
shrinks and measures how far it is from being weakly log-majorized by the
log-Euclidean mean of ``A`` and ``B``.

Neither function asserts anything; they return findings.
"""

from dataclasses import dataclass, field

import numpy as np

from . import testkit as tk
from .errors import GtMeanError
from .fixed_point_means import cartan_mean, g_mean
from .spd_core import loewner_gap, powm
from .two_means import MatrixTuple, log_euclidean_mean

CONJECTURES = ("g-vs-cartan", "log-majorization")
EXPLORE_T = (0.1, 0.25, 0.5, 0.75, 0.9)
P_GRID = (1.0, 0.5, 0.25, 1e-1, 1e-2, 1e-3)
ORDER_TOL = 1e-9
# solver tolerance 1e-12 amplified by 1/p with p down to 1e-3, plus margin
GAP_TOL = 1e-8


def worked_triple():
    """The commuting 2x2 triple used as the worked example."""
    return MatrixTuple(
        [
            [[2.0, -1.0], [-1.0, 2.0]],
            [[3.0, -2.0], [-2.0, 3.0]],
            [[2.0, 1.0], [1.0, 2.0]],
        ]
    )


def loewner_relation(X, Y, tol=ORDER_TOL):
    """One of ``"equal"``, ``"greater"``, ``"less"``, ``"incomparable"`` for ``X`` vs ``Y``."""
    ge = loewner_gap(Y, X) <= tol * max(1.0, np.linalg.norm(X))
    le = loewner_gap(X, Y) <= tol * max(1.0, np.linalg.norm(X))
    if ge and le:
        return "equal"
    if ge:
        return "greater"
    if le:
        return "less"
    return "incomparable"


@dataclass
class Finding:
    conjecture: str
    instances: int
    summary: dict
    counterexamples: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    def lines(self):
        out = [f"{self.conjecture}: {self.instances} instances"]
        for key, val in self.summary.items():
            out.append(f"  {key}: {val}")
        out.append(f"  counterexamples: {len(self.counterexamples)}")
        for ce in self.counterexamples[:3]:
            if "relation" in ce:
                out.append(f"    t={ce['t']} relation={ce['relation']} source={ce['source']}")
                out.append(f"      G_t    = {np.round(ce['g_mean'], 8).tolist()}")
                out.append(f"      Cartan = {np.round(ce['cartan'], 8).tolist()}")
            else:
                gaps = ", ".join(f"{g:.2e}" for g in ce["gaps"])
                out.append(f"    pair {ce['index']} t={ce['t']} increasing={ce['increasing']} gaps=[{gaps}]")
        for err in self.errors:
            out.append(f"  error: {err}")
        return out


def _expected(t):
    if t < 0.5:
        return ("greater", "equal")
    if t > 0.5:
        return ("less", "equal")
    return ("greater", "less", "equal")


def g_vs_cartan(seed=42, count=100, t_grid=EXPLORE_T, include_worked=True, tuples=None):
    """Tally Loewner relations between G_t and the Cartan mean.

    Instances are the worked-example triple (when ``include_worked``), then
    ``count`` seeded tuples, or the given ``tuples``.  A counterexample is
    any instance whose relation is not the conjectured one for its ``t``; at
    ``t = 1/2`` either direction counts as conjectured.
    """
    if tuples is None:
        tuples = [("seeded", tk.random_tuple(seed, 600, i, cond_max=1e2, dim_range=(2, 5))) for i in range(count)]
    else:
        tuples = [("given", T) for T in tuples]
    if include_worked:
        tuples = [("worked example", worked_triple())] + tuples
    tally = {t: {"equal": 0, "greater": 0, "less": 0, "incomparable": 0} for t in t_grid}
    counter, errors = [], []
    for idx, (source, T) in enumerate(tuples):
        try:
            L = cartan_mean(T).solution
            for t in t_grid:
                G = g_mean(t, T).solution
                rel = loewner_relation(G, L)
                tally[t][rel] += 1
                if rel not in _expected(t):
                    counter.append(
                        {"index": idx, "source": source, "t": t, "relation": rel,
                         "matrices": T.matrices.tolist(), "weights": T.weights.tolist(),
                         "g_mean": G.tolist(), "cartan": L.tolist()}
                    )
        except GtMeanError as exc:
            errors.append(f"instance {idx}: {exc}")
    summary = {f"t={t}": tally[t] for t in t_grid}
    return Finding("g-vs-cartan", len(tuples), summary, counter, errors)


def weak_log_majorization_margin(X, Y):
    """``max_k sum_{i<=k} (log lam_i(X) - log lam_i(Y))`` over descending eigenvalues.

    Nonpositive exactly when ``X`` is weakly log-majorized by ``Y``.
    """
    lx = np.log(np.linalg.eigvalsh(X)[::-1])
    ly = np.log(np.linalg.eigvalsh(Y)[::-1])
    return float(np.max(np.cumsum(lx - ly)))


def weak_log_majorization_gap(X, Y):
    """How far ``X`` is from being weakly log-majorized by ``Y``; zero when it is."""
    return max(weak_log_majorization_margin(X, Y), 0.0)


def log_majorization(seed=42, count=100, t_grid=(0.5, 0.75, 1.0), p_grid=P_GRID, pairs=None):
    """Weak log-majorization gaps of ``G_t(A^p, B^p)^(1/p)`` against the log-Euclidean mean.

    For each pair and ``t`` the gap sequence over ``p_grid`` is recorded,
    together with whether the partial log-eigenvalue sums increase as ``p``
    decreases.
    """
    if pairs is None:
        pairs = [tk.random_tuple(seed, 601, i, n=2, uniform=True, cond_max=1e2, dim_range=(2, 5))
                 for i in range(count)]
    pairs = [MatrixTuple(P.matrices) for P in pairs]
    worst = {t: -np.inf for t in t_grid}
    monotone = {t: 0 for t in t_grid}
    counter, errors = [], []
    for idx, T in enumerate(pairs):
        target = log_euclidean_mean(T)
        for t in t_grid:
            try:
                gaps, sums = [], []
                for p in p_grid:
                    X = powm(g_mean(t, T.power(p)).solution, 1.0 / p)
                    gaps.append(weak_log_majorization_gap(X, target))
                    sums.append(np.cumsum(np.log(np.linalg.eigvalsh(X)[::-1])))
            except GtMeanError as exc:
                errors.append(f"pair {idx}, t={t}: {exc}")
                continue
            worst[t] = max(worst[t], max(gaps))
            inc = all(np.all(b >= a - GAP_TOL) for a, b in zip(sums, sums[1:]))
            monotone[t] += inc
            if max(gaps) > GAP_TOL or not inc:
                counter.append({"index": idx, "t": t, "p": list(p_grid), "gaps": gaps,
                                "increasing": inc, "matrices": T.matrices.tolist()})
    summary = {f"t={t}": {"max_gap": worst[t], "increasing_in_p": f"{monotone[t]}/{len(pairs)}"}
               for t in t_grid}
    return Finding("log-majorization", len(pairs), summary, counter, errors)


def explore(conjecture, seed=42, count=100):
    if conjecture == "g-vs-cartan":
        return g_vs_cartan(seed, count)
    if conjecture == "log-majorization":
        return log_majorization(seed, count)
    raise ValueError(f"unknown conjecture {conjecture!r}; choose from {CONJECTURES}")
