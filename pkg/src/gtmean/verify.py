"""Seeded invariant suites.

Each check maps ``(seed, i)`` to a violation (a float compared against its
tolerance) or ``None`` when instance ``i`` does not meet the check's
hypothesis.  Suites are named ``thompson``, ``properties``, ``ordering``,
``bounds`` and ``divergence``; ``all`` runs every suite in that order.

Instance counts scale with ``count``: a check declared with ``factor=2``
runs ``2 * count`` instances.  At the default ``count=100`` each check runs
its nominal ensemble size.
"""

from dataclasses import asdict, dataclass

import numpy as np

from . import testkit as tk
from .divergence_barycenter import BarycenterProblem, phi_gradient, phi_value, right_mean
from .fixed_point_means import (
    SolverOptions,
    cartan_mean,
    closed_form_two,
    contraction_check,
    g_mean,
    lie_trotter_limit,
    power_mean,
    resolvent_residual,
    g_fixed_point_map,
)
from .metrics import (
    _thompson,
    bures_wasserstein,
    logdet_div,
    logdet_div_direct,
    qdiv_check,
    riemannian,
    stein_metric,
    thompson,
)
from .spd_core import (
    congruence,
    expm,
    invm,
    jacobi_eig,
    logm,
    loewner_gap,
    loewner_leq,
    mat_fn,
    powm,
    sym_eig,
    symmetrize,
)
from .two_means import MatrixTuple, arithmetic_mean, geo_mean, harmonic_mean

SUITES = ("thompson", "properties", "ordering", "bounds", "divergence")
T_GRID = (0.1, 0.25, 0.5, 0.75, 0.9)
LOEWNER_TOL = 1e-8
SCALAR_TOL = 1e-8


@dataclass
class InvariantResult:
    suite: str
    name: str
    instances: int
    skipped: int
    max_violation: float
    tolerance: float
    passed: bool
    replay: list = None

    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        return (
            f"{flag}  {self.suite:<10} {self.name:<58} n={self.instances:<5d} "
            f"max={self.max_violation:.3e} tol={self.tolerance:.1e}"
        )


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    tol: float
    fn: object
    factor: float = 1.0
    strict: bool = False
    min_instances: int = 1


_REGISTRY = []


def check(suite, name, tol, factor=1.0, strict=False, min_instances=1):
    def deco(fn):
        _REGISTRY.append(Check(suite, name, tol, fn, factor, strict, min_instances))
        return fn

    return deco


def run_check(c, seed=42, count=100):
    n = max(1, int(round(c.factor * count)))
    worst, worst_i, first_fail, ran, skipped = -np.inf, None, None, 0, 0
    for i in range(n):
        v = c.fn(seed, i)
        if v is None:
            skipped += 1
            continue
        ran += 1
        v = float(v)
        bad = not (v < c.tol if c.strict else v <= c.tol) or not np.isfinite(v)
        if bad and first_fail is None:
            first_fail = i
        if v > worst or not np.isfinite(v):
            worst, worst_i = v, i
    passed = first_fail is None and ran >= min(c.min_instances, max(1, n // 10))
    replay = [seed, first_fail if first_fail is not None else worst_i]
    return InvariantResult(c.suite, c.name, ran, skipped, float(worst), c.tol, passed, replay)


def checks(suite="all"):
    if suite == "all":
        return list(_REGISTRY)
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES + ('all',)}")
    return [c for c in _REGISTRY if c.suite == suite]


def run_suite(suite="all", seed=42, count=100, progress=None):
    out = []
    for c in checks(suite):
        r = run_check(c, seed, count)
        if progress is not None:
            progress(r)
        out.append(r)
    return out


def report_dict(results, seed, count):
    return {
        "seed": seed,
        "count": count,
        "passed": all(r.passed for r in results),
        "invariants": [asdict(r) for r in results],
    }


# --- helpers -----------------------------------------------------------------


def _rel(X, Y):
    return float(np.linalg.norm(X - Y) / max(np.linalg.norm(Y), 1e-300))


def _t_for(seed, i, grid=T_GRID):
    return grid[int(tk.rng(seed, 99, i).integers(len(grid)))]


def _tuple(seed, i, key, **kw):
    kw.setdefault("cond_max", 1e4)
    return tk.random_tuple(seed, key, i, **kw)


def _spd(seed, *keys, dim=None, cond=1e3, scale=1.0):
    if dim is None:
        dim = int(tk.rng(seed, *keys, 7).integers(1, 9))
    return tk.random_spd(tk.SpdGenSpec(dim, cond, scale, seed), *keys)


def _pair(seed, i, key, cond=1e3, dim_range=(1, 8)):
    dim = int(tk.rng(seed, key, i, 7).integers(dim_range[0], dim_range[1] + 1))
    return [_spd(seed, key, i, j, dim=dim, cond=cond) for j in range(4)]


def _G(t, T):
    return g_mean(t, T).solution


def _gap(A, B):
    """Violation of ``A <= B``."""
    return loewner_gap(A, B)


def _opnorm(A):
    return float(np.linalg.eigvalsh(A)[-1])


# --- suite: thompson (core linear algebra, two-variable means, metric layer) --


@check("thompson", "log/exp round trip (cond <= 1e6)", 1e-8, factor=5)
def _(seed, i):
    A = _spd(seed, 100, i, cond=1e6)
    return _rel(mat_fn(mat_fn(A, "log"), "exp"), A)


@check("thompson", "power(p+q) = power(p) power(q)", 1e-9)
def _(seed, i):
    A = _spd(seed, 101, i, cond=1e3)
    p, q = tk.rng(seed, 101, i, 1).uniform(-1.5, 1.5, size=2)
    return _rel(powm(A, p) @ powm(A, q), powm(A, p + q))


@check("thompson", "power(1) = A and power(0) = I", 1e-12)
def _(seed, i):
    A = _spd(seed, 102, i)
    return max(_rel(powm(A, 1.0), A), float(np.max(np.abs(powm(A, 0.0) - np.eye(A.shape[0])))))


@check("thompson", "congruence(S, congruence(S^-1, A)) = A", 1e-9)
def _(seed, i):
    A = _spd(seed, 103, i, cond=1e3)
    S = tk.random_invertible(A.shape[0], seed, 103, i, 1, cond_max=100.0)
    return _rel(congruence(S, congruence(np.linalg.inv(S), A)), A)


@check("thompson", "Jacobi eigendecomposition agrees with LAPACK", 1e-10)
def _(seed, i):
    A = _spd(seed, 104, i, cond=1e4)
    w, V = jacobi_eig(A)
    ref = sym_eig(A).eigenvalues
    orth = float(np.max(np.abs(V.T @ V - np.eye(len(w)))))
    recon = _rel((V * w) @ V.T, A)
    return max(orth, recon, float(np.max(np.abs(w - ref)) / np.max(ref)))


@check("thompson", "Loewner order reflexive and antisymmetric", 0.0)
def _(seed, i):
    A = _spd(seed, 105, i)
    B = _spd(seed, 105, i, 1, dim=A.shape[0])
    bad = not loewner_leq(A, A, 0.0)
    if loewner_leq(A, B, 1e-12) and loewner_leq(B, A, 1e-12):
        bad = bad or _rel(A, B) > 1e-10
    return float(bad)


@check("thompson", "Thompson inversion and congruence invariance", 1e-9, factor=2)
def _(seed, i):
    A, B, _, _ = _pair(seed, i, 110)
    S = tk.random_invertible(A.shape[0], seed, 110, i, 9, cond_max=10.0)
    d = thompson(A, B)
    return max(abs(d - thompson(invm(A), invm(B))), abs(d - thompson(S @ A @ S.T, S @ B @ S.T)))


@check("thompson", "Thompson geodesic: d(A#sB, A#tB) = |s-t| d(A,B)", 1e-9, factor=2)
def _(seed, i):
    A, B, _, _ = _pair(seed, i, 111)
    s, t = tk.rng(seed, 111, i, 8).random(2)
    return abs(thompson(geo_mean(A, B, s), geo_mean(A, B, t)) - abs(s - t) * thompson(A, B))


@check("thompson", "Thompson: d(A#tB, C#tD) <= (1-t)d(A,C) + t d(B,D)", 1e-10, factor=2)
def _(seed, i):
    A, B, C, D = _pair(seed, i, 112)
    t = tk.rng(seed, 112, i, 8).random()
    lhs = thompson(geo_mean(A, B, t), geo_mean(C, D, t))
    return lhs - (1 - t) * thompson(A, C) - t * thompson(B, D)


@check("thompson", "convexity d(A#sB,C#tD) <= (1-s)d(A,C) + s d(B,D) + |s-t| d(C,D)", 1e-10, factor=2)
def _(seed, i):
    A, B, C, D = _pair(seed, i, 113)
    s, t = tk.rng(seed, 113, i, 8).random(2)
    lhs = thompson(geo_mean(A, B, s), geo_mean(C, D, t))
    return lhs - ((1 - s) * thompson(A, C) + s * thompson(B, D) + abs(s - t) * thompson(C, D))


@check("thompson", "convexity d(A#sB,C#tD) <= (1-t)d(A,C) + t d(B,D) + |s-t| d(A,B)", 1e-10, factor=2)
def _(seed, i):
    A, B, C, D = _pair(seed, i, 113)
    s, t = tk.rng(seed, 113, i, 8).random(2)
    lhs = thompson(geo_mean(A, B, s), geo_mean(C, D, t))
    return lhs - ((1 - t) * thompson(A, C) + t * thompson(B, D) + abs(s - t) * thompson(A, B))


@check("thompson", "Thompson non-expansive under sums", 1e-10, factor=2)
def _(seed, i):
    g = tk.rng(seed, 114, i)
    n, dim = int(g.integers(1, 6)), int(g.integers(1, 9))
    As = [_spd(seed, 114, i, 1, k, dim=dim) for k in range(n)]
    Bs = [_spd(seed, 114, i, 2, k, dim=dim) for k in range(n)]
    return thompson(sum(As), sum(Bs)) - max(thompson(a, b) for a, b in zip(As, Bs))


@check("thompson", "Thompson additive contraction", 1e-10, factor=2)
def _(seed, i):
    A, X, Y, _ = _pair(seed, i, 115)
    a = max(_opnorm(X), _opnorm(Y))
    b = float(np.linalg.eigvalsh(A)[0])
    return thompson(A + X, A + Y) - a / (a + b) * thompson(X, Y)


@check("thompson", "Stein metric triangle inequality", 1e-10, factor=10)
def _(seed, i):
    A, B, C, _ = _pair(seed, i, 116)
    return stein_metric(A, C) - stein_metric(A, B) - stein_metric(B, C)


for _k, _t in enumerate((0.25, 0.5, 0.75)):

    @check("thompson", f"Stein metric: d_S(A#tB, A#tC) <= sqrt(t) d_S(B,C), t={_t}", 1e-10, factor=2)
    def _(seed, i, t=_t, k=_k):
        A, B, C, _ = _pair(seed, i, 117 + k)
        return stein_metric(geo_mean(A, B, t), geo_mean(A, C, t)) - np.sqrt(t) * stein_metric(B, C)


@check("thompson", "Riemannian and Bures-Wasserstein symmetric", 1e-9)
def _(seed, i):
    A, B, _, _ = _pair(seed, i, 120)
    return max(abs(riemannian(A, B) - riemannian(B, A)), abs(bures_wasserstein(A, B) - bures_wasserstein(B, A)))


@check("thompson", "Riemannian distance congruence invariant", 1e-9)
def _(seed, i):
    A, B, _, _ = _pair(seed, i, 121)
    S = tk.random_invertible(A.shape[0], seed, 121, i, 9, cond_max=10.0)
    return abs(riemannian(A, B) - riemannian(S @ A @ S.T, S @ B @ S.T))


@check("thompson", "Riccati: (A#B) A^-1 (A#B) = B", 1e-9)
def _(seed, i):
    A, B, _, _ = _pair(seed, i, 122)
    X = geo_mean(A, B)
    return _rel(X @ np.linalg.solve(A, X), B)


@check("thompson", "geometric mean self-duality", 1e-9)
def _(seed, i):
    A, B, _, _ = _pair(seed, i, 123)
    t = tk.rng(seed, 123, i, 8).random()
    return thompson(invm(geo_mean(A, B, t)), geo_mean(invm(A), invm(B), t))


@check("thompson", "harmonic <= arithmetic", 1e-10)
def _(seed, i):
    T = _tuple(seed, i, 124)
    return _gap(harmonic_mean(T), arithmetic_mean(T))


@check("thompson", "||A#tB|| <= ||A||^(1-t) ||B||^t", 1e-10)
def _(seed, i):
    A, B, _, _ = _pair(seed, i, 125)
    t = tk.rng(seed, 125, i, 8).random()
    return _opnorm(geo_mean(A, B, t)) - _opnorm(A) ** (1 - t) * _opnorm(B) ** t


# --- suite: properties (G_t structure) ---------------------------------------


@check("properties", "idempotency G_t(A,...,A) = A", SCALAR_TOL)
def _(seed, i):
    T = _tuple(seed, i, 200)
    A = T.matrices[0]
    return thompson(_G(_t_for(seed, i), MatrixTuple([A] * T.n, T.weights)), A)


for _k, _c in enumerate((0.5, 2.0, 10.0)):

    @check("properties", f"homogeneity G_t(cA) = c G_t(A), c={_c}", SCALAR_TOL)
    def _(seed, i, c=_c, k=_k):
        T = _tuple(seed, i, 201 + k)
        t = _t_for(seed, i)
        return thompson(_G(t, T.scaled(c)), c * _G(t, T))


@check("properties", "permutation invariance", SCALAR_TOL)
def _(seed, i):
    T = _tuple(seed, i, 204)
    perm = tk.rng(seed, 204, i, 5).permutation(T.n)
    t = _t_for(seed, i)
    return thompson(_G(t, T.permuted(perm)), _G(t, T))


@check("properties", "monotonicity A_i <= B_i => G_t(A) <= G_t(B)", LOEWNER_TOL)
def _(seed, i):
    T = _tuple(seed, i, 205)
    P = [tk.random_psd(T.dim, seed, 205, i, 5, k, scale=tk.rng(seed, 205, i, 6, k).random())
         for k in range(T.n)]
    U = MatrixTuple(T.matrices + np.stack(P), T.weights)
    t = _t_for(seed, i)
    return _gap(_G(t, T), _G(t, U))


@check("properties", "non-expansive: d(G_t(A), G_t(B)) <= max d(A_i, B_i)", SCALAR_TOL)
def _(seed, i):
    T = _tuple(seed, i, 206)
    U = MatrixTuple([tk.random_spd(tk.SpdGenSpec(T.dim, 1e4, 1.0, seed), 206, i, 5, k) for k in range(T.n)],
                    T.weights)
    t = _t_for(seed, i)
    return thompson(_G(t, T), _G(t, U)) - max(thompson(a, b) for a, b in zip(T, U))


@check("properties", "congruence invariance G_t(SAS^T) = S G_t(A) S^T", SCALAR_TOL)
def _(seed, i):
    T = _tuple(seed, i, 207, cond_max=1e3)
    S = tk.random_invertible(T.dim, seed, 207, i, 5, cond_max=10.0)
    t = _t_for(seed, i)
    return thompson(_G(t, T.congruence(S)), S @ _G(t, T) @ S.T)


@check("properties", "self-duality G_(1-t)(A^-1) = G_t(A)^-1", SCALAR_TOL)
def _(seed, i):
    T = _tuple(seed, i, 208)
    t = _t_for(seed, i)
    return thompson(_G(1 - t, T.inverse()), invm(_G(t, T)))


@check("properties", "harmonic <= G_t <= arithmetic", LOEWNER_TOL)
def _(seed, i):
    T = _tuple(seed, i, 209)
    G = _G(_t_for(seed, i), T)
    return max(_gap(harmonic_mean(T), G), _gap(G, arithmetic_mean(T)))


@check("properties", "||G_(1-t)|| <= [sum w_i ||A_i||^t]^(1/t)", SCALAR_TOL)
def _(seed, i):
    T = _tuple(seed, i, 210)
    t = _t_for(seed, i, T_GRID + (1.0,))
    bound = float(np.sum(T.weights * np.array([_opnorm(A) for A in T]) ** t) ** (1 / t))
    return _opnorm(_G(1 - t, T)) - bound


@check("properties", "positive maps: Phi(G_t(A)) <= G_t(Phi(A))", LOEWNER_TOL)
def _(seed, i):
    T = _tuple(seed, i, 211)
    phi = tk.random_positive_map(T.dim, seed, 211, i, 5)
    t = _t_for(seed, i)
    return _gap(tk.apply_positive_map(phi, _G(t, T)), _G(t, T.map(lambda A: tk.apply_positive_map(phi, A))))


@check("properties", "solver certificate: resolvent residual", 1e-8)
def _(seed, i):
    T = _tuple(seed, i, 212)
    t = _t_for(seed, i, (0.01,) + T_GRID)
    rep = g_mean(t, T)
    return resolvent_residual(rep.solution, t, T) if T.n > 1 else 0.0


@check("properties", "solver: contraction estimate < 1", 1.0, strict=True)
def _(seed, i):
    T = _tuple(seed, i, 213)
    return g_mean(_t_for(seed, i, (0.01,) + T_GRID), T).contraction_estimate


@check("properties", "solver: ||X - f(X)||_F / (10 tol ||X||_F)", 1.0)
def _(seed, i):
    T = _tuple(seed, i, 214)
    t = _t_for(seed, i, (0.01,) + T_GRID)
    X = _G(t, T)
    return float(np.linalg.norm(X - g_fixed_point_map(t, T, X)) / (10 * 1e-12 * np.linalg.norm(X)))


@check("properties", "contraction: d(f(X), f(Y)) <= bound", 1e-10, factor=2)
def _(seed, i):
    T = _tuple(seed, i, 215, cond_max=1e3)
    X = tk.random_spd(tk.SpdGenSpec(T.dim, 1e3, 1.0, seed), 215, i, 5)
    Y = tk.random_spd(tk.SpdGenSpec(T.dim, 1e3, 1.0, seed), 215, i, 6)
    t = float(tk.rng(seed, 215, i, 7).uniform(0.01, 0.99))
    lhs, bound = contraction_check(t, T, X, Y)
    return lhs - bound


@check("properties", "scalar G_t matches bisection oracle (rel)", 1e-12, factor=2)
def _(seed, i):
    T = _tuple(seed, i, 216, dim=1, n_range=(1, 6))
    a = T.matrices[:, 0, 0]
    err = 0.0
    for t in np.round(np.arange(1, 11) / 10, 10):
        x = _G(t, T)[0, 0]
        ref = tk.scalar_g_oracle(t, a, T.weights)
        err = max(err, abs(x - ref) / max(1.0, abs(ref)))
    return err


@check("properties", "closed form for (t-w1)A = (w2-t)B agrees with G_t", SCALAR_TOL)
def _(seed, i):
    g = tk.rng(seed, 217, i)
    w1 = float(g.uniform(0.05, 0.95))
    w2 = 1.0 - w1
    t = float(g.uniform(min(w1, w2), max(w1, w2)))
    A = _spd(seed, 217, i, 1, cond=1e3)
    B = (t - w1) / (w2 - t) * A
    X = closed_form_two(t, w1, w2, A, B)
    return thompson(X, _G(t, MatrixTuple([A, B], [w1, w2])))


@check("properties", "Lie-Trotter: distances strictly decrease over p", 0.0, strict=True, factor=0.5)
def _(seed, i):
    T = _tuple(seed, i, 218, n=2, cond_max=10.0, dim_range=(2, 6))
    d = [x for _, x in lie_trotter_limit(T, 0.5, (1e-1, 1e-2, 1e-3))]
    return max(d[1] - d[0], d[2] - d[1])


@check("properties", "Lie-Trotter: distance at p=1e-3", 1e-3, strict=True, factor=0.5)
def _(seed, i):
    T = _tuple(seed, i, 218, n=2, cond_max=10.0, dim_range=(2, 6))
    return lie_trotter_limit(T, 0.5, (1e-3,))[0][1]


def commuting_tuple(seed, *keys, n=None, uniform=False):
    """Random tuple sharing one eigenbasis."""
    T = tk.random_tuple(seed, *keys, n=n, cond_max=10.0, dim_range=(2, 6), uniform=uniform)
    Q = np.linalg.qr(tk.rng(seed, *keys, 5).standard_normal((T.dim, T.dim)))[0]
    return MatrixTuple([(Q * np.linalg.eigvalsh(A)) @ Q.T for A in T], T.weights)


# Two matrices, equal weights, t = 1/2: every G_t(A^p)^(1/p) equals the
# log-Euclidean mean when the pair commutes.  Other commuting tuples only
# approach it as p -> 0.
@check("properties", "Lie-Trotter: commuting pairs (w=1/2, t=1/2) give distance 0", 1e-8, factor=0.5)
def _(seed, i):
    D = commuting_tuple(seed, 219, i, n=2, uniform=True)
    return max(d for _, d in lie_trotter_limit(D, 0.5, (1e-1, 1e-2, 1e-3)))


# --- suite: ordering (monotonicity in t, limits, power means) ----------------

T_MONO = tuple(np.round(np.arange(1, 11) / 10, 10))


@check("ordering", "monotone in t: s <= t => G_t <= G_s", LOEWNER_TOL)
def _(seed, i):
    T = _tuple(seed, i, 300)
    Gs = [_G(t, T) for t in T_MONO]
    return max(_gap(Gs[b], Gs[a]) for a in range(len(Gs)) for b in range(a, len(Gs)))


T_LIMIT = (1e-1, 1e-2, 1e-3, 1e-4)


def _limit_distances(seed, i):
    T = _tuple(seed, i, 301, cond_max=1e2, n_range=(2, 6))
    A = arithmetic_mean(T)
    return [thompson(_G(t, T), A) for t in T_LIMIT]


@check("ordering", "limit t->0: d(G_t, arithmetic) strictly decreasing", 0.0, strict=True, factor=0.5)
def _(seed, i):
    d = _limit_distances(seed, i)
    return max(b - a for a, b in zip(d, d[1:]))


@check("ordering", "limit t->0: d(G_t, arithmetic) at t=1e-4", 1e-3, strict=True, factor=0.5)
def _(seed, i):
    return _limit_distances(seed, i)[-1]


for _t in (0.25, 0.5, 0.75, 1.0):

    @check("ordering", f"G_t >= P_-t, t={_t}", LOEWNER_TOL)
    def _(seed, i, t=_t):
        T = _tuple(seed, i, 302)
        return _gap(power_mean(-t, T).solution, _G(t, T))

    @check("ordering", f"G_(1-t) <= P_t, t={_t}", LOEWNER_TOL)
    def _(seed, i, t=_t):
        T = _tuple(seed, i, 303)
        return _gap(_G(1 - t, T), power_mean(t, T).solution)


@check("ordering", "Cartan <= arithmetic", LOEWNER_TOL)
def _(seed, i):
    T = _tuple(seed, i, 304)
    return _gap(cartan_mean(T).solution, arithmetic_mean(T))


for _s in (0.25, 0.75):

    @check("ordering", f"power-mean chain H <= P_-s <= Cartan <= P_s <= A, s={_s}", LOEWNER_TOL)
    def _(seed, i, s=_s):
        T = _tuple(seed, i, 305)
        chain = [
            harmonic_mean(T),
            power_mean(-s, T).solution,
            cartan_mean(T).solution,
            power_mean(s, T).solution,
            arithmetic_mean(T),
        ]
        return max(_gap(a, b) for a, b in zip(chain, chain[1:]))


@check("ordering", "G_1/2((1/2,1/2); A, B) = A # B", SCALAR_TOL, factor=2)
def _(seed, i):
    T = _tuple(seed, i, 306, n=2, uniform=True, dim_range=(2, 8))
    A, B = T.matrices
    return thompson(_G(0.5, T), geo_mean(A, B))


# --- suite: bounds -----------------------------------------------------------


@check("bounds", "G_t >= lmin^(1-t) (sum w_i A_i^-t)^-1", LOEWNER_TOL)
def _(seed, i):
    T = _tuple(seed, i, 400)
    t = _t_for(seed, i, T_GRID + (1.0,))
    lmin = min(np.linalg.eigvalsh(A)[0] for A in T)
    S = sum(w * powm(A, -t) for w, A in zip(T.weights, T))
    return _gap(lmin ** (1 - t) * invm(symmetrize(S)), _G(t, T))


@check("bounds", "G_(1-t) <= lmax^(1-t) sum w_i A_i^t", LOEWNER_TOL)
def _(seed, i):
    T = _tuple(seed, i, 401)
    t = _t_for(seed, i, T_GRID + (1.0,))
    lmax = max(np.linalg.eigvalsh(A)[-1] for A in T)
    S = sum(w * powm(A, t) for w, A in zip(T.weights, T))
    return _gap(_G(1 - t, T), lmax ** (1 - t) * S)


def _corollary_tuple(seed, i, key):
    T = _tuple(seed, i, key)
    lo = min(np.linalg.eigvalsh(A)[0] for A in T)
    hi = max(np.linalg.eigvalsh(A)[-1] for A in T)
    mode = i % 3
    if mode == 0:
        return T.scaled(1.0 / lo)
    if mode == 1:
        return T.scaled(1.0 / hi)
    return T.scaled(float(np.exp(tk.rng(seed, key, i, 5).normal(scale=2.0))) / np.sqrt(lo * hi))


@check("bounds", "corollary (i): G_t >= I => G_t >= (sum w_i A_i^-t)^-1", LOEWNER_TOL, min_instances=10)
def _(seed, i):
    T = _corollary_tuple(seed, i, 402)
    t = _t_for(seed, i)
    G = _G(t, T)
    if not loewner_leq(np.eye(T.dim), G):
        return None
    return _gap(invm(symmetrize(sum(w * powm(A, -t) for w, A in zip(T.weights, T)))), G)


@check("bounds", "corollary (ii): G_t <= I => G_t <= sum w_i A_i^(1-t)", LOEWNER_TOL, min_instances=10)
def _(seed, i):
    T = _corollary_tuple(seed, i, 403)
    t = _t_for(seed, i)
    G = _G(t, T)
    if not loewner_leq(G, np.eye(T.dim)):
        return None
    return _gap(G, sum(w * powm(A, 1 - t) for w, A in zip(T.weights, T)))


# --- suite: divergence -------------------------------------------------------

ALPHAS = (-0.9, -0.5, 0.0, 0.5, 0.9)


def _alpha(seed, i, key, endpoints=True):
    g = tk.rng(seed, key, i, 50)
    if endpoints and g.random() < 0.2:
        return float(g.choice([-1.0, 1.0]))
    return float(g.uniform(-0.99, 0.99))


def _qdiv(seed, i):
    alpha = _alpha(seed, i, 500)
    A = _spd(seed, 500, i, cond=1e2)
    # direction of unit size in the local geometry at A
    Y = tk.random_symmetric(A.shape[0], seed, 500, i, 1)
    R = mat_fn(A, "sqrt")
    X = R @ (Y / np.linalg.norm(Y, 2)) @ R
    return qdiv_check(alpha, A, [X])[0]


@check("divergence", "quantum divergence: |first difference|", 1e-6)
def _(seed, i):
    return abs(_qdiv(seed, i).first)


@check("divergence", "quantum divergence: -(second difference)", 1e-8)
def _(seed, i):
    return -_qdiv(seed, i).second


@check("divergence", "second difference matches tr((A^-1 X)^2) (rel)", 1e-4)
def _(seed, i):
    r = _qdiv(seed, i)
    return abs(r.second - r.analytic_second) / max(1.0, r.analytic_second)


@check("divergence", "D_alpha(A|B) >= 0, D_alpha(A|A) = 0", 1e-12)
def _(seed, i):
    A, B, _, _ = _pair(seed, i, 501)
    alpha = _alpha(seed, i, 501)
    return max(-logdet_div(alpha, A, B), logdet_div(alpha, A, A))


@check("divergence", "D_alpha eigen route = determinant route (rel)", 1e-8)
def _(seed, i):
    A, B, _, _ = _pair(seed, i, 502, cond=1e2)
    alpha = _alpha(seed, i, 502)
    alpha = float(np.clip(alpha, -0.9, 0.9)) if abs(alpha) < 1 else alpha
    ref = logdet_div_direct(alpha, A, B)
    return abs(logdet_div(alpha, A, B) - ref) / max(1.0, ref)


@check("divergence", "lemma (i): D_alpha(SAS^T|SBS^T) = D_alpha(A|B)", 1e-9)
def _(seed, i):
    A, B, _, _ = _pair(seed, i, 503, cond=1e2)
    S = tk.random_invertible(A.shape[0], seed, 503, i, 9, cond_max=10.0)
    alpha = _alpha(seed, i, 503)
    return abs(logdet_div(alpha, S @ A @ S.T, S @ B @ S.T) - logdet_div(alpha, A, B))


@check("divergence", "lemma (ii): D_alpha(A^-1|B^-1) = D_alpha(B|A)", 1e-10)
def _(seed, i):
    A, B, _, _ = _pair(seed, i, 504, cond=1e2)
    alpha = _alpha(seed, i, 504)
    return abs(logdet_div(alpha, invm(A), invm(B)) - logdet_div(alpha, B, A))


@check("divergence", "lemma (iii): D_alpha(A^t|B^t) <= t D_alpha(A|B)", 1e-10)
def _(seed, i):
    A, B, _, _ = _pair(seed, i, 505, cond=1e2)
    alpha = _alpha(seed, i, 505)
    d = logdet_div(alpha, A, B)
    return max(logdet_div(alpha, powm(A, t), powm(B, t)) - t * d for t in T_MONO[:-1])


@check("divergence", "endpoint continuity at alpha = +-(1 - 1e-6)", 1e-4)
def _(seed, i):
    A, B, _, _ = _pair(seed, i, 506, cond=10.0)
    eps = 1e-6
    return max(abs(logdet_div(-1 + eps, A, B) - logdet_div(-1, A, B)),
               abs(logdet_div(1 - eps, A, B) - logdet_div(1, A, B)))


@check("divergence", "Stein metric congruence and inversion invariant", 1e-9)
def _(seed, i):
    A, B, _, _ = _pair(seed, i, 507, cond=1e2)
    S = tk.random_invertible(A.shape[0], seed, 507, i, 9, cond_max=10.0)
    d = stein_metric(A, B)
    return max(abs(d - stein_metric(S @ A @ S.T, S @ B @ S.T)), abs(d - stein_metric(invm(A), invm(B))))


def _problem(seed, i, key):
    T = _tuple(seed, i, key, cond_max=1e2, uniform=True)
    alpha = ALPHAS[i % len(ALPHAS)]
    return BarycenterProblem(alpha, tuple(T.matrices))


@check("divergence", "right mean: ||grad phi||_F / n", 1e-8)
def _(seed, i):
    P = _problem(seed, i, 510)
    return right_mean(P).extra["gradient_norm"] / P.n


@check("divergence", "right mean: local optimality phi(X*) <= phi(X* + hX)", 1e-12, factor=0.25)
def _(seed, i):
    P = _problem(seed, i, 511)
    X = right_mean(P).solution
    f0 = phi_value(P, X)
    h = 1e-3 * _opnorm(X)
    worst = -np.inf
    for k in range(20):
        D = tk.random_symmetric(X.shape[0], seed, 511, i, k)
        D = D / max(np.linalg.norm(D, 2), 1e-300) * np.linalg.eigvalsh(X)[0] / _opnorm(X)
        worst = max(worst, f0 - phi_value(P, X + h * D))
    return worst


@check("divergence", "grad phi matches central differences (rel)", 1e-5)
def _(seed, i):
    P = _problem(seed, i, 512)
    X = tk.random_spd(tk.SpdGenSpec(P.matrices[0].shape[0], 1e2, 1.0, seed), 512, i, 5)
    D = tk.random_symmetric(X.shape[0], seed, 512, i, 6)
    h = 1e-5 * np.linalg.eigvalsh(X)[0] / max(np.linalg.norm(D, 2), 1e-300)
    fd = (phi_value(P, X + h * D) - phi_value(P, X - h * D)) / (2 * h)
    an = float(np.sum(phi_gradient(P, X) * D))
    return abs(fd - an) / max(1.0, abs(an))


@check("divergence", "right mean = G_t at t=(1-alpha)/2 (bitwise) with certificate", 1e-8)
def _(seed, i):
    P = _problem(seed, i, 513)
    X = right_mean(P).solution
    Y = g_mean(P.t, P.as_tuple()).solution
    if not np.array_equal(X, Y):
        return np.inf
    return resolvent_residual(X, P.t, P.as_tuple()) if P.n > 1 else 0.0


@check("divergence", "right mean: multi-start agreement (5 starts)", 1e-8, factor=0.25)
def _(seed, i):
    P = _problem(seed, i, 514)
    X = right_mean(P).solution
    m = X.shape[0]
    worst = 0.0
    for k in range(5):
        X0 = tk.random_spd(tk.SpdGenSpec(m, 1e2, 1.0, seed), 514, i, k)
        Y = right_mean(P, SolverOptions(init=X0)).solution
        worst = max(worst, thompson(X, Y))
    return worst
