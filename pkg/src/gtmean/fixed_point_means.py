"""Fixed-point solvers for G_t and the comparison family of matrix means.

``G_t(w; A)`` is the unique positive definite solution of

    X = [sum_i w_i ((1 - t) X + t A_i)^{-1}]^{-1},   0 < t <= 1,

obtained by iterating the right-hand side, which is a strict contraction for
the Thompson metric.  ``t = 0`` is the limiting convention ``G_0 = sum w_i A_i``.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import MaxIterExceeded, NotPositiveDefinite, ParameterOutOfRange, PreconditionViolated
from .metrics import _thompson
from .spd_core import expm, invm, invsqrtm, powm, same_dim, spd, sqrtm, symmetrize
from .two_means import MatrixTuple, arithmetic_mean, as_tuple, harmonic_mean, log_euclidean_mean

DEFECT_MAX_T = 0.25
_STALL_WINDOW = 8
_FLOOR_WINDOW = 50
_FLOOR_FACTOR = 100.0
_POLISH_STEPS = 3
_DEFECT_BUDGET = 500


@dataclass(frozen=True)
class SolverOptions:
    """Iteration control shared by every solver.

    ``init`` is one of ``"arithmetic"``, ``"harmonic"``, ``"identity"`` or an
    explicit SPD starting matrix.
    """

    tol: float = 1e-12
    max_iter: int = 10_000
    init: object = "arithmetic"

    def __post_init__(self):
        if not self.tol > 0:
            raise ParameterOutOfRange(f"tol must be positive, got {self.tol}")
        if int(self.max_iter) < 1:
            raise ParameterOutOfRange(f"max_iter must be >= 1, got {self.max_iter}")
        if isinstance(self.init, str) and self.init not in ("arithmetic", "harmonic", "identity"):
            raise ParameterOutOfRange(f"unknown init {self.init!r}")


DEFAULT_OPTIONS = SolverOptions()


@dataclass
class SolveReport:
    """Solution of a fixed-point solve plus its diagnostics.

    ``residual`` is the Thompson length of the last step and
    ``fixed_point_residual`` the Frobenius norm of ``X - f(X)`` at the
    returned solution.  ``contraction_estimate`` is the proven Lipschitz factor
    of the G_t map at the solution for :func:`g_mean`, and the observed
    geometric step ratio for the other solvers.
    """

    solution: np.ndarray
    iterations: int
    residual: float
    fixed_point_residual: float
    contraction_estimate: float
    method: str = ""
    convention: bool = False
    certificate: float = 0.0
    extra: dict = field(default_factory=dict)


def _initial(T, opts):
    init = opts.init
    if isinstance(init, str):
        if init == "arithmetic":
            return arithmetic_mean(T)
        if init == "harmonic":
            return harmonic_mean(T)
        return np.eye(T.dim)
    X0 = spd(init, "initial matrix")
    if X0.shape != (T.dim, T.dim):
        raise ParameterOutOfRange(f"initial matrix has shape {X0.shape}, expected {(T.dim, T.dim)}")
    return X0


def _observed_rate(steps):
    steps = [s for s in steps if s > 0]
    if len(steps) < 2:
        return 0.0
    return float((steps[-1] / steps[0]) ** (1.0 / (len(steps) - 1)))


class _Diverged(Exception):
    pass


def roundoff_floor(mats):
    """Smallest Thompson step a map built from ``mats`` can resolve: ``100 eps max cond``."""
    lam = np.linalg.eigvalsh(mats)
    return _FLOOR_FACTOR * np.finfo(float).eps * float(np.max(lam[:, -1] / lam[:, 0]))


def _iterate(step, X, opts, label, guard=False, floor=0.0):
    """Run ``X <- step(X)`` until the Thompson step meets ``opts.tol``.

    Besides ``step <= tol`` the a posteriori bound ``step * r / (1 - r)`` on
    the distance to the fixed point must meet ``tol``, where ``r`` is the last
    step ratio; a ratio >= 1 at that point means round-off has taken over and
    the iterate is accepted.

    With ``guard=True`` a step that leaves the cone, or a run of
    ``_STALL_WINDOW`` steps without a new smallest step, raises ``_Diverged``.
    Once the rule is met, up to ``_POLISH_STEPS`` further steps are taken
    while the step keeps shrinking.

    Otherwise, when ``tol`` lies below the round-off ``floor`` and
    ``_FLOOR_WINDOW`` steps bring no new smallest step, the best iterate is
    returned once its step is within ``floor``.
    """
    steps = []
    best, best_step = X, np.inf
    since_best = 0
    polish = None
    for k in range(1, opts.max_iter + 1):
        try:
            Y = step(X)
            d = _thompson(X, Y)
        except (np.linalg.LinAlgError, NotPositiveDefinite, FloatingPointError):
            if guard:
                raise _Diverged(best, k) from None
            raise
        if not np.isfinite(d):
            if guard:
                raise _Diverged(best, k)
            raise NotPositiveDefinite(f"{label}: iterate left the SPD cone")
        if polish is not None:
            if d >= steps[-1]:
                return X, k - 1, steps[-1], steps
            steps.append(d)
            X = Y
            polish -= 1
            if polish == 0 or d == 0.0:
                return X, k, d, steps
            continue
        steps.append(d)
        X = Y
        if d < best_step:
            best, best_step, since_best = Y, d, 0
        else:
            since_best += 1
            if guard and since_best >= _STALL_WINDOW and d > opts.tol:
                raise _Diverged(best, k)
            if not guard and since_best >= _FLOOR_WINDOW and best_step <= floor:
                return best, k, best_step, steps
        if d <= opts.tol:
            r = d / steps[-2] if len(steps) > 1 and steps[-2] > 0 else 0.0
            if r >= 1.0 or d == 0.0:
                return X, k, d, steps
            if d * r <= opts.tol * (1.0 - r):
                polish = _POLISH_STEPS
    if polish is not None:
        return X, opts.max_iter, steps[-1], steps
    raise MaxIterExceeded(
        f"{label}: no convergence in {opts.max_iter} iterations (best step {best_step:.3e})",
        best=best,
        residual=best_step,
        iterations=opts.max_iter,
    )


# --- G_t -------------------------------------------------------------------


def _g_map(X, t, mats, w):
    M = (1.0 - t) * X + t * mats
    S = symmetrize(np.einsum("i,ijk->jk", w, np.linalg.inv(M)))
    return symmetrize(np.linalg.inv(S))


def _g_defect_map(X, t, mats, w, arith):
    # Same fixed point: X M_i^{-1} X = X - t D_i + t^2 D_i M_i^{-1} D_i, D_i = A_i - X.
    M = (1.0 - t) * X + t * mats
    D = mats - X
    Q = np.einsum("i,ijk->jk", w, D @ np.linalg.solve(M, D))
    Y = symmetrize(arith - t * symmetrize(Q))
    np.linalg.cholesky(Y)
    return Y


def g_fixed_point_map(t, T, X):
    """One application ``f(X) = [sum_i w_i ((1-t) X + t A_i)^{-1}]^{-1}``."""
    T = as_tuple(T)
    return _g_map(spd(X), float(t), T.matrices, T.weights)


def _check_t(t, lo=0.0, hi=1.0, name="t", open_lo=False):
    t = float(t)
    if not (lo < t <= hi if open_lo else lo <= t <= hi):
        raise ParameterOutOfRange(f"{name}={t} outside {'(' if open_lo else '['}{lo}, {hi}]")
    return t


def _contraction_factor(t, X, mats):
    if t >= 1.0:
        return 0.0
    alpha = np.linalg.eigvalsh(X)[-1]
    betas = np.array([np.linalg.eigvalsh(A)[0] for A in mats])
    return float(np.max((1.0 - t) * alpha / ((1.0 - t) * alpha + t * betas)))


def g_mean(t, T, opts=DEFAULT_OPTIONS):
    """The mean ``G_t(w; A)``.

    Parameters
    ----------
    t : float in [0, 1]
        ``t = 1`` gives the harmonic mean and ``t = 0`` the arithmetic mean
        (a convention flagged on the report, no solve happens).
    T : MatrixTuple or sequence of SPD matrices
    opts : SolverOptions

    Returns
    -------
    SolveReport

    Notes
    -----
    For ``t <= 0.25`` the solver iterates the equivalent defect form
    ``X = sum w_i A_i - t sum_i w_i (A_i - X) M_i^{-1} (A_i - X)`` with
    ``M_i = (1-t) X + t A_i``, whose rate is ``O(t)`` where the plain map's
    rate tends to 1.  If that iteration leaves the cone or stalls, the plain
    map takes over from the best iterate.
    """
    t = _check_t(t)
    T = as_tuple(T)
    mats, w = T.matrices, T.weights
    if T.n == 1:
        X = mats[0].copy()
        return SolveReport(X, 0, 0.0, 0.0, 0.0, method="single", convention=t == 0.0)
    if t == 0.0:
        X = arithmetic_mean(T)
        return SolveReport(X, 0, 0.0, 0.0, 0.0, method="arithmetic-limit", convention=True)
    if t == 1.0:
        X = harmonic_mean(T)
        return SolveReport(X, 0, 0.0, 0.0, 0.0, method="harmonic", certificate=resolvent_residual(X, 1.0, T))

    X0 = _initial(T, opts)
    plain = lambda X: _g_map(X, t, mats, w)
    method = "plain"
    iterations = 0
    if t <= DEFECT_MAX_T:
        arith = arithmetic_mean(T)
        budget = SolverOptions(opts.tol, min(opts.max_iter, _DEFECT_BUDGET), opts.init)
        try:
            X, iterations, d, steps = _iterate(
                lambda X: _g_defect_map(X, t, mats, w, arith), X0, budget, "G_t defect", guard=True
            )
            method = "defect"
        except _Diverged as exc:
            X0, iterations = exc.args
        except MaxIterExceeded as exc:
            X0, iterations = exc.best, exc.iterations
    if method == "plain":
        left = SolverOptions(opts.tol, max(opts.max_iter - iterations, 1), opts.init)
        X, k, d, steps = _iterate(plain, X0, left, "G_t", floor=roundoff_floor(mats))
        iterations += k
    fp = float(np.linalg.norm(X - plain(X)))
    return SolveReport(
        solution=X,
        iterations=iterations,
        residual=d,
        fixed_point_residual=fp,
        contraction_estimate=_contraction_factor(t, X, mats),
        method=method,
        certificate=resolvent_residual(X, t, T),
    )


def resolvent_residual(X, t, T):
    """``|| sum_i w_i [(1-t) I + t X^{-1/2} A_i X^{-1/2}]^{-1} - I ||_F``.

    Zero exactly at ``X = G_t(w; A)``; independent of how ``X`` was found.
    """
    t = _check_t(t, open_lo=True)
    T = as_tuple(T)
    X = spd(X, "X")
    same_dim(T.matrices[0], X)
    R = invsqrtm(X)
    m = T.dim
    Y = R @ T.matrices @ R
    S = np.einsum("i,ijk->jk", T.weights, np.linalg.inv((1.0 - t) * np.eye(m) + t * Y))
    return float(np.linalg.norm(symmetrize(S) - np.eye(m)))


# --- power mean -------------------------------------------------------------


def _power_map(X, t, mats, w):
    lam, v = np.linalg.eigh(X)
    r = np.sqrt(lam)
    half, ihalf = (v * r) @ v.T, (v / r) @ v.T
    C = ihalf @ mats @ ihalf
    cl, cv = np.linalg.eigh(symmetrize_batch(C))
    Cp = np.einsum("i,ijk->jk", w, (cv * cl[:, None, :] ** t) @ np.swapaxes(cv, 1, 2))
    return symmetrize(half @ symmetrize(Cp) @ half)


def symmetrize_batch(M):
    return 0.5 * (M + np.swapaxes(M, -1, -2))


def power_mean(t, T, opts=DEFAULT_OPTIONS):
    """Matrix power mean ``P_t``, the solution of ``X = sum_i w_i X #_t A_i``.

    Negative orders use ``P_t(w; A) = P_{-t}(w; A^{-1})^{-1}``.  The map is a
    Thompson contraction with factor ``1 - |t|``.
    """
    t = float(t)
    if not (-1.0 <= t <= 1.0) or t == 0.0:
        raise ParameterOutOfRange(f"power mean order must lie in [-1, 1] \\ {{0}}, got {t}")
    T = as_tuple(T)
    if t < 0:
        Ti = T.inverse()
        rep = power_mean(-t, Ti, opts)
        X = invm(rep.solution)
        if T.n > 1:
            rep.fixed_point_residual = float(
                np.linalg.norm(X - invm(_power_map(rep.solution, -t, Ti.matrices, Ti.weights)))
            )
        rep.solution = X
        return rep
    if T.n == 1:
        return SolveReport(T.matrices[0].copy(), 0, 0.0, 0.0, 0.0, method="single")
    mats, w = T.matrices, T.weights
    X, k, d, steps = _iterate(lambda X: _power_map(X, t, mats, w), _initial(T, opts), opts, "P_t",
                              floor=roundoff_floor(mats))
    return SolveReport(
        solution=X,
        iterations=k,
        residual=d,
        fixed_point_residual=float(np.linalg.norm(X - _power_map(X, t, mats, w))),
        contraction_estimate=1.0 - t,
        method="power",
    )


# --- Cartan mean -----------------------------------------------------------


def karcher_residual(X, T):
    """``|| sum_i w_i log(X^{-1/2} A_i X^{-1/2}) ||_F``."""
    T = as_tuple(T)
    return float(np.linalg.norm(_karcher_grad(spd(X), T.matrices, T.weights)))


def _karcher_grad(X, mats, w):
    R = invsqrtm(X)
    C = symmetrize_batch(R @ mats @ R)
    cl, cv = np.linalg.eigh(C)
    L = (cv * np.log(cl)[:, None, :]) @ np.swapaxes(cv, 1, 2)
    return symmetrize(np.einsum("i,ijk->jk", w, L))


def cartan_mean(T, opts=DEFAULT_OPTIONS):
    """Cartan (Karcher) mean, the zero of ``sum_i w_i log(X^{-1/2} A_i X^{-1/2})``.

    Iterates ``X <- X^{1/2} exp(theta S(X)) X^{1/2}`` where ``S`` is the
    Karcher sum; ``theta`` starts at 1 and is halved whenever a step would
    increase the residual.  Converges when the residual is at most
    ``tol * n``.
    """
    T = as_tuple(T)
    mats, w = T.matrices, T.weights
    if T.n == 1:
        return SolveReport(mats[0].copy(), 0, 0.0, 0.0, 0.0, method="single")
    X = _initial(T, opts)
    S = _karcher_grad(X, mats, w)
    res = np.linalg.norm(S)
    target = opts.tol * T.n
    theta = 1.0
    steps = []
    for k in range(1, opts.max_iter + 1):
        if res <= target:
            return SolveReport(
                solution=X,
                iterations=k - 1,
                residual=steps[-1] if steps else 0.0,
                fixed_point_residual=float(res),
                contraction_estimate=_observed_rate(steps),
                method="karcher",
            )
        half = sqrtm(X)
        Y = symmetrize(half @ expm(theta * S) @ half)
        SY = _karcher_grad(Y, mats, w)
        rY = np.linalg.norm(SY)
        if rY > res and theta > 1e-6:
            theta *= 0.5
            continue
        steps.append(_thompson(X, Y))
        X, S, res = Y, SY, rY
    raise MaxIterExceeded(
        f"Cartan mean: no convergence in {opts.max_iter} iterations", best=X, residual=float(res),
        iterations=opts.max_iter,
    )


# --- Wasserstein and Renyi means ------------------------------------------


def _wasserstein_sum(X, mats, w):
    half = sqrtm(X)
    C = symmetrize_batch(half @ mats @ half)
    cl, cv = np.linalg.eigh(C)
    R = (cv * np.sqrt(np.clip(cl, 0.0, None))[:, None, :]) @ np.swapaxes(cv, 1, 2)
    return symmetrize(np.einsum("i,ijk->jk", w, R))


def _wasserstein_map(X, mats, w):
    R = invsqrtm(X)
    S = _wasserstein_sum(X, mats, w)
    return symmetrize(R @ S @ S @ R)


def wasserstein_mean(T, opts=DEFAULT_OPTIONS):
    """Bures-Wasserstein barycenter, solution of ``X = sum_i w_i (X^{1/2} A_i X^{1/2})^{1/2}``.

    Iterates ``X <- X^{-1/2} [sum_i w_i (X^{1/2} A_i X^{1/2})^{1/2}]^2 X^{-1/2}``,
    which has the same fixed point and converges from any SPD start.
    """
    T = as_tuple(T)
    mats, w = T.matrices, T.weights
    if T.n == 1:
        return SolveReport(mats[0].copy(), 0, 0.0, 0.0, 0.0, method="single")
    X, k, d, steps = _iterate(lambda X: _wasserstein_map(X, mats, w), _initial(T, opts), opts, "Wasserstein",
                              floor=roundoff_floor(mats))
    return SolveReport(
        solution=X,
        iterations=k,
        residual=d,
        fixed_point_residual=float(np.linalg.norm(X - _wasserstein_sum(X, mats, w))),
        contraction_estimate=_observed_rate(steps),
        method="wasserstein",
    )


def _renyi_map(X, t, z, outer, w):
    Xp = powm(X, t / z)
    C = symmetrize_batch(outer @ Xp @ outer)
    cl, cv = np.linalg.eigh(C)
    R = (cv * np.clip(cl, 0.0, None)[:, None, :] ** z) @ np.swapaxes(cv, 1, 2)
    return symmetrize(np.einsum("i,ijk->jk", w, R))


def renyi_power_mean(t, z, T, opts=DEFAULT_OPTIONS):
    """Renyi power mean: ``X = sum_j w_j (A_j^{(1-t)/2z} X^{t/z} A_j^{(1-t)/2z})^z``.

    Requires ``0 < t <= z < 1``; the map is a Thompson contraction with factor
    ``t``.
    """
    t, z = float(t), float(z)
    if not (0.0 < t <= z < 1.0):
        raise ParameterOutOfRange(f"Renyi power mean needs 0 < t <= z < 1, got t={t}, z={z}")
    T = as_tuple(T)
    if T.n == 1:
        return SolveReport(T.matrices[0].copy(), 0, 0.0, 0.0, 0.0, method="single")
    outer = np.stack([powm(A, (1.0 - t) / (2.0 * z)) for A in T.matrices])
    w = T.weights
    step = lambda X: _renyi_map(X, t, z, outer, w)
    X, k, d, steps = _iterate(step, _initial(T, opts), opts, "Renyi", floor=roundoff_floor(T.matrices))
    return SolveReport(
        solution=X,
        iterations=k,
        residual=d,
        fixed_point_residual=float(np.linalg.norm(X - step(X))),
        contraction_estimate=t,
        method="renyi",
    )


# --- closed forms and diagnostics -------------------------------------------

PROPORTION_RTOL = 1e-10


def closed_form_two(t, w1, w2, A, B):
    """Explicit ``G_t(w1, w2; A, B)`` when ``(t - w1) A = (w2 - t) B``.

    With ``t`` strictly between ``w1`` and ``w2`` the mean is
    ``sqrt(t (t - w1) / ((1 - t)(w2 - t))) * A``.

    Raises
    ------
    PreconditionViolated
        If the weights, the ordering of ``t`` or the proportionality fail.
    """
    t, w1, w2 = float(t), float(w1), float(w2)
    A, B = spd(A, "A"), spd(B, "B")
    if not (w1 > 0 and w2 > 0 and abs(w1 + w2 - 1.0) <= 1e-12):
        raise PreconditionViolated(f"weights ({w1}, {w2}) are not a positive probability vector")
    if not (0.0 < t < 1.0 and min(w1, w2) < t < max(w1, w2)):
        raise PreconditionViolated(f"t={t} is not strictly between w1={w1} and w2={w2}")
    lhs, rhs = (t - w1) * A, (w2 - t) * B
    scale = max(np.linalg.norm(lhs), np.linalg.norm(rhs))
    if np.linalg.norm(lhs - rhs) > PROPORTION_RTOL * scale:
        raise PreconditionViolated("(t - w1) A = (w2 - t) B does not hold")
    return np.sqrt(t * (t - w1) / ((1.0 - t) * (w2 - t))) * A


def lie_trotter_limit(T, t, p_grid, opts=DEFAULT_OPTIONS):
    """Thompson distance from ``G_t(w; A^p)^{1/p}`` to the log-Euclidean mean.

    Returns a list of ``(p, distance)`` pairs in the order of ``p_grid``.
    """
    T = as_tuple(T)
    target = log_euclidean_mean(T)
    out = []
    for p in p_grid:
        p = float(p)
        if not 0.0 < p <= 1.0:
            raise ParameterOutOfRange(f"p={p} outside (0, 1]")
        G = g_mean(t, T.power(p), opts).solution
        out.append((p, _thompson(powm(G, 1.0 / p), target)))
    return out


def contraction_check(t, T, X, Y):
    """Compare ``d(f(X), f(Y))`` with its proven bound.

    Returns ``(lhs, bound)`` with ``bound = max_i (1-t) a / ((1-t) a + t b_i) * d(X, Y)``,
    ``a = max(lambda_max(X), lambda_max(Y))`` and ``b_i = lambda_min(A_i)``.
    """
    t = _check_t(t, open_lo=True)
    T = as_tuple(T)
    X, Y = spd(X, "X"), spd(Y, "Y")
    fX = _g_map(X, t, T.matrices, T.weights)
    fY = _g_map(Y, t, T.matrices, T.weights)
    lhs = _thompson(fX, fY)
    a = max(np.linalg.eigvalsh(X)[-1], np.linalg.eigvalsh(Y)[-1])
    b = np.array([np.linalg.eigvalsh(A)[0] for A in T.matrices])
    factor = float(np.max((1.0 - t) * a / ((1.0 - t) * a + t * b)))
    return lhs, factor * _thompson(X, Y)


__all__ = [
    "SolverOptions",
    "SolveReport",
    "MatrixTuple",
    "g_mean",
    "g_fixed_point_map",
    "resolvent_residual",
    "power_mean",
    "cartan_mean",
    "karcher_residual",
    "wasserstein_mean",
    "renyi_power_mean",
    "closed_form_two",
    "lie_trotter_limit",
    "contraction_check",
    "roundoff_floor",
]
