"""Distances and divergences on the SPD cone."""

from dataclasses import dataclass

import numpy as np

from .errors import NegativeDivergence, NegativeTrace, ParameterOutOfRange, StepTooLarge
from .spd_core import is_spd, logdet, relative_eigvals, same_dim, spd, sqrtm, symmetrize

NEG_TRACE_TOL = 1e-10
NEG_DIV_TOL = 1e-12


def _pair(A, B):
    A, B = spd(A, "A"), spd(B, "B")
    same_dim(A, B)
    return A, B


def thompson(A, B):
    """Thompson metric ``max |log lambda(A^{-1/2} B A^{-1/2})|``."""
    A, B = _pair(A, B)
    return _thompson(A, B)


def _thompson(A, B):
    if np.array_equal(A, B):
        return 0.0
    lam = relative_eigvals(A, B)
    return float(max(np.log(lam[-1]), -np.log(lam[0]), 0.0))


def riemannian(A, B):
    """Riemannian trace distance ``||log(A^{-1/2} B A^{-1/2})||_F``."""
    A, B = _pair(A, B)
    if np.array_equal(A, B):
        return 0.0
    return float(np.sqrt(np.sum(np.log(relative_eigvals(A, B)) ** 2)))


def bures_wasserstein(A, B):
    """``[tr(A + B - 2 (A^{1/2} B A^{1/2})^{1/2})]^{1/2}``.

    Raises
    ------
    NegativeTrace
        When the trace argument is below ``-1e-10``.
    """
    A, B = _pair(A, B)
    if np.array_equal(A, B):
        return 0.0
    ra = sqrtm(A)
    cross = np.sum(np.sqrt(np.clip(np.linalg.eigvalsh(symmetrize(ra @ B @ ra)), 0.0, None)))
    val = np.trace(A) + np.trace(B) - 2.0 * cross
    if val < -NEG_TRACE_TOL:
        raise NegativeTrace(f"Bures-Wasserstein trace argument {val:.3e} < 0")
    return float(np.sqrt(max(val, 0.0)))


def check_alpha(alpha):
    alpha = float(alpha)
    if not -1.0 <= alpha <= 1.0:
        raise ParameterOutOfRange(f"alpha must lie in [-1, 1], got {alpha}")
    return alpha


def _logdet_terms(lam, alpha):
    """Per-eigenvalue terms of the log-determinant divergence, each >= 0.

    With ``a = (1-alpha)/2``, ``b = (1+alpha)/2`` and ``lam`` the spectrum of
    ``A^{-1/2} B A^{-1/2}`` one term is ``(log(a + b lam) - b log lam) / (a b)``.
    The form is chosen so the smaller weight multiplies the logarithm.
    """
    a, b = 0.5 * (1.0 - alpha), 0.5 * (1.0 + alpha)
    if b <= a:
        if b == 0.0:
            return lam - 1.0 - np.log(lam)
        return (np.log1p(b * (lam - 1.0)) - b * np.log(lam)) / (a * b)
    if a == 0.0:
        return 1.0 / lam - 1.0 + np.log(lam)
    return (np.log1p(a * (1.0 / lam - 1.0)) + a * np.log(lam)) / (a * b)


def logdet_div(alpha, A, B):
    """Log-determinant alpha-divergence ``D_alpha(A | B)``.

    For ``|alpha| < 1``::

        4/(1 - alpha^2) * log det(a A + b B) / (det A^a det B^b)

    with ``a = (1 - alpha)/2`` and ``b = (1 + alpha)/2``.  At ``alpha = -1``
    and ``alpha = 1`` the Stein-loss limits ``tr(A^{-1}B - I) - log det(A^{-1}B)``
    and ``tr(B^{-1}A - I) - log det(B^{-1}A)`` are returned.

    Values in ``[-1e-12, 0)`` are clamped to zero.

    Raises
    ------
    NegativeDivergence
        If round-off cannot explain a negative value.
    """
    alpha = check_alpha(alpha)
    A, B = _pair(A, B)
    return _logdet_div(alpha, A, B)


def _logdet_div(alpha, A, B):
    if np.array_equal(A, B):
        return 0.0
    val = float(np.sum(_logdet_terms(relative_eigvals(A, B), alpha)))
    if val < 0.0:
        if val < -NEG_DIV_TOL:
            raise NegativeDivergence(f"divergence {val:.3e} < 0")
        val = 0.0
    return val


def logdet_div_direct(alpha, A, B):
    """Determinant-formula evaluation of ``D_alpha`` through Cholesky log-dets.

    An independent route used to cross-check :func:`logdet_div`; loses
    accuracy as ``|alpha| -> 1``.
    """
    alpha = check_alpha(alpha)
    A, B = _pair(A, B)
    m = A.shape[0]
    if alpha == -1.0:
        return float(np.trace(np.linalg.solve(A, B)) - m - logdet(B) + logdet(A))
    if alpha == 1.0:
        return float(np.trace(np.linalg.solve(B, A)) - m - logdet(A) + logdet(B))
    a, b = 0.5 * (1.0 - alpha), 0.5 * (1.0 + alpha)
    return float(4.0 / (1.0 - alpha**2) * (logdet(a * A + b * B) - a * logdet(A) - b * logdet(B)))


def stein_metric(A, B):
    """``d_S(A, B) = sqrt(D_0(A | B))``."""
    return float(np.sqrt(logdet_div(0.0, A, B)))


@dataclass(frozen=True)
class QDivResult:
    first: float
    second: float
    analytic_second: float
    first_ok: bool
    second_ok: bool

    @property
    def passed(self):
        return self.first_ok and self.second_ok


FIRST_RTOL = 1e-6
SECOND_ATOL = 1e-8


def qdiv_check(alpha, A, directions, h=None):
    """Finite-difference check of the quantum-divergence conditions at ``B = A``.

    For each symmetric direction ``X`` the map ``s -> D_alpha(A | A + s X)``
    is differenced centrally with step ``h`` (default
    ``1e-4 * (1 + ||A||_F)``).  The first difference should vanish and the
    second should be nonnegative; the analytic second derivative
    ``tr((A^{-1} X)^2)`` is reported alongside.

    Returns
    -------
    list of QDivResult

    Raises
    ------
    StepTooLarge
        If ``A +/- h X`` leaves the SPD cone.
    """
    alpha = check_alpha(alpha)
    A = spd(A, "A")
    if h is None:
        h = 1e-4 * (1.0 + np.linalg.norm(A))
    if h <= 0:
        raise ParameterOutOfRange("step h must be positive")
    out = []
    for X in directions:
        X = symmetrize(np.asarray(X, dtype=float))
        same_dim(A, X)
        plus, minus = A + h * X, A - h * X
        if not (is_spd(plus) and is_spd(minus)):
            raise StepTooLarge(f"A +/- {h:g} X leaves the SPD cone")
        fp = _logdet_div(alpha, A, symmetrize(plus))
        fm = _logdet_div(alpha, A, symmetrize(minus))
        first = (fp - fm) / (2.0 * h)
        second = (fp + fm) / h**2
        AX = np.linalg.solve(A, X)
        analytic = float(np.trace(AX @ AX))
        out.append(
            QDivResult(
                first=first,
                second=second,
                analytic_second=analytic,
                first_ok=abs(first) <= FIRST_RTOL * (1.0 + abs(second)),
                second_ok=second >= -SECOND_ATOL,
            )
        )
    return out
