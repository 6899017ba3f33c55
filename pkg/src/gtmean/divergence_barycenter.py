"""Right mean of the log-determinant alpha-divergence.

The minimizer of ``phi(X) = sum_i D_alpha(A_i | X)`` solves
``sum_i (a A_i + b X)^{-1} = n X^{-1}`` with ``a = (1-alpha)/2``, ``b = 1 - a``,
which is the G_t equation at ``t = a`` with uniform weights.  The solve is
delegated to :func:`gtmean.fixed_point_means.g_mean`; the gradient serves as
an independent certificate.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ParameterOutOfRange
from .fixed_point_means import DEFAULT_OPTIONS, g_mean
from .metrics import _logdet_div, check_alpha
from .spd_core import same_dim, spd, symmetrize
from .two_means import MatrixTuple


@dataclass(frozen=True)
class BarycenterProblem:
    alpha: float
    matrices: tuple

    def __post_init__(self):
        alpha = check_alpha(self.alpha)
        if abs(alpha) >= 1.0:
            raise ParameterOutOfRange(f"right mean needs |alpha| < 1, got {alpha}")
        mats = [spd(A, f"matrix {i}") for i, A in enumerate(self.matrices)]
        if not mats:
            raise DimensionMismatch("a barycenter problem needs at least one matrix")
        same_dim(*mats)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "matrices", tuple(mats))

    @property
    def n(self):
        return len(self.matrices)

    @property
    def t(self):
        return 0.5 * (1.0 - self.alpha)

    def as_tuple(self):
        return MatrixTuple(self.matrices)


def _check_x(P, X):
    X = spd(X, "X")
    same_dim(P.matrices[0], X)
    return X


def phi_value(P, X):
    """``sum_i D_alpha(A_i | X)``."""
    X = _check_x(P, X)
    return float(sum(_logdet_div(P.alpha, A, X) for A in P.matrices))


def phi_gradient(P, X):
    """``2/(1-alpha) [sum_i (a A_i + b X)^{-1} - n X^{-1}]``."""
    X = _check_x(P, X)
    a, b = 0.5 * (1.0 - P.alpha), 0.5 * (1.0 + P.alpha)
    mats = np.stack(P.matrices)
    S = np.sum(np.linalg.inv(a * mats + b * X), axis=0)
    return symmetrize(2.0 / (1.0 - P.alpha) * (S - P.n * np.linalg.inv(X)))


def right_mean(P, opts=DEFAULT_OPTIONS):
    """Minimizer of ``phi``: ``g_mean`` at ``t = (1 - alpha)/2`` with uniform weights.

    The gradient Frobenius norm at the solution is stored in
    ``report.extra["gradient_norm"]``.
    """
    rep = g_mean(P.t, P.as_tuple(), opts)
    rep.extra["gradient_norm"] = float(np.linalg.norm(phi_gradient(P, rep.solution)))
    return rep
