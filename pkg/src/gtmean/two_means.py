"""Weighted tuples of SPD matrices and the elementary means built on them."""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ParameterOutOfRange
from .spd_core import _square, expm, invm, logm, powm, same_dim, spd, symmetrize

WEIGHT_SUM_TOL = 1e-14


def weight_vector(weights):
    """Validate positive weights and renormalize them to sum to one."""
    w = np.atleast_1d(np.asarray(weights, dtype=float))
    if w.ndim != 1 or w.size == 0:
        raise ParameterOutOfRange("weights must be a non-empty vector")
    if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
        raise ParameterOutOfRange(f"weights must be strictly positive, got {w}")
    w = w / w.sum()
    if abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
        w = w / w.sum()
    return w


@dataclass(frozen=True)
class MatrixTuple:
    """An ordered tuple of SPD matrices of one dimension with positive weights.

    ``matrices`` is stored stacked, shape ``(n, m, m)``.  Weights default to
    uniform.
    """

    matrices: np.ndarray
    weights: np.ndarray = None

    def __post_init__(self):
        mats = [spd(A, f"matrix {i}") for i, A in enumerate(self.matrices)]
        if not mats:
            raise DimensionMismatch("a matrix tuple needs at least one matrix")
        same_dim(*mats)
        stacked = np.stack(mats)
        w = np.full(len(mats), 1.0 / len(mats)) if self.weights is None else weight_vector(self.weights)
        if w.size != len(mats):
            raise DimensionMismatch(f"{w.size} weights for {len(mats)} matrices")
        stacked.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "matrices", stacked)
        object.__setattr__(self, "weights", w)

    @property
    def n(self):
        return self.matrices.shape[0]

    @property
    def dim(self):
        return self.matrices.shape[1]

    def __len__(self):
        return self.n

    def __iter__(self):
        return iter(self.matrices)

    def map(self, fn):
        return MatrixTuple([fn(A) for A in self.matrices], self.weights)

    def inverse(self):
        return self.map(invm)

    def power(self, p):
        return self.map(lambda A: powm(A, p))

    def scaled(self, c):
        return MatrixTuple(c * self.matrices, self.weights)

    def congruence(self, S):
        S = np.asarray(S, dtype=float)
        return self.map(lambda A: S @ A @ S.T)

    def permuted(self, perm):
        perm = list(perm)
        return MatrixTuple(self.matrices[perm], self.weights[perm])

    def uniform(self):
        return MatrixTuple(self.matrices)


def geo_mean(A, B, t=0.5):
    """Weighted geometric mean ``A #_t B = A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2}``.

    The point at parameter ``t`` on the geodesic from ``A`` (t=0) to ``B``
    (t=1).
    """
    A, B = spd(A), spd(B)
    same_dim(A, B)
    return _geo(A, B, t)


def _geo(A, B, t):
    w, v = np.linalg.eigh(A)
    r = np.sqrt(w)
    half = (v * r) @ v.T
    ihalf = (v / r) @ v.T
    C = symmetrize(ihalf @ B @ ihalf)
    return symmetrize(half @ powm(C, t) @ half)


def arithmetic_mean(T):
    """``sum_i w_i A_i``."""
    return symmetrize(np.einsum("i,ijk->jk", T.weights, T.matrices))


def harmonic_mean(T):
    """``[sum_i w_i A_i^{-1}]^{-1}``."""
    inv = np.linalg.inv(T.matrices)
    return invm(symmetrize(np.einsum("i,ijk->jk", T.weights, inv)))


def log_euclidean_mean(T):
    """``exp(sum_i w_i log A_i)``."""
    return expm(sum(w * logm(A) for w, A in zip(T.weights, T.matrices)))


def as_tuple(matrices, weights=None):
    if isinstance(matrices, MatrixTuple):
        return matrices if weights is None else MatrixTuple(matrices.matrices, weights)
    return MatrixTuple([_square(A) for A in matrices], weights)
