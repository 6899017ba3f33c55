"""Symmetric positive definite linear algebra.

Matrices are plain ``numpy.ndarray`` objects of shape ``(m, m)``.  The
:func:`spd` constructor is the single validation point: it symmetrizes its
input and rejects anything that fails a Cholesky factorization.  Every other
function here is pure and never mutates its arguments.
"""

from typing import NamedTuple

import numpy as np
from scipy.linalg import solve_triangular

from .errors import (
    DimensionMismatch,
    IllConditioned,
    NotPositiveDefinite,
    SingularTransform,
)

CHOL_PIVOT_RTOL = 1e-13
JACOBI_RTOL = 1e-14
JACOBI_MAX_SWEEPS = 100
SINGULAR_RTOL = 1e-14


class EigDecomposition(NamedTuple):
    eigenvalues: np.ndarray
    basis: np.ndarray


def symmetrize(M):
    """Return ``(M + M.T) / 2``."""
    return 0.5 * (M + M.T)


def _square(M, name="matrix"):
    M = np.asarray(M, dtype=float)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise DimensionMismatch(f"{name} must be a non-empty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NotPositiveDefinite(f"{name} has non-finite entries")
    return M


def spd(M, name="matrix"):
    """Validate ``M`` as symmetric positive definite.

    The input is symmetrized first, then Cholesky-factorized; a pivot
    ``L[i, i]**2`` below ``1e-13 * max(diag)`` counts as a failure.

    Returns
    -------
    ndarray, shape (m, m)
        Exactly symmetric copy of ``M``.

    Raises
    ------
    NotPositiveDefinite
        If the factorization fails.
    """
    S = symmetrize(_square(M, name))
    try:
        L = np.linalg.cholesky(S)
    except np.linalg.LinAlgError:
        raise NotPositiveDefinite(f"{name} is not positive definite") from None
    floor = CHOL_PIVOT_RTOL * np.max(np.diag(S))
    if np.min(np.diag(L)) ** 2 <= floor:
        raise NotPositiveDefinite(f"{name} is numerically singular")
    return S


def is_spd(M):
    try:
        spd(M)
    except (NotPositiveDefinite, DimensionMismatch):
        return False
    return True


def same_dim(*mats):
    m = mats[0].shape[0]
    for X in mats[1:]:
        if X.shape != (m, m):
            raise DimensionMismatch(f"dimension mismatch: {mats[0].shape} vs {X.shape}")
    return m


def jacobi_eig(A, rtol=JACOBI_RTOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Cyclic Jacobi eigendecomposition of a symmetric matrix.

    Sweeps over the strict upper triangle until the off-diagonal Frobenius
    norm drops below ``rtol * ||A||_F``.

    Returns
    -------
    EigDecomposition
        Eigenvalues in descending order and the matching orthogonal basis.

    Raises
    ------
    IllConditioned
        If ``max_sweeps`` sweeps do not reach the threshold.
    """
    a = symmetrize(_square(A)).copy()
    m = a.shape[0]
    v = np.eye(m)
    threshold = rtol * np.linalg.norm(a)

    upper = np.triu_indices(m, 1)

    def off(x):
        return np.sqrt(2.0) * np.linalg.norm(x[upper])

    sweeps = 0
    while off(a) > threshold:
        if sweeps == max_sweeps:
            raise IllConditioned(f"Jacobi did not converge in {max_sweeps} sweeps")
        sweeps += 1
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.copysign(1.0, theta) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap, aq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    w = np.diag(a).copy()
    order = np.argsort(w)[::-1]
    return EigDecomposition(w[order], v[:, order])


def sym_eig(A, method="lapack"):
    """Eigendecomposition of a symmetric matrix, eigenvalues descending.

    ``method="jacobi"`` uses :func:`jacobi_eig`; the default delegates to
    LAPACK through ``numpy.linalg.eigh``.
    """
    if method == "jacobi":
        return jacobi_eig(A)
    if method != "lapack":
        raise ValueError(f"unknown eigen method {method!r}")
    w, v = np.linalg.eigh(symmetrize(_square(A)))
    return EigDecomposition(w[::-1].copy(), v[:, ::-1].copy())


_SCALAR_FNS = {
    "log": np.log,
    "exp": np.exp,
    "sqrt": np.sqrt,
    "inverse": lambda x: 1.0 / x,
    "invsqrt": lambda x: 1.0 / np.sqrt(x),
}


def _apply(A, fn):
    w, v = np.linalg.eigh(A)
    return symmetrize((v * fn(w)) @ v.T)


def _apply_spd(A, fn):
    w, v = np.linalg.eigh(A)
    if w[0] <= 0.0:
        raise NotPositiveDefinite("matrix function needs a positive definite argument")
    return symmetrize((v * fn(w)) @ v.T)


def mat_fn(A, f, p=None, method="lapack"):
    """Apply a scalar function to a symmetric matrix through its spectrum.

    Parameters
    ----------
    A : array_like, shape (m, m)
        Positive definite, except for ``f="exp"`` which accepts any symmetric
        matrix.
    f : {"power", "log", "exp", "sqrt", "inverse", "invsqrt"}
    p : float, optional
        Exponent, required when ``f="power"``.
    method : {"lapack", "jacobi"}
    """
    A = symmetrize(_square(A))
    if f == "power":
        if p is None:
            raise ValueError("power needs an exponent p")
        fn = lambda x: x ** p
    elif f in _SCALAR_FNS:
        fn = _SCALAR_FNS[f]
    else:
        raise ValueError(f"unknown matrix function {f!r}")
    w, v = sym_eig(A, method=method)
    if f != "exp" and w[-1] <= 0.0:
        raise NotPositiveDefinite("matrix function needs a positive definite argument")
    return symmetrize((v * fn(w)) @ v.T)


def powm(A, p):
    return _apply_spd(A, lambda x: x ** p)


def logm(A):
    return _apply_spd(A, np.log)


def expm(H):
    return _apply(H, np.exp)


def sqrtm(A):
    return _apply_spd(A, np.sqrt)


def invsqrtm(A):
    return _apply_spd(A, lambda x: 1.0 / np.sqrt(x))


def invm(A):
    return _apply_spd(A, lambda x: 1.0 / x)


def logdet(A):
    """``log det A`` as twice the sum of log Cholesky pivots."""
    try:
        L = np.linalg.cholesky(A)
    except np.linalg.LinAlgError:
        raise NotPositiveDefinite("log det needs a positive definite argument") from None
    return 2.0 * np.sum(np.log(np.diag(L)))


def whiten(A, B):
    """Return ``L^{-1} B L^{-T}`` with ``A = L L^T``.

    It is congruent to ``A^{-1/2} B A^{-1/2}`` by an orthogonal matrix, so it
    has the same spectrum.
    """
    L = np.linalg.cholesky(A)
    Y = solve_triangular(L, B, lower=True)
    return symmetrize(solve_triangular(L, Y.T, lower=True))


def relative_eigvals(A, B):
    """Ascending eigenvalues of ``A^{-1/2} B A^{-1/2}``."""
    return np.linalg.eigvalsh(whiten(A, B))


def _check_invertible(S):
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise DimensionMismatch(f"transform must be square, got shape {S.shape}")
    # Hadamard's bound makes the determinant test scale-free.
    bound = np.prod(np.linalg.norm(S, axis=0))
    if bound == 0.0 or abs(np.linalg.det(S)) <= SINGULAR_RTOL * bound:
        raise SingularTransform("transform is singular")
    return S


def congruence(S, A):
    """Return ``S A S^T`` for invertible ``S``."""
    S = _check_invertible(S)
    A = spd(A)
    same_dim(A, S)
    return spd(S @ A @ S.T, "congruence result")


def loewner_leq(A, B, tol=0.0):
    """Decide ``A <= B`` in the Loewner order, up to ``tol`` on eigenvalues."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    same_dim(A, B)
    return bool(np.linalg.eigvalsh(symmetrize(B - A))[0] >= -tol)


def loewner_gap(A, B):
    """Largest violation of ``A <= B``: ``max(0, -lambda_min(B - A))``."""
    return max(0.0, -float(np.linalg.eigvalsh(symmetrize(np.asarray(B) - np.asarray(A)))[0]))
