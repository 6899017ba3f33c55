"""Deterministic random instances and positive linear maps.

Every generator takes an integer ``seed`` plus optional integer ``keys``.
The stream is Philox (a counter-based generator) keyed by
``numpy.random.SeedSequence(seed, spawn_key=keys)``, so ``(seed, keys)``
names a reproducible, independent substream on every platform.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ParameterOutOfRange, RankDeficient
from .spd_core import spd, symmetrize
from .two_means import MatrixTuple, weight_vector

WEIGHT_FLOOR = 1e-6


def rng(seed, *keys):
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class SpdGenSpec:
    dim: int
    cond_max: float = 100.0
    scale: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.dim < 1:
            raise ParameterOutOfRange(f"dim must be positive, got {self.dim}")
        if not self.cond_max >= 1.0:
            raise ParameterOutOfRange(f"cond_max must be >= 1, got {self.cond_max}")
        if not self.scale > 0.0:
            raise ParameterOutOfRange(f"scale must be positive, got {self.scale}")


def random_spd(spec, *keys):
    """``Q diag(lam) Q^T`` with ``Q`` from the QR factorization of a Gaussian matrix.

    Eigenvalues are log-uniform in ``[scale / cond_max, scale]``.
    """
    g = rng(spec.seed, *keys)
    m = spec.dim
    Q, R = np.linalg.qr(g.standard_normal((m, m)))
    Q = Q * np.sign(np.diag(R))
    lam = spec.scale * np.exp(-np.log(spec.cond_max) * g.random(m))
    return spd((Q * lam) @ Q.T)


def random_weights(n, seed, *keys):
    """Positive weights summing to one (normalized exponentials), floored at 1e-6."""
    if n < 1:
        raise ParameterOutOfRange(f"n must be positive, got {n}")
    w = rng(seed, *keys).exponential(size=n)
    w = w / w.sum()
    w = np.maximum(w, WEIGHT_FLOOR)
    return weight_vector(w)


def random_tuple(seed, *keys, n=None, dim=None, cond_max=1e4, scale=1.0, uniform=False,
                 n_range=(1, 6), dim_range=(1, 8)):
    """A random :class:`MatrixTuple`; ``n`` and ``dim`` are drawn when not given."""
    g = rng(seed, *keys, 0)
    if n is None:
        n = int(g.integers(n_range[0], n_range[1] + 1))
    if dim is None:
        dim = int(g.integers(dim_range[0], dim_range[1] + 1))
    mats = [random_spd(SpdGenSpec(dim, cond_max, scale, seed), *keys, 1, i) for i in range(n)]
    w = None if uniform else random_weights(n, seed, *keys, 2)
    return MatrixTuple(mats, w)


def random_symmetric(dim, seed, *keys):
    G = rng(seed, *keys).standard_normal((dim, dim))
    return symmetrize(G)


def random_invertible(dim, seed, *keys, cond_max=100.0):
    """``U diag(s) V^T`` with singular values log-uniform in ``[1/sqrt(c), sqrt(c)]``."""
    g = rng(seed, *keys)
    U, _ = np.linalg.qr(g.standard_normal((dim, dim)))
    V, _ = np.linalg.qr(g.standard_normal((dim, dim)))
    s = np.exp(np.log(cond_max) * (g.random(dim) - 0.5))
    return (U * s) @ V.T


def random_psd(dim, seed, *keys, rank=None, scale=1.0):
    g = rng(seed, *keys)
    k = dim if rank is None else rank
    G = g.standard_normal((dim, k))
    return symmetrize(scale * G @ G.T / max(k, 1))


# --- positive linear maps ---------------------------------------------------


@dataclass(frozen=True)
class Compression:
    """``A -> V^T A V`` for a full column rank ``V`` of shape (m, k)."""

    V: np.ndarray

    def __post_init__(self):
        V = np.asarray(self.V, dtype=float)
        if V.ndim != 2 or V.shape[1] > V.shape[0]:
            raise DimensionMismatch(f"compression needs an (m, k) matrix with k <= m, got {V.shape}")
        if np.linalg.matrix_rank(V) < V.shape[1]:
            raise RankDeficient("compression matrix must have full column rank")
        object.__setattr__(self, "V", V)


@dataclass(frozen=True)
class Pinching:
    """Zero every off-diagonal block of a partition of ``{0, ..., m-1}``."""

    blocks: tuple

    def __post_init__(self):
        blocks = tuple(tuple(int(i) for i in b) for b in self.blocks)
        flat = sorted(i for b in blocks for i in b)
        if any(len(b) == 0 for b in blocks) or flat != list(range(len(flat))):
            raise ParameterOutOfRange(f"blocks {blocks} do not partition 0..{len(flat) - 1}")
        object.__setattr__(self, "blocks", blocks)


@dataclass(frozen=True)
class TraceScale:
    """``A -> (c tr(A) / m) I``."""

    c: float = 1.0

    def __post_init__(self):
        if not self.c > 0:
            raise ParameterOutOfRange(f"trace scale must be positive, got {self.c}")


PositiveMapSpec = Compression | Pinching | TraceScale


def apply_positive_map(spec, A):
    A = np.asarray(A, dtype=float)
    m = A.shape[0]
    if isinstance(spec, Compression):
        if spec.V.shape[0] != m:
            raise DimensionMismatch(f"compression expects dimension {spec.V.shape[0]}, got {m}")
        return symmetrize(spec.V.T @ A @ spec.V)
    if isinstance(spec, Pinching):
        if sum(len(b) for b in spec.blocks) != m:
            raise DimensionMismatch(f"pinching partition does not cover dimension {m}")
        out = np.zeros_like(A)
        for b in spec.blocks:
            idx = np.ix_(b, b)
            out[idx] = A[idx]
        return out
    if isinstance(spec, TraceScale):
        return spec.c * np.trace(A) / m * np.eye(m)
    raise TypeError(f"not a positive map spec: {spec!r}")


def random_positive_map(dim, seed, *keys):
    """One of the three map kinds, chosen and parametrized by the seed."""
    g = rng(seed, *keys)
    kind = int(g.integers(3))
    if kind == 0:
        k = int(g.integers(1, dim + 1))
        return Compression(g.standard_normal((dim, k)))
    if kind == 1:
        perm = g.permutation(dim)
        cuts = sorted(set(int(c) for c in g.integers(1, dim, size=int(g.integers(0, dim)))) if dim > 1 else [])
        return Pinching(tuple(tuple(p) for p in np.split(perm, cuts)))
    return TraceScale(float(np.exp(g.normal())))


# --- scalar oracles -----------------------------------------------------------


def bisect_increasing(h, lo, hi, max_iter=2000):
    """Root of an increasing scalar function on ``[lo, hi]`` by bisection to full precision."""
    if h(lo) >= 0:
        return lo
    if h(hi) <= 0:
        return hi
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if h(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def scalar_g_oracle(t, a, w):
    """Positive root of ``1/x = sum_i w_i / ((1-t) x + t a_i)`` by bisection.

    ``x * sum_i w_i / ((1-t) x + t a_i)`` increases in ``x`` and the root lies
    between ``min a`` and ``max a``.
    """
    a = np.asarray(a, dtype=float)
    w = np.asarray(w, dtype=float)
    if a.min() == a.max():
        return float(a[0])
    h = lambda x: float(np.sum(w * x / ((1.0 - t) * x + t * a))) - 1.0
    return bisect_increasing(h, float(a.min()), float(a.max()))
