import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gtmean import testkit as tk
from gtmean.errors import DimensionMismatch, ParameterOutOfRange
from gtmean.metrics import thompson
from gtmean.spd_core import invm, loewner_leq, sqrtm
from gtmean.two_means import (
    MatrixTuple,
    arithmetic_mean,
    geo_mean,
    harmonic_mean,
    log_euclidean_mean,
    weight_vector,
)

from conftest import spd_matrices, spd_tuples
from oracles import geo, log_euclidean

GEO_03 = np.array(
    [
        [3.18123418941634, 0.5553001734474771, 0.0948527587507259],
        [0.5553001734474771, 2.130760456934553, 0.620591052553738],
        [0.0948527587507259, 0.620591052553738, 2.1577394071415728],
    ]
)


def test_weight_vector():
    assert np.allclose(weight_vector([1, 3]), [0.25, 0.75])
    for bad in ([], [1, 0], [1, -1], [np.nan]):
        with pytest.raises(ParameterOutOfRange):
            weight_vector(bad)


def test_matrix_tuple_validation_and_helpers():
    T = MatrixTuple([np.eye(2), 2 * np.eye(2)], [1, 3])
    assert T.n == len(T) == 2 and T.dim == 2
    assert not T.matrices.flags.writeable
    assert np.allclose(T.inverse().matrices[1], 0.5 * np.eye(2))
    assert np.allclose(T.power(2).matrices[1], 4 * np.eye(2))
    assert np.allclose(T.scaled(3).matrices[0], 3 * np.eye(2))
    assert np.allclose(T.permuted([1, 0]).weights, [0.75, 0.25])
    assert np.allclose(T.uniform().weights, [0.5, 0.5])
    with pytest.raises(DimensionMismatch):
        MatrixTuple([np.eye(2), np.eye(3)])
    with pytest.raises(DimensionMismatch):
        MatrixTuple([np.eye(2)], [0.5, 0.5])
    with pytest.raises(DimensionMismatch):
        MatrixTuple([])


def test_geo_mean_examples(fixed_triple):
    B = np.array([[2.0, 0.5], [0.5, 1.0]])
    assert np.allclose(geo_mean(np.eye(2), B, 0.0), np.eye(2))
    assert np.allclose(geo_mean(np.eye(2), B, 0.5), sqrtm(B))
    assert np.allclose(geo_mean(np.diag([1.0, 4.0]), np.diag([4.0, 1.0])), 2 * np.eye(2))
    (A, B, _), _ = fixed_triple
    assert np.allclose(geo_mean(A, B, 0.3), GEO_03, atol=1e-12)
    with pytest.raises(DimensionMismatch):
        geo_mean(np.eye(2), np.eye(3))


@pytest.mark.parametrize("seed", range(8))
def test_geo_mean_against_oracle(seed):
    A = tk.random_spd(tk.SpdGenSpec(4, 1e3, 1.0, seed))
    B = tk.random_spd(tk.SpdGenSpec(4, 1e3, 1.0, seed), 1)
    t = tk.rng(seed, 2).random()
    assert np.allclose(geo_mean(A, B, t), geo(A, B, t), rtol=1e-8, atol=1e-10)


def test_arithmetic_harmonic_examples():
    A = np.array([[2.0, 0.5], [0.5, 1.0]])
    T = MatrixTuple([A, A, A], [0.2, 0.3, 0.5])
    assert np.allclose(arithmetic_mean(T), A) and np.allclose(harmonic_mean(T), A)
    S = MatrixTuple([[[1.0]], [[4.0]]])
    assert arithmetic_mean(S)[0, 0] == pytest.approx(2.5)
    assert harmonic_mean(S)[0, 0] == pytest.approx(1.6)
    W = MatrixTuple([np.diag([4.0]), np.diag([8 / 3])], [0.25, 0.75])
    assert arithmetic_mean(W)[0, 0] == pytest.approx(3.0)
    D = MatrixTuple([np.diag([1.0, 4.0]), np.diag([4.0, 1.0])])
    assert np.allclose(harmonic_mean(D), 1.6 * np.eye(2))


@given(st.integers(1, 5).flatmap(lambda m: st.tuples(spd_matrices(dim=m), spd_matrices(dim=m))))
def test_riccati_characterization(pair):
    A, B = pair
    X = geo_mean(A, B)
    assert np.linalg.norm(X @ np.linalg.solve(A, X) - B) <= 1e-9 * np.linalg.norm(B) * np.linalg.cond(A)


@pytest.mark.parametrize("seed", range(10))
def test_self_duality_and_norm_bound(seed):
    A = tk.random_spd(tk.SpdGenSpec(5, 1e3, 1.0, seed))
    B = tk.random_spd(tk.SpdGenSpec(5, 1e3, 1.0, seed), 1)
    t = tk.rng(seed, 2).random()
    assert thompson(invm(geo_mean(A, B, t)), geo_mean(invm(A), invm(B), t)) <= 1e-9
    nrm = lambda M: np.linalg.norm(M, 2)
    assert nrm(geo_mean(A, B, t)) <= nrm(A) ** (1 - t) * nrm(B) ** t + 1e-10


@given(spd_tuples())
def test_harmonic_below_arithmetic(tw):
    mats, w = tw
    T = MatrixTuple(mats, w)
    assert loewner_leq(harmonic_mean(T), arithmetic_mean(T), 1e-10 * np.linalg.norm(arithmetic_mean(T)))


@pytest.mark.parametrize("seed", range(5))
def test_log_euclidean_against_oracle(seed):
    T = tk.random_tuple(seed, n=3, dim=4, cond_max=1e2)
    assert np.allclose(log_euclidean_mean(T), log_euclidean(T.matrices, T.weights), rtol=1e-9)
