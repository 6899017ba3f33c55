import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gtmean import testkit as tk
from gtmean.divergence_barycenter import BarycenterProblem, phi_gradient, phi_value, right_mean
from gtmean.errors import DimensionMismatch, ParameterOutOfRange
from gtmean.fixed_point_means import SolverOptions, g_mean, resolvent_residual
from gtmean.metrics import thompson

WORKED_G = np.array([[1.96124391, -0.53074303], [-0.53074303, 1.96124391]])
SCALAR = ([[1.0]], [[4.0]])
# D_0(1|2) + D_0(4|2), both equal to 4 log(1.5 / sqrt 2)
PHI_AT_TWO = 0.4711321426255331


def test_problem_validation():
    with pytest.raises(ParameterOutOfRange):
        BarycenterProblem(1.0, SCALAR)
    with pytest.raises(ParameterOutOfRange):
        BarycenterProblem(-1.2, SCALAR)
    with pytest.raises(DimensionMismatch):
        BarycenterProblem(0.0, ())
    with pytest.raises(DimensionMismatch):
        BarycenterProblem(0.0, (np.eye(2), np.eye(3)))
    P = BarycenterProblem(0.4, SCALAR)
    assert P.n == 2 and P.t == pytest.approx(0.3)


def test_gradient_examples():
    A = np.array([[2.0, 0.3], [0.3, 1.0]])
    assert np.allclose(phi_gradient(BarycenterProblem(0.3, (A, A, A)), A), 0, atol=1e-12)
    P = BarycenterProblem(0.0, SCALAR)
    assert abs(phi_gradient(P, [[2.0]])[0, 0]) <= 1e-12
    assert phi_gradient(P, [[1.0]])[0, 0] == pytest.approx(-1.2, rel=1e-14)
    with pytest.raises(DimensionMismatch):
        phi_gradient(P, np.eye(2))


def test_phi_value_examples():
    A = np.array([[2.0, 0.3], [0.3, 1.0]])
    assert phi_value(BarycenterProblem(-0.5, (A, A)), A) == 0.0
    P = BarycenterProblem(0.0, SCALAR)
    assert phi_value(P, [[2.0]]) == pytest.approx(PHI_AT_TWO, rel=1e-13)
    assert phi_value(P, [[1.0]]) == pytest.approx(4 * np.log(1.25), rel=1e-13)
    assert phi_value(P, [[1.0]]) > phi_value(P, [[2.0]])


def test_right_mean_examples(worked_triple):
    A = np.array([[2.0, 0.3], [0.3, 1.0]])
    assert np.allclose(right_mean(BarycenterProblem(0.7, (A, A))).solution, A)
    assert right_mean(BarycenterProblem(0.0, SCALAR)).solution[0, 0] == pytest.approx(2.0, rel=1e-12)
    rep = right_mean(BarycenterProblem(0.0, tuple(worked_triple)))
    assert np.max(np.abs(rep.solution - WORKED_G)) <= 1e-6
    assert rep.extra["gradient_norm"] <= 1e-8 * 3


@pytest.mark.parametrize("alpha", [-0.9, -0.5, 0.0, 0.5, 0.9])
@pytest.mark.parametrize("seed", range(4))
def test_right_mean_certificates(alpha, seed):
    T = tk.random_tuple(seed, 20, n=4, dim=4, cond_max=1e2, uniform=True)
    P = BarycenterProblem(alpha, tuple(T.matrices))
    rep = right_mean(P)
    X = rep.solution
    assert np.linalg.norm(phi_gradient(P, X)) <= 1e-8 * P.n
    assert np.array_equal(X, g_mean(P.t, P.as_tuple()).solution)
    assert resolvent_residual(X, P.t, P.as_tuple()) <= 1e-8
    f0 = phi_value(P, X)
    h = 1e-3 * np.linalg.norm(X, 2)
    for k in range(20):
        D = tk.random_symmetric(4, seed, 21, k)
        D *= np.linalg.eigvalsh(X)[0] / np.linalg.norm(X, 2) / np.linalg.norm(D, 2)
        assert f0 <= phi_value(P, X + h * D) + 1e-12


@given(st.floats(-0.95, 0.95), st.integers(0, 2**32 - 1))
def test_gradient_matches_central_differences(alpha, seed):
    T = tk.random_tuple(seed, 22, n=3, dim=3, cond_max=1e2, uniform=True)
    P = BarycenterProblem(alpha, tuple(T.matrices))
    X = tk.random_spd(tk.SpdGenSpec(3, 1e2, 1.0, seed), 23)
    D = tk.random_symmetric(3, seed, 24)
    h = 1e-5 * np.linalg.eigvalsh(X)[0] / np.linalg.norm(D, 2)
    fd = (phi_value(P, X + h * D) - phi_value(P, X - h * D)) / (2 * h)
    an = float(np.sum(phi_gradient(P, X) * D))
    assert abs(fd - an) <= 1e-5 * max(1.0, abs(an))


def test_multi_start_agreement():
    T = tk.random_tuple(5, 25, n=3, dim=4, cond_max=1e2, uniform=True)
    P = BarycenterProblem(-0.3, tuple(T.matrices))
    X = right_mean(P).solution
    for k in range(5):
        X0 = tk.random_spd(tk.SpdGenSpec(4, 1e2, 1.0, 5), 26, k)
        assert thompson(X, right_mean(P, SolverOptions(init=X0)).solution) <= 1e-8
