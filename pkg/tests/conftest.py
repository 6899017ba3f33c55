import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile(
    "thorough", max_examples=400, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("GTMEAN_HYPOTHESIS_PROFILE", "default"))


@st.composite
def spd_matrices(draw, dim=None, max_dim=4, jitter=0.1):
    """``G G^T + jitter I`` from bounded Gaussian-like entries."""
    m = draw(st.integers(1, max_dim)) if dim is None else dim
    G = draw(hnp.arrays(np.float64, (m, m), elements=st.floats(-2.0, 2.0, allow_subnormal=False)))
    return G @ G.T + jitter * np.eye(m)


@st.composite
def spd_tuples(draw, max_n=4, max_dim=4):
    m = draw(st.integers(1, max_dim))
    n = draw(st.integers(1, max_n))
    mats = [draw(spd_matrices(dim=m)) for _ in range(n)]
    raw = draw(st.lists(st.floats(0.05, 1.0), min_size=n, max_size=n))
    return mats, np.array(raw) / sum(raw)


@pytest.fixture
def worked_triple():
    return [
        np.array([[2.0, -1.0], [-1.0, 2.0]]),
        np.array([[3.0, -2.0], [-2.0, 3.0]]),
        np.array([[2.0, 1.0], [1.0, 2.0]]),
    ]


@pytest.fixture
def fixed_triple():
    """A non-commuting 3x3 triple with weights (0.2, 0.5, 0.3)."""
    A = np.array([[4.0, 1, 0], [1, 3, 1], [0, 1, 2]])
    B = np.array([[2.0, 0, 0.5], [0, 1, 0], [0.5, 0, 3]])
    C = np.array([[1.0, 0.2, 0.1], [0.2, 5, 0.3], [0.1, 0.3, 1.5]])
    return [A, B, C], np.array([0.2, 0.5, 0.3])
