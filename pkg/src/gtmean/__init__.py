"""Fixed-point matrix means of positive definite tuples.

The central object is ``G_t``, the unique positive definite solution of
``X = [sum_i w_i ((1-t) X + t A_i)^{-1}]^{-1}`` for ``t`` in ``(0, 1]``.  It
runs from the arithmetic mean (``t -> 0``) down to the harmonic mean
(``t = 1``).  Comparison means, metrics on the cone, the log-determinant
divergence and seeded invariant suites are included.
"""

from .divergence_barycenter import BarycenterProblem, phi_gradient, phi_value, right_mean
from .errors import (
    DimensionMismatch,
    GtMeanError,
    IllConditioned,
    MaxIterExceeded,
    NegativeDivergence,
    NegativeTrace,
    NotPositiveDefinite,
    ParameterOutOfRange,
    PreconditionViolated,
    RankDeficient,
    SingularTransform,
    StepTooLarge,
)
from .fixed_point_means import (
    DEFAULT_OPTIONS,
    SolveReport,
    SolverOptions,
    cartan_mean,
    closed_form_two,
    contraction_check,
    g_fixed_point_map,
    g_mean,
    karcher_residual,
    lie_trotter_limit,
    power_mean,
    renyi_power_mean,
    resolvent_residual,
    wasserstein_mean,
)
from .metrics import (
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
    loewner_gap,
    loewner_leq,
    logdet,
    logm,
    mat_fn,
    powm,
    spd,
    sqrtm,
    sym_eig,
)
from .two_means import (
    MatrixTuple,
    arithmetic_mean,
    geo_mean,
    harmonic_mean,
    log_euclidean_mean,
    weight_vector,
)

__version__ = "0.1.0"
