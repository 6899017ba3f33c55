"""Problem files and result records.

Both are JSON documents.  Floats are written with Python's shortest
round-trip representation, so reading a written file reproduces every
number bit for bit.

Problem file::

    {
      "dimension": 2,
      "matrices": [[[2.0, -1.0], [-1.0, 2.0]], ...],
      "weights": [0.5, 0.5],      # optional, default uniform
      "t": 0.5,                   # optional
      "alpha": null               # optional
    }
"""

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .errors import GtMeanError
from .two_means import MatrixTuple

SYMMETRY_TOL = 1e-10


class ProblemFileError(GtMeanError, ValueError):
    pass


@dataclass
class ProblemFile:
    matrices: list
    weights: list = None
    t: float = None
    alpha: float = None

    @property
    def dimension(self):
        return len(self.matrices[0])

    def to_tuple(self):
        return MatrixTuple([np.asarray(A, dtype=float) for A in self.matrices], self.weights)

    def to_dict(self):
        return {
            "dimension": self.dimension,
            "matrices": [np.asarray(A, dtype=float).tolist() for A in self.matrices],
            "weights": None if self.weights is None else [float(w) for w in self.weights],
            "t": self.t,
            "alpha": self.alpha,
        }


def _number(x, what):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ProblemFileError(f"{what} must be a number, got {x!r}")
    return float(x)


def parse_problem(doc):
    """Validate a decoded problem document and return a :class:`ProblemFile`."""
    if not isinstance(doc, dict):
        raise ProblemFileError("problem file must hold a JSON object")
    unknown = set(doc) - {"dimension", "matrices", "weights", "t", "alpha"}
    if unknown:
        raise ProblemFileError(f"unknown keys {sorted(unknown)}")
    if "matrices" not in doc or not isinstance(doc["matrices"], list) or not doc["matrices"]:
        raise ProblemFileError("'matrices' must be a non-empty list")
    dim = doc.get("dimension")
    mats = []
    for i, rows in enumerate(doc["matrices"]):
        try:
            M = np.array([[_number(x, f"matrix {i} entry") for x in row] for row in rows], dtype=float)
        except TypeError:
            raise ProblemFileError(f"matrix {i} is not a list of rows") from None
        if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
            raise ProblemFileError(f"matrix {i} is not square")
        if dim is not None and M.shape[0] != dim:
            raise ProblemFileError(f"matrix {i} has dimension {M.shape[0]}, file says {dim}")
        if np.max(np.abs(M - M.T)) > SYMMETRY_TOL:
            raise ProblemFileError(f"matrix {i} is not symmetric within {SYMMETRY_TOL}")
        mats.append(M)
    if len({M.shape for M in mats}) != 1:
        raise ProblemFileError("matrices have different dimensions")
    weights = doc.get("weights")
    if weights is not None:
        if not isinstance(weights, list) or len(weights) != len(mats):
            raise ProblemFileError("'weights' must list one number per matrix")
        weights = [_number(w, "weight") for w in weights]
    t = doc.get("t")
    alpha = doc.get("alpha")
    problem = ProblemFile(
        matrices=mats,
        weights=weights,
        t=None if t is None else _number(t, "t"),
        alpha=None if alpha is None else _number(alpha, "alpha"),
    )
    try:
        problem.to_tuple()
    except GtMeanError as exc:
        raise ProblemFileError(str(exc)) from None
    return problem


def read_problem(path):
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ProblemFileError(f"cannot read {path}: {exc}") from None
    return parse_problem(doc)


def write_problem(path, problem):
    Path(path).write_text(json.dumps(problem.to_dict(), indent=2) + "\n")


@dataclass
class ResultRecord:
    kind: str
    parameters: dict
    solution: list
    iterations: int
    residual: float
    fixed_point_residual: float
    contraction_estimate: float
    wall_time: float
    method: str = ""
    convention: bool = False
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_report(cls, kind, parameters, report, wall_time):
        return cls(
            kind=kind,
            parameters=parameters,
            solution=np.asarray(report.solution).tolist(),
            iterations=int(report.iterations),
            residual=float(report.residual),
            fixed_point_residual=float(report.fixed_point_residual),
            contraction_estimate=float(report.contraction_estimate),
            wall_time=float(wall_time),
            method=report.method,
            convention=bool(report.convention),
            extra={k: float(v) for k, v in {"certificate": report.certificate, **report.extra}.items()},
        )

    def to_json(self):
        return json.dumps(asdict(self), indent=2) + "\n"

    @classmethod
    def from_json(cls, text):
        return cls(**json.loads(text))
