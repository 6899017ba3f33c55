import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gtmean import cli
from gtmean import testkit as tk
from gtmean.explore import log_majorization, g_vs_cartan
from gtmean.io import ProblemFile, ProblemFileError, ResultRecord, parse_problem, read_problem, write_problem
from gtmean.verify import commuting_tuple
from gtmean.two_means import MatrixTuple, harmonic_mean

WORKED_G = [[1.96124391, -0.53074303], [-0.53074303, 1.96124391]]
WORKED_CARTAN = [[1.95423082, -0.51198125], [-0.51198125, 1.95423082]]


def _write(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def worked_file(tmp_path, worked_triple):
    return _write(tmp_path / "worked.json", {"matrices": [A.tolist() for A in worked_triple]})


def _run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@settings(max_examples=25)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(1, 5))
def test_problem_file_round_trip_is_bit_exact(tmp_path_factory, seed, n, dim):
    T = tk.random_tuple(seed, 700, n=n, dim=dim, cond_max=1e4)
    P = ProblemFile([A for A in T.matrices], list(T.weights), t=float(np.random.default_rng(seed).random()), alpha=-0.25)
    path = tmp_path_factory.mktemp("rt") / "p.json"
    write_problem(path, P)
    Q = read_problem(path)
    assert all(np.array_equal(a, b) for a, b in zip(P.matrices, Q.matrices))
    assert Q.weights == P.weights and Q.t == P.t and Q.alpha == P.alpha


@pytest.mark.parametrize("doc", [
    [1, 2],
    {"matrices": []},
    {"matrices": [[[1.0, 2.0]]]},
    {"matrices": [[[1.0, 0.5], [0.0, 1.0]]]},
    {"matrices": [[[1.0]], [[1.0, 0.0], [0.0, 1.0]]]},
    {"matrices": [[[1.0]]], "dimension": 2},
    {"matrices": [[["a"]]]},
    {"matrices": [[[1.0]]], "weights": [0.5, 0.5]},
    {"matrices": [[[1.0]]], "t": "half"},
    {"matrices": [[[-1.0]]]},
    {"matrices": [[[1.0]]], "colour": "red"},
])
def test_parse_rejections(doc):
    with pytest.raises(ProblemFileError):
        parse_problem(doc)


def test_mean_worked_example(worked_file, capsys):
    code, out, _ = _run(["mean", "g", worked_file], capsys)
    assert code == cli.EXIT_OK
    rec = ResultRecord.from_json(out)
    assert rec.parameters == {"t": 0.5}
    assert np.max(np.abs(np.array(rec.solution) - WORKED_G)) <= 1e-6
    code, out, _ = _run(["mean", "cartan", worked_file], capsys)
    assert code == cli.EXIT_OK
    assert np.max(np.abs(np.array(ResultRecord.from_json(out).solution) - WORKED_CARTAN)) <= 1e-6


def test_mean_at_one_is_harmonic(tmp_path, fixed_triple, capsys):
    T = MatrixTuple(*fixed_triple)
    f = _write(tmp_path / "p.json", {"matrices": T.matrices.tolist(), "weights": T.weights.tolist()})
    code, out, _ = _run(["mean", "g", f, "--t", "1"], capsys)
    assert code == 0
    assert np.allclose(ResultRecord.from_json(out).solution, harmonic_mean(T), rtol=1e-10, atol=0)


@pytest.mark.parametrize("kind", cli.KINDS)
def test_mean_is_deterministic(kind, tmp_path, worked_file, capsys):
    runs = []
    for i in range(2):
        out = tmp_path / f"r{i}.json"
        assert cli.main(["mean", kind, worked_file, "--t", "0.3", "--out", str(out)]) == 0
        d = json.loads(out.read_text())
        d.pop("wall_time")
        runs.append(d)
    assert runs[0] == runs[1]


def test_t_from_file_and_alpha(tmp_path, worked_triple, capsys):
    f = _write(tmp_path / "p.json", {"matrices": [A.tolist() for A in worked_triple], "t": 0.5, "alpha": 0.0})
    code, out, _ = _run(["mean", "g", f], capsys)
    rec = ResultRecord.from_json(out)
    assert code == 0 and rec.parameters == {"alpha": 0.0, "t": 0.5}
    assert np.max(np.abs(np.array(rec.solution) - WORKED_G)) <= 1e-6


def test_exit_codes(tmp_path, worked_file, capsys):
    bad_json = tmp_path / "bad.json"
    bad_json.write_text("{not json")
    assert _run(["mean", "g", str(bad_json)], capsys)[0] == cli.EXIT_PARSE
    assert _run(["mean", "g", str(tmp_path / "missing.json")], capsys)[0] == cli.EXIT_PARSE
    assert _run(["mean", "g", worked_file, "--t", "1.5"], capsys)[0] == cli.EXIT_PRECONDITION
    assert _run(["mean", "g", worked_file, "--weights", "1,2"], capsys)[0] == cli.EXIT_PRECONDITION
    assert _run(["mean", "g", worked_file, "--weights", "a,b,c"], capsys)[0] == cli.EXIT_USAGE
    assert _run(["mean", "g", worked_file, "--alpha", "0", "--weights", "0.2,0.3,0.5"], capsys)[0] == cli.EXIT_PRECONDITION
    assert _run(["mean", "cartan", worked_file, "--max-iter", "1", "--init", "identity"], capsys)[0] == cli.EXIT_MAX_ITER
    assert _run(["mean", "nonsense", worked_file], capsys)[0] == cli.EXIT_USAGE
    assert _run(["frobnicate"], capsys)[0] == cli.EXIT_USAGE
    assert _run([], capsys)[0] == cli.EXIT_USAGE
    assert _run(["--help"], capsys)[0] == cli.EXIT_OK
    assert _run(["verify", "nonsense"], capsys)[0] == cli.EXIT_USAGE
    assert _run(["explore", "nonsense"], capsys)[0] == cli.EXIT_USAGE
    assert _run(["sweep", worked_file, "--t", "0:2:3"], capsys)[0] == cli.EXIT_USAGE
    code, _, err = _run(["mean", "g", worked_file, "--max-iter", "2"], capsys)
    assert code == cli.EXIT_MAX_ITER and "no convergence" in err


def test_sweep_scalar_example(tmp_path, capsys):
    f = _write(tmp_path / "s.json", {"matrices": [[[1.0]], [[4.0]]]})
    out = tmp_path / "sweep.json"
    code, text, _ = _run(["sweep", f, "--t", "0,0.5,1", "--out", str(out)], capsys)
    assert code == 0 and "NOT MONOTONE" not in text
    rows = json.loads(out.read_text())["rows"]
    assert [r["t"] for r in rows] == [0.0, 0.5, 1.0]
    assert [r["lambda_max"] for r in rows] == pytest.approx([2.5, 2.0, 1.6], rel=1e-12)


def test_sweep_constant_tuple(tmp_path, capsys):
    A = np.array([[3.0, 1.0], [1.0, 2.0]])
    f = _write(tmp_path / "c.json", {"matrices": [A.tolist()] * 3})
    out = tmp_path / "sweep.json"
    assert cli.main(["sweep", f, "--out", str(out)]) == 0
    lam = np.linalg.eigvalsh(A)
    for r in json.loads(out.read_text())["rows"]:
        assert r["lambda_max"] == pytest.approx(lam[1], rel=1e-12)
        assert r["lambda_min"] == pytest.approx(lam[0], rel=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_sweep_rows_monotone(seed):
    T = tk.random_tuple(seed, 701, cond_max=1e3)
    rows = cli.sweep_rows(T, [0.2, 0.8], cli.SolverOptions())
    assert cli.sweep_violations(rows) == []
    assert rows[0]["lambda_max"] >= rows[1]["lambda_max"] * (1 - 1e-12)
    assert rows[0]["lambda_min"] >= rows[1]["lambda_min"] * (1 - 1e-12)


def test_sweep_violation_detection():
    rows = [{"t": 0.0, "lambda_max": 2.0, "lambda_min": 1.0},
            {"t": 0.5, "error": "x"},
            {"t": 1.0, "lambda_max": 2.5, "lambda_min": 1.0}]
    assert cli.sweep_violations(rows) == [2]


def test_verify_small_count(tmp_path, capsys):
    out = tmp_path / "v.json"
    code, text, _ = _run(["verify", "divergence", "--count", "5", "--out", str(out)], capsys)
    assert code == 0 and "invariants passed" in text
    report = json.loads(out.read_text())
    assert all(r["passed"] for r in report["invariants"])


def test_explore_exits_zero(tmp_path, capsys):
    out = tmp_path / "e.json"
    code, text, _ = _run(["explore", "g-vs-cartan", "--count", "2", "--out", str(out)], capsys)
    assert code == 0 and "g-vs-cartan" in text
    assert json.loads(out.read_text())["conjecture"] == "g-vs-cartan"
    assert _run(["explore", "log-majorization", "--count", "2"], capsys)[0] == 0


def test_explore_worked_triple_at_half():
    f = g_vs_cartan(t_grid=(0.5,), tuples=[])
    assert f.summary["t=0.5"]["incomparable"] == 1
    ce = f.counterexamples[0]
    assert np.max(np.abs(np.array(ce["g_mean"]) - WORKED_G)) <= 1e-6
    assert np.max(np.abs(np.array(ce["cartan"]) - WORKED_CARTAN)) <= 1e-6


def test_explore_constant_tuples_are_equal():
    tuples = [MatrixTuple([tk.random_spd(tk.SpdGenSpec(3, 10.0, 1.0, s))] * 3) for s in range(4)]
    f = g_vs_cartan(tuples=tuples, include_worked=False)
    assert all(v["equal"] == 4 for v in f.summary.values())
    assert not f.counterexamples


def test_explore_commuting_pairs_have_zero_gap():
    pairs = [commuting_tuple(s, 702, n=2, uniform=True) for s in range(5)]
    f = log_majorization(pairs=pairs)
    assert all(v["max_gap"] <= 1e-8 for v in f.summary.values())
