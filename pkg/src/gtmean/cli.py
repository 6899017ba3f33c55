"""Command line front end: ``gtmean {mean, sweep, verify, explore}``.

Exit codes
----------
0  success
1  ``verify`` found a failing invariant, or a ``sweep`` row failed
2  usage error (bad flags or unknown names)
3  the problem file could not be parsed
4  a precondition was violated (parameter range, SPD, dimensions)
5  an iteration cap was hit before convergence
"""

import argparse
import json
import sys
import time

import numpy as np

from . import explore as explore_mod
from . import verify as verify_mod
from .divergence_barycenter import BarycenterProblem, right_mean
from .errors import GtMeanError, MaxIterExceeded
from .fixed_point_means import (
    SolveReport,
    SolverOptions,
    cartan_mean,
    g_mean,
    power_mean,
    renyi_power_mean,
    wasserstein_mean,
)
from .io import ProblemFileError, ResultRecord, read_problem
from .metrics import thompson
from .two_means import MatrixTuple, arithmetic_mean, harmonic_mean

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_PRECONDITION = 4
EXIT_MAX_ITER = 5

KINDS = ("g", "power", "cartan", "wasserstein", "renyi", "arithmetic", "harmonic")
DEFAULT_T = 0.5
DEFAULT_Z = 0.5
DEFAULT_GRID = "0:1:11"
SWEEP_RTOL = 1e-9


class UsageError(Exception):
    pass


def parse_grid(text):
    """``"a:b:n"`` for ``n`` evenly spaced points, or a comma-separated list."""
    try:
        if ":" in text:
            a, b, n = text.split(":")
            grid = np.linspace(float(a), float(b), int(n))
        else:
            grid = np.array([float(x) for x in text.split(",") if x.strip()])
    except ValueError:
        raise UsageError(f"cannot parse t grid {text!r}") from None
    if grid.size == 0:
        raise UsageError("empty t grid")
    if np.any(grid < 0) or np.any(grid > 1):
        raise UsageError(f"t grid must lie in [0, 1], got {text!r}")
    return sorted(float(t) for t in grid)


def parse_weights(text):
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse weights {text!r}") from None


def _options(args):
    return SolverOptions(tol=args.tol, max_iter=args.max_iter, init=args.init)


def _load(args):
    problem = read_problem(args.file)
    weights = parse_weights(args.weights) if args.weights else problem.weights
    return problem, MatrixTuple(problem.matrices, weights)


def _closed(X):
    return SolveReport(X, 0, 0.0, 0.0, 0.0, method="closed-form")


def solve(kind, T, t, z, alpha, opts):
    """Dispatch one mean computation; returns ``(report, parameters)``."""
    if kind == "g":
        if alpha is not None:
            if not np.allclose(T.weights, T.weights[0]):
                raise GtMeanError("the right mean (--alpha) needs uniform weights")
            P = BarycenterProblem(alpha, tuple(T.matrices))
            return right_mean(P, opts), {"alpha": alpha, "t": P.t}
        return g_mean(t, T, opts), {"t": t}
    if kind == "power":
        return power_mean(t, T, opts), {"t": t}
    if kind == "renyi":
        return renyi_power_mean(t, z, T, opts), {"t": t, "z": z}
    if kind == "cartan":
        return cartan_mean(T, opts), {}
    if kind == "wasserstein":
        return wasserstein_mean(T, opts), {}
    if kind == "arithmetic":
        return _closed(arithmetic_mean(T)), {}
    if kind == "harmonic":
        return _closed(harmonic_mean(T)), {}
    raise UsageError(f"unknown mean kind {kind!r}")


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_mean(args):
    problem, T = _load(args)
    t = args.t if args.t is not None else (problem.t if problem.t is not None else DEFAULT_T)
    alpha = args.alpha if args.alpha is not None else problem.alpha
    start = time.perf_counter()
    rep, params = solve(args.kind, T, t, args.z, alpha, _options(args))
    record = ResultRecord.from_report(args.kind, params, rep, time.perf_counter() - start)
    _emit(record.to_json(), args.out)
    return EXIT_OK


def sweep_rows(T, grid, opts):
    """One row per ``t``: extremal eigenvalues of G_t and its distances to A and H.

    A row whose solve fails carries ``error`` instead of numbers.
    """
    A, H = arithmetic_mean(T), harmonic_mean(T)
    rows = []
    for t in grid:
        try:
            G = g_mean(t, T, opts).solution
            lam = np.linalg.eigvalsh(G)
            rows.append({"t": t, "lambda_max": float(lam[-1]), "lambda_min": float(lam[0]),
                         "d_arithmetic": thompson(G, A), "d_harmonic": thompson(G, H)})
        except GtMeanError as exc:
            rows.append({"t": t, "error": f"{type(exc).__name__}: {exc}"})
    return rows


def sweep_violations(rows):
    """Indices of rows whose eigenvalue columns rise above the previous row."""
    bad = []
    good = [(i, r) for i, r in enumerate(rows) if "error" not in r]
    for (_, a), (j, b) in zip(good, good[1:]):
        for key in ("lambda_max", "lambda_min"):
            if b[key] > a[key] * (1 + SWEEP_RTOL):
                bad.append(j)
                break
    return bad


def cmd_sweep(args):
    _, T = _load(args)
    grid = parse_grid(args.t if args.t is not None else DEFAULT_GRID)
    rows = sweep_rows(T, grid, _options(args))
    bad = sweep_violations(rows)
    print(f"{'t':>8} {'lambda_max':>16} {'lambda_min':>16} {'d(G,A)':>12} {'d(G,H)':>12}")
    for i, r in enumerate(rows):
        if "error" in r:
            print(f"{r['t']:>8.4g}  {r['error']}")
            continue
        flag = "  NOT MONOTONE" if i in bad else ""
        print(f"{r['t']:>8.4g} {r['lambda_max']:>16.10g} {r['lambda_min']:>16.10g} "
              f"{r['d_arithmetic']:>12.4e} {r['d_harmonic']:>12.4e}{flag}")
    if args.out:
        _emit(json.dumps({"rows": rows, "non_monotone": bad}, indent=2) + "\n", args.out)
    failed = bad or any("error" in r for r in rows)
    return EXIT_FAILED if failed else EXIT_OK


def cmd_verify(args):
    if args.suite not in verify_mod.SUITES + ("all",):
        raise UsageError(f"unknown suite {args.suite!r}")
    results = verify_mod.run_suite(args.suite, args.seed, args.count, progress=lambda r: print(r.line(), flush=True))
    report = verify_mod.report_dict(results, args.seed, args.count)
    if args.out:
        _emit(json.dumps(report, indent=2) + "\n", args.out)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} invariants passed")
    if failed:
        r = failed[0]
        print(f"first failure: {r.suite}/{r.name}; replay with seed={r.replay[0]} index={r.replay[1]}",
              file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def cmd_explore(args):
    if args.conjecture not in explore_mod.CONJECTURES:
        raise UsageError(f"unknown conjecture {args.conjecture!r}")
    finding = explore_mod.explore(args.conjecture, args.seed, args.count)
    print("\n".join(finding.lines()))
    if args.out:
        doc = {"conjecture": finding.conjecture, "instances": finding.instances,
               "summary": {k: str(v) for k, v in finding.summary.items()},
               "counterexamples": finding.counterexamples, "errors": finding.errors}
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="gtmean", description="Matrix means of SPD tuples.")
    sub = parser.add_subparsers(dest="verb", required=True)

    def solver_flags(p):
        p.add_argument("--weights", help="comma-separated weights (default: file, else uniform)")
        p.add_argument("--tol", type=float, default=1e-12)
        p.add_argument("--max-iter", type=int, default=10_000)
        p.add_argument("--init", default="arithmetic", choices=("arithmetic", "harmonic", "identity"))
        p.add_argument("--out", help="write the JSON result here instead of standard output")

    p = sub.add_parser("mean", help="compute one mean of a problem file")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("file")
    p.add_argument("--t", type=float, help=f"order parameter (default: file, else {DEFAULT_T})")
    p.add_argument("--z", type=float, default=DEFAULT_Z, help="second Renyi parameter")
    p.add_argument("--alpha", type=float, help="divergence parameter; with kind g, solve the right mean")
    solver_flags(p)
    p.set_defaults(fn=cmd_mean)

    p = sub.add_parser("sweep", help="tabulate G_t over a grid of t")
    p.add_argument("file")
    p.add_argument("--t", help=f"grid 'a:b:n' or comma list (default {DEFAULT_GRID})")
    solver_flags(p)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("verify", help="run seeded invariant suites")
    p.add_argument("suite", nargs="?", default="all")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("explore", help="gather evidence on an open question")
    p.add_argument("conjecture")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_explore)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ProblemFileError as exc:
        print(f"cannot parse problem file: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except MaxIterExceeded as exc:
        print(f"no convergence: {exc}", file=sys.stderr)
        return EXIT_MAX_ITER
    except (GtMeanError, ValueError) as exc:
        print(f"precondition violated: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
