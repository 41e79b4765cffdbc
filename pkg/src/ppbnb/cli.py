"""Command-line interface.

Subcommands: ``solve`` runs the branch and bound and exports results;
``list-problems`` shows the built-in benchmarks; ``oracle`` builds a
dense-grid ground truth and exports its fronts; ``verify`` re-checks a
finished run directory against an oracle.

Exit codes: 0 converged/success, 2 validation error, 3 degenerate
termination, 4 max-iterations reached, 1 failed verification.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import __version__
from .benchmarks import available_problems, default_tolerances, get_problem
from .cone import eps_dominates
from .errors import PpbnbError
from .io import RunConfig, emit_plot_data, export_results, parse_config
from .oracle import build_grid_oracle, export_front_csv, oracle_proper_front
from .problems import ReferencePoints, normalize
from .solver import (
    TERMINATION_CONVERGED,
    TERMINATION_DEGENERATE,
    TERMINATION_MAX_ITERATIONS,
    directed_hausdorff,
    solve,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_VALIDATION = 2
EXIT_DEGENERATE = 3
EXIT_MAX_ITERATIONS = 4

_TERMINATION_CODES = {
    TERMINATION_CONVERGED: EXIT_OK,
    TERMINATION_DEGENERATE: EXIT_DEGENERATE,
    TERMINATION_MAX_ITERATIONS: EXIT_MAX_ITERATIONS,
}


def _default_threads() -> int:
    env = os.environ.get("PPBNB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def _parse_params(pairs) -> dict:
    params = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise PpbnbError(f"--param expects KEY=VALUE, got {pair!r}")
        key, raw = pair.split("=", 1)
        try:
            value = int(raw)
        except ValueError:
            try:
                value = float(raw)
            except ValueError:
                value = raw
        params[key] = value
    return params


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--problem", help="benchmark or registered problem name")
    p.add_argument("--param", action="append", metavar="K=V",
                   help="problem parameter, repeatable (e.g. --param K=4)")
    p.add_argument("--oracle-resolution", type=int, default=None,
                   help="grid points per dimension for oracle builds")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ppbnb",
        description="Branch and bound for trade-off-bounded Pareto optimal solutions",
    )
    parser.add_argument("--version", action="version", version=f"ppbnb {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="run the solver and export results")
    _add_common_flags(ps)
    ps.add_argument("--config", help="JSON config file (flags override it)")
    ps.add_argument("--proper-eps", type=float, default=None,
                    help="dominance-cone parameter in [0, 1) (default 0.75)")
    ps.add_argument("--tol", type=float, default=None,
                    help="archive gap target, normalized objective units")
    ps.add_argument("--delta", type=float, default=None,
                    help="box diameter target, decision units")
    ps.add_argument("--ub-mode", choices=("midpoint", "moea"), default=None)
    ps.add_argument("--threads", type=int, default=None,
                    help="worker threads (default $PPBNB_THREADS or 1)")
    ps.add_argument("--seed", type=int, default=None)
    ps.add_argument("--max-iters", type=int, default=None)
    ps.add_argument("--out", default=None, help="output directory")
    ps.add_argument("--compare-oracle", action="store_true",
                    help="build a grid oracle and include it in plot data (n <= 3)")

    sub.add_parser("list-problems", help="list registered problems")

    po = sub.add_parser("oracle", help="build a grid oracle and export fronts")
    _add_common_flags(po)
    po.add_argument("--proper-eps", type=float, default=0.75)
    po.add_argument("--out", default="results")

    pv = sub.add_parser("verify", help="re-check a finished run directory")
    pv.add_argument("--run", required=True, help="directory written by solve")
    pv.add_argument("--oracle-resolution", type=int, default=None)
    pv.add_argument("--max-front-dh", type=float, default=None,
                    help="fail if d_h(solutions -> oracle front) exceeds this")
    pv.add_argument("--max-proper-dh", type=float, default=None,
                    help="fail if d_h(solutions -> oracle proper front) exceeds this")
    return parser


def _cmd_solve(args) -> int:
    overrides = {
        "problem": args.problem,
        "params": _parse_params(args.param) or None,
        "proper_eps": args.proper_eps,
        "tol": args.tol,
        "delta": args.delta,
        "ub_mode": args.ub_mode,
        "threads": args.threads if args.threads is not None else
        (None if args.config else _default_threads()),
        "seed": args.seed,
        "max_iterations": args.max_iters,
        "out": args.out,
        "oracle_resolution": args.oracle_resolution,
        "oracle_compare": True if args.compare_oracle else None,
    }
    cfg = parse_config(args.config, overrides)
    if args.config is None and cfg.threads is None:
        cfg.threads = _default_threads()
    prob = cfg.build_problem()
    result = solve(prob, cfg.solver_config())
    paths = export_results(result, cfg)

    oracle = None
    if cfg.oracle_compare and prob.n <= 3:
        oracle = build_grid_oracle(prob, cfg.oracle_resolution)
    paths.update(emit_plot_data(result, oracle, cfg.out))

    state = result.state
    print(f"problem={prob.name} termination={result.termination} "
          f"iterations={state.iteration} solutions={len(state.solutions)} "
          f"boxes={len(state.boxes)}")
    print(f"gap d={state.d:.6g} width w={state.w:.6g} "
          f"eps-efficiency={result.eps_efficiency:.6g}")
    for key in sorted(paths):
        print(f"wrote {paths[key]}")
    return _TERMINATION_CODES[result.termination]


def _cmd_list_problems() -> int:
    print(f"{'name':<16} {'n':>3} {'m':>3} {'p':>3} {'default tol':>12} {'default delta':>14}")
    for name in available_problems():
        prob = get_problem(name, estimate=False)
        tol, delta = default_tolerances(name)
        print(f"{name:<16} {prob.n:>3} {prob.m:>3} {prob.p:>3} {tol:>12g} {delta:>14g}")
    return EXIT_OK


def _cmd_oracle(args) -> int:
    name = args.problem or "MOP"
    prob = get_problem(name, _parse_params(args.param))
    oracle = build_grid_oracle(prob, args.oracle_resolution)
    os.makedirs(args.out, exist_ok=True)
    front_path = os.path.join(args.out, "oracle_front.csv")
    export_front_csv(front_path, oracle.front_points, oracle.front_images)
    pts, imgs = oracle_proper_front(oracle, args.proper_eps)
    proper_path = os.path.join(args.out, "oracle_proper_front.csv")
    export_front_csv(proper_path, pts, imgs)
    print(f"oracle {prob.name} resolution={oracle.resolution} "
          f"feasible={len(oracle.points)} front={len(oracle.front_images)} "
          f"proper(eps={args.proper_eps})={len(imgs)}")
    print(f"wrote {front_path}")
    print(f"wrote {proper_path}")
    return EXIT_OK


def _load_solutions(path: str):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader]
    n = sum(1 for h in header if h.startswith("x"))
    m = sum(1 for h in header if h.startswith("f") and not h.endswith("_norm"))
    data = np.asarray(rows, dtype=float).reshape(len(rows), len(header))
    return data[:, :n], data[:, n:n + m], data[:, n + m:]


def _cmd_verify(args) -> int:
    summary_path = os.path.join(args.run, "summary.json")
    with open(summary_path) as fh:
        summary = json.load(fh)
    cfg = RunConfig(**summary["config"])
    prob = cfg.build_problem()
    X, F, FN = _load_solutions(os.path.join(args.run, "solutions.csv"))

    checks = []

    if len(X):
        G = prob.evaluate_constraints(X)
        feasible = bool(np.all(G >= 0.0))
    else:
        feasible = True
    checks.append(("solutions feasible (g >= 0)", feasible))

    clean = True
    for i in range(len(FN)):
        for j in range(len(FN)):
            if i != j and eps_dominates(FN[j], FN[i], cfg.proper_eps):
                clean = False
    checks.append(("archive non-eps-dominated", clean))

    reeval = prob.evaluate_objectives(X) if len(X) else F
    checks.append(("images match preimages", bool(np.allclose(reeval, F, rtol=1e-9, atol=1e-12))))

    if prob.n <= 3 and len(X):
        oracle = build_grid_oracle(prob, args.oracle_resolution)
        ref = ReferencePoints(np.asarray(summary["final"]["ideal"]),
                              np.asarray(summary["final"]["nadir"]))
        front_n = normalize(oracle.front_images, ref)
        dh_front = directed_hausdorff(FN, front_n)
        print(f"d_h(solutions -> oracle front) = {dh_front:.6g} (normalized)")
        if args.max_front_dh is not None:
            checks.append((f"d_h to front <= {args.max_front_dh}",
                           dh_front <= args.max_front_dh))
        _, proper = oracle_proper_front(oracle, cfg.proper_eps)
        if len(proper):
            dh_proper = directed_hausdorff(FN, normalize(proper, ref))
            print(f"d_h(solutions -> oracle proper front) = {dh_proper:.6g} (normalized)")
            if args.max_proper_dh is not None:
                checks.append((f"d_h to proper front <= {args.max_proper_dh}",
                               dh_proper <= args.max_proper_dh))

    ok = True
    for label, passed in checks:
        print(f"{'PASS' if passed else 'FAIL'}: {label}")
        ok &= passed
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "list-problems":
            return _cmd_list_problems()
        if args.command == "oracle":
            return _cmd_oracle(args)
        if args.command == "verify":
            return _cmd_verify(args)
    except PpbnbError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
