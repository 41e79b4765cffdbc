"""Run configuration files and result export.

The config file is JSON mirroring the CLI flags; flags override file
values and unset tolerances fall back to per-problem defaults. Exports
are deterministic: identical (problem, config, seed, threads) runs
produce byte-identical solutions/boxes CSVs and summary.json. Wall
times are therefore kept out of summary.json and written separately.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .benchmarks import default_tolerances, get_problem
from .errors import ConfigError, UnknownProblemError
from .expressions import load_problem_file
from .moea import MiniMoeaConfig
from .oracle import GridOracle
from .problems import ProblemDefinition, normalize
from .solver import RunResult, SolverConfig


@dataclass
class RunConfig:
    """Everything needed to reproduce a run."""

    problem: str = "MOP"
    params: dict = field(default_factory=dict)
    problem_file: str | None = None
    proper_eps: float = 0.75
    tol: float | None = None
    delta: float | None = None
    max_iterations: int = 60
    ub_mode: str = "moea"
    threads: int = 1
    seed: int = 0
    max_boxes: int = 2 ** 20
    population: int = 10
    generations: int = 20
    neighborhood: int = 5
    de_scale: float = 0.5
    crossover_rate: float = 0.9
    out: str = "results"
    oracle_resolution: int | None = None
    oracle_compare: bool = False
    lipschitz_f: list | None = None
    lipschitz_g: list | None = None
    ideal: list | None = None
    nadir: list | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    def solver_config(self) -> SolverConfig:
        moea = MiniMoeaConfig(
            population=self.population, generations=self.generations,
            neighborhood=self.neighborhood, de_scale=self.de_scale,
            crossover_rate=self.crossover_rate, seed=self.seed,
        )
        cfg = SolverConfig(
            proper_eps=self.proper_eps, tol_eps=self.tol, tol_delta=self.delta,
            max_iterations=self.max_iterations, ub_mode=self.ub_mode, moea=moea,
            threads=self.threads, seed=self.seed, max_boxes=self.max_boxes,
            ideal=tuple(self.ideal) if self.ideal else None,
            nadir=tuple(self.nadir) if self.nadir else None,
        )
        cfg.validate()
        return cfg

    def build_problem(self) -> ProblemDefinition:
        if self.problem_file:
            prob = load_problem_file(self.problem_file)
            if self.problem in ("", prob.name) or self.problem == "MOP":
                return prob.with_lipschitz(self.lipschitz_f, self.lipschitz_g) \
                    if (self.lipschitz_f or self.lipschitz_g) else prob
        return get_problem(self.problem, self.params,
                           lipschitz_f=self.lipschitz_f, lipschitz_g=self.lipschitz_g)


def parse_config(path: str | None = None, overrides: dict | None = None) -> RunConfig:
    """Load a RunConfig from a JSON file and/or override dict.

    Overrides win over file values; tolerances left unset resolve to the
    problem's defaults. Raises ConfigError with a distinct message per
    validation failure.
    """
    data: dict = {}
    if path is not None:
        try:
            with open(path) as fh:
                data = json.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}")
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}")
    for key, value in (overrides or {}).items():
        if value is not None:
            data[key] = value

    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    cfg = RunConfig(**data)

    if cfg.problem_file is None:
        try:
            tol_default, delta_default = default_tolerances(cfg.problem)
        except UnknownProblemError as exc:
            raise ConfigError(str(exc.args[0]))
    else:
        tol_default, delta_default = 0.05, 0.05
    if cfg.tol is None:
        cfg.tol = tol_default
    if cfg.delta is None:
        cfg.delta = delta_default

    if not 0.0 <= cfg.proper_eps < 1.0:
        raise ConfigError(f"proper-eps must lie in [0, 1), got {cfg.proper_eps}")
    if cfg.tol <= 0:
        raise ConfigError(f"tol must be positive, got {cfg.tol}")
    if cfg.delta <= 0:
        raise ConfigError(f"delta must be positive, got {cfg.delta}")
    if cfg.ub_mode not in ("midpoint", "moea"):
        raise ConfigError(f"ub-mode must be 'midpoint' or 'moea', got {cfg.ub_mode!r}")
    return cfg


def _write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v
                             for v in row])


def export_results(result: RunResult, cfg: RunConfig, out_dir: str | None = None) -> dict:
    """Write solutions.csv, boxes.csv, summary.json, timings.json.

    Returns a dict of written paths. All files except timings.json are
    byte-identical across reruns with the same seed and thread count.
    """
    out = out_dir or cfg.out
    os.makedirs(out, exist_ok=True)
    state = result.state
    paths = {}

    n = state.solutions.shape[1] if state.solutions.size else \
        (len(state.boxes[0].lower) if state.boxes else 0)
    m = state.upper_raw.shape[1] if state.upper_raw.size else state.ref.ideal.shape[0]

    sol_path = os.path.join(out, "solutions.csv")
    header = ([f"x{i + 1}" for i in range(n)] + [f"f{i + 1}" for i in range(m)]
              + [f"f{i + 1}_norm" for i in range(m)])
    rows = [(*x, *f, *fn) for x, f, fn in
            zip(state.solutions, state.upper_raw, state.upper_norm)]
    _write_csv(sol_path, header, rows)
    paths["solutions"] = sol_path

    box_path = os.path.join(out, "boxes.csv")
    box_header = ["id", "depth"] + [f"x{i + 1}_lo" for i in range(n)] \
        + [f"x{i + 1}_hi" for i in range(n)]
    box_rows = [(b.id, b.depth, *b.lower, *b.upper) for b in state.boxes]
    _write_csv(box_path, box_header, box_rows)
    paths["boxes"] = box_path

    summary = {
        "config": cfg.to_dict(),
        "termination": result.termination,
        "iterations": state.iteration,
        "final": {
            "d": state.d,
            "w": state.w,
            "eps_efficiency": result.eps_efficiency,
            "ideal": [float(v) for v in state.ref.ideal],
            "nadir": [float(v) for v in state.ref.nadir],
            "n_solutions": int(len(state.solutions)),
            "n_boxes": int(len(state.boxes)),
        },
        "trace": [
            {
                "iteration": t.iteration, "n_boxes": t.n_boxes,
                "n_infeasible": t.n_infeasible, "n_discarded": t.n_discarded,
                "n_lower": t.n_lower, "n_upper": t.n_upper,
                "w": t.w, "d": t.d, "lipschitz_norm": t.lipschitz_norm,
            }
            for t in result.trace
        ],
    }
    summary_path = os.path.join(out, "summary.json")
    with open(summary_path, "w") as fh:
        json.dump(summary, fh, sort_keys=True, indent=2)
        fh.write("\n")
    paths["summary"] = summary_path

    timings_path = os.path.join(out, "timings.json")
    with open(timings_path, "w") as fh:
        json.dump({"per_iteration_seconds": [t.wall_time for t in result.trace],
                   "total_seconds": float(sum(t.wall_time for t in result.trace))},
                  fh, indent=2)
        fh.write("\n")
    paths["timings"] = timings_path
    return paths


def emit_plot_data(result: RunResult, oracle: GridOracle | None = None,
                   out_dir: str = "results") -> dict:
    """Write gnuplot-ready whitespace-delimited plot data.

    m == 2: a scatter overlay with the solver's upper bounds and, when
    an oracle is given, its Pareto front in separate columns (rows
    padded with nan). m >= 3: one normalized value path per solution,
    plus a separate file for the oracle front when given.
    """
    os.makedirs(out_dir, exist_ok=True)
    state = result.state
    m = state.upper_raw.shape[1] if state.upper_raw.size else state.ref.ideal.shape[0]
    paths = {}

    if m == 2:
        path = os.path.join(out_dir, "front2d.dat")
        solver_pts = state.upper_raw
        oracle_pts = oracle.front_images if oracle is not None else np.empty((0, 2))
        rows = max(len(solver_pts), len(oracle_pts))
        with open(path, "w") as fh:
            cols = ["solver_f1", "solver_f2"]
            if oracle is not None:
                cols += ["oracle_f1", "oracle_f2"]
            fh.write("# " + " ".join(cols) + "\n")
            for i in range(rows):
                cells = []
                cells += [repr(float(v)) for v in solver_pts[i]] if i < len(solver_pts) \
                    else ["nan", "nan"]
                if oracle is not None:
                    cells += [repr(float(v)) for v in oracle_pts[i]] if i < len(oracle_pts) \
                        else ["nan", "nan"]
                fh.write(" ".join(cells) + "\n")
        paths["front2d"] = path
    else:
        path = os.path.join(out_dir, "value_paths.dat")
        with open(path, "w") as fh:
            fh.write("# " + " ".join(f"f{i + 1}_norm" for i in range(m)) + "\n")
            for row in state.upper_norm:
                fh.write(" ".join(repr(float(v)) for v in row) + "\n")
        paths["value_paths"] = path
        if oracle is not None:
            opath = os.path.join(out_dir, "value_paths_oracle.dat")
            with open(opath, "w") as fh:
                fh.write("# " + " ".join(f"f{i + 1}_norm" for i in range(m)) + "\n")
                for row in normalize(oracle.front_images, state.ref):
                    fh.write(" ".join(repr(float(v)) for v in row) + "\n")
            paths["value_paths_oracle"] = opath
    return paths
