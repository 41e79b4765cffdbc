"""Estimator-style front end for the solver.

Mirrors the scikit-learn conventions so the solver composes with that
ecosystem's tooling: constructor arguments are stored verbatim,
``get_params``/``set_params`` expose them, validation happens in
``fit``, and results land in trailing-underscore attributes.
"""

from __future__ import annotations

import inspect

import numpy as np

from .benchmarks import get_problem
from .errors import ConfigError, PpbnbError
from .moea import MiniMoeaConfig
from .problems import ProblemDefinition
from .solver import SolverConfig, solve


class NotFittedError(PpbnbError, AttributeError):
    """fit() has not been called yet."""


def check_problem(problem) -> ProblemDefinition:
    """Resolve a problem argument to a ProblemDefinition with constants."""
    if isinstance(problem, str):
        problem = get_problem(problem)
    if not isinstance(problem, ProblemDefinition):
        raise ConfigError(f"expected a ProblemDefinition or problem name, got {type(problem)!r}")
    if problem.lipschitz_f is None:
        raise ConfigError(
            f"problem {problem.name!r} has no Lipschitz constants; "
            "pass them or build the problem via get_problem()"
        )
    return problem


class ProperParetoSolver:
    """Branch and bound solver exposed with the fit/params idiom.

    Parameters mirror SolverConfig; ``moea_config`` may be a
    MiniMoeaConfig instance (its seed is superseded by ``seed``).

    Attributes after fit: ``solutions_`` (decision vectors), ``front_``
    (raw objective vectors), ``front_normalized_``, ``boxes_`` (live
    boxes), ``result_`` (the full RunResult), ``termination_``,
    ``gap_``, ``width_``, ``eps_efficiency_``, ``reference_points_``.
    """

    def __init__(self, proper_eps=0.75, tol=0.05, delta=0.05, max_iterations=60,
                 ub_mode="moea", moea_config=None, threads=1, seed=0,
                 max_boxes=2 ** 20, dominance_tol=0.0):
        self.proper_eps = proper_eps
        self.tol = tol
        self.delta = delta
        self.max_iterations = max_iterations
        self.ub_mode = ub_mode
        self.moea_config = moea_config
        self.threads = threads
        self.seed = seed
        self.max_boxes = max_boxes
        self.dominance_tol = dominance_tol

    @classmethod
    def _param_names(cls):
        sig = inspect.signature(cls.__init__)
        return [p for p in sig.parameters if p != "self"]

    def get_params(self, deep=True):
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params):
        valid = set(self._param_names())
        for key, value in params.items():
            if key not in valid:
                raise ValueError(f"invalid parameter {key!r} for {type(self).__name__}")
            setattr(self, key, value)
        return self

    def _to_config(self) -> SolverConfig:
        moea = self.moea_config if self.moea_config is not None else MiniMoeaConfig()
        if not isinstance(moea, MiniMoeaConfig):
            raise ConfigError("moea_config must be a MiniMoeaConfig or None")
        cfg = SolverConfig(
            proper_eps=self.proper_eps, tol_eps=self.tol, tol_delta=self.delta,
            max_iterations=self.max_iterations, ub_mode=self.ub_mode, moea=moea,
            threads=self.threads, seed=self.seed, max_boxes=self.max_boxes,
            dominance_tol=self.dominance_tol,
        )
        cfg.validate()
        return cfg

    def fit(self, problem, on_iteration=None):
        """Solve the problem; returns self."""
        prob = check_problem(problem)
        config = self._to_config()
        result = solve(prob, config, on_iteration=on_iteration)
        self.result_ = result
        self.problem_ = prob
        self.solutions_ = result.state.solutions
        self.front_ = result.state.upper_raw
        self.front_normalized_ = result.state.upper_norm
        self.boxes_ = result.state.boxes
        self.reference_points_ = result.state.ref
        self.termination_ = result.termination
        self.n_iterations_ = result.state.iteration
        self.gap_ = result.state.d
        self.width_ = result.state.w
        self.eps_efficiency_ = result.eps_efficiency
        return self

    def _check_fitted(self):
        if not hasattr(self, "result_"):
            raise NotFittedError("call fit() before accessing results")

    def pareto_front(self, normalized=False) -> np.ndarray:
        """Front images found by the run (raw by default)."""
        self._check_fitted()
        return self.front_normalized_ if normalized else self.front_

    def __repr__(self):
        params = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"{type(self).__name__}({params})"
