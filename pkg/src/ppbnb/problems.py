"""Problem definitions, objective normalization, and Lipschitz estimation.

Evaluators are batch-first: they map an (N, n) array of points to an
(N, m) array of objective values (and (N, p) constraint values, with the
convention g_j(x) >= 0 feasible). Pointwise callables can be wrapped via
ProblemDefinition.from_pointwise. All dominance tests and archives in
the solver operate on normalized objectives f_norm = (f - ideal) /
(nadir - ideal); Lipschitz constants rescale by the same ranges.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .errors import (
    DegenerateRangeError,
    DomainError,
    EvaluationError,
)
from .geometry import Box, diameter, make_root


@dataclass(frozen=True)
class ProblemDefinition:
    """A box- and inequality-constrained multiobjective problem.

    objectives: (N, n) -> (N, m); constraints: (N, n) -> (N, p) or None
    when p == 0. lipschitz_f / lipschitz_g hold per-objective and
    per-constraint Lipschitz constants; the solver requires lipschitz_f.
    """

    name: str
    n: int
    m: int
    p: int
    domain: Box
    objectives: Callable[[np.ndarray], np.ndarray]
    constraints: Callable[[np.ndarray], np.ndarray] | None = None
    lipschitz_f: np.ndarray | None = None
    lipschitz_g: np.ndarray | None = None

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("problems need at least two objectives")
        if self.domain.n != self.n:
            raise ValueError("domain dimension does not match n")
        if self.p > 0 and self.constraints is None:
            raise ValueError("p > 0 requires a constraint evaluator")
        for field_name in ("lipschitz_f", "lipschitz_g"):
            val = getattr(self, field_name)
            if val is not None:
                arr = np.asarray(val, dtype=float)
                expected = self.m if field_name == "lipschitz_f" else self.p
                if arr.shape != (expected,):
                    raise ValueError(f"{field_name} must have length {expected}")
                if field_name == "lipschitz_f" and np.any(arr <= 0):
                    raise ValueError("lipschitz_f components must be positive")
                object.__setattr__(self, field_name, arr)

    @classmethod
    def from_pointwise(cls, name, n, m, p, domain, objective_fn, constraint_fn=None,
                       **kwargs) -> "ProblemDefinition":
        """Wrap per-point callables x -> m-vector / x -> p-vector."""

        def batch_obj(X):
            return np.asarray([objective_fn(x) for x in np.atleast_2d(X)], dtype=float)

        batch_con = None
        if constraint_fn is not None:
            def batch_con(X):
                return np.asarray([constraint_fn(x) for x in np.atleast_2d(X)], dtype=float)

        return cls(name, n, m, p, domain, batch_obj, batch_con, **kwargs)

    def evaluate_objectives(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        F = np.asarray(self.objectives(X), dtype=float)
        if not np.all(np.isfinite(F)):
            raise EvaluationError(f"{self.name}: non-finite objective value")
        return F

    def evaluate_constraints(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if self.p == 0:
            return np.zeros((X.shape[0], 0))
        return np.asarray(self.constraints(X), dtype=float)

    def with_lipschitz(self, lipschitz_f=None, lipschitz_g=None) -> "ProblemDefinition":
        return replace(
            self,
            lipschitz_f=self.lipschitz_f if lipschitz_f is None else np.asarray(lipschitz_f, float),
            lipschitz_g=self.lipschitz_g if lipschitz_g is None else np.asarray(lipschitz_g, float),
        )


def evaluate(prob: ProblemDefinition, x) -> tuple[np.ndarray, np.ndarray, bool]:
    """Evaluate one point: (objectives, constraints, feasible).

    Raises DomainError when x falls outside the domain box and
    EvaluationError when an objective comes back non-finite.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (prob.n,):
        raise DomainError(f"expected point of dimension {prob.n}, got shape {x.shape}")
    if not prob.domain.contains(x):
        raise DomainError(f"point {x} outside domain of {prob.name}")
    F = prob.evaluate_objectives(x[None, :])[0]
    G = prob.evaluate_constraints(x[None, :])[0]
    feasible = bool(np.all(G >= 0.0))
    return F, G, feasible


@dataclass(frozen=True)
class ReferencePoints:
    """Ideal and nadir estimates used for objective normalization."""

    ideal: np.ndarray
    nadir: np.ndarray

    def __post_init__(self):
        ideal = np.asarray(self.ideal, dtype=float)
        nadir = np.asarray(self.nadir, dtype=float)
        object.__setattr__(self, "ideal", ideal)
        object.__setattr__(self, "nadir", nadir)
        if ideal.shape != nadir.shape or ideal.ndim != 1:
            raise ValueError("ideal and nadir must be 1-d vectors of equal length")
        if np.any(nadir <= ideal):
            raise DegenerateRangeError("reference points require ideal < nadir componentwise")

    @property
    def range(self) -> np.ndarray:
        return self.nadir - self.ideal


def normalize(y, ref: ReferencePoints) -> np.ndarray:
    """Map objectives to (y - ideal) / (nadir - ideal), componentwise."""
    y = np.asarray(y, dtype=float)
    rng = ref.range
    if np.any(rng == 0.0):
        raise DegenerateRangeError("nadir equals ideal on some component")
    return (y - ref.ideal) / rng


def denormalize(y, ref: ReferencePoints) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    return y * ref.range + ref.ideal


def update_reference_points(ref: ReferencePoints, lower_bounds, upper_bounds) -> ReferencePoints:
    """Monotone update: ideal takes componentwise mins of the lower
    bounds, nadir takes componentwise maxes of the upper bounds."""
    ideal = ref.ideal
    nadir = ref.nadir
    lower_bounds = np.atleast_2d(np.asarray(lower_bounds, dtype=float))
    upper_bounds = np.atleast_2d(np.asarray(upper_bounds, dtype=float))
    if lower_bounds.size:
        ideal = np.minimum(ideal, lower_bounds.min(axis=0))
    if upper_bounds.size:
        nadir = np.maximum(nadir, upper_bounds.max(axis=0))
    return ReferencePoints(ideal, nadir)


def initial_reference_points(
    prob: ProblemDefinition,
    seed: int = 0,
    samples: int | None = None,
    ideal=None,
    nadir=None,
) -> ReferencePoints:
    """Coarse-sample the domain for initial ideal/nadir estimates.

    Componentwise min/max over the sampled images (midpoint, corners for
    small n, and seeded uniform points). Explicit ideal/nadir override
    the sampling. A collapsed range is widened to keep normalization
    defined.
    """
    if ideal is not None and nadir is not None:
        return ReferencePoints(np.asarray(ideal, float), np.asarray(nadir, float))
    if samples is None:
        samples = 1024 * prob.n
    rng = np.random.default_rng([int(seed), 0x5EED])
    lo, hi = prob.domain.lower, prob.domain.upper
    pts = [0.5 * (lo + hi)[None, :], lo + (hi - lo) * rng.random((samples, prob.n))]
    if 2 ** prob.n <= 256:
        corners = np.array(np.meshgrid(*[(l, h) for l, h in zip(lo, hi)], indexing="ij"))
        pts.append(corners.reshape(prob.n, -1).T)
    X = np.vstack(pts)
    F = prob.evaluate_objectives(X)
    lo_f = F.min(axis=0)
    hi_f = F.max(axis=0)
    flat = hi_f - lo_f <= 0.0
    hi_f = np.where(flat, lo_f + 1.0, hi_f)
    if ideal is not None:
        lo_f = np.asarray(ideal, float)
    if nadir is not None:
        hi_f = np.asarray(nadir, float)
    return ReferencePoints(lo_f, hi_f)


def _slopes(prob, fn, width_count, rng, samples):
    """Max finite-difference slope per output over sampled point pairs.

    Half the pairs are independent uniform draws (global secants), half
    are short steps along random directions (local slopes); the max over
    both tracks steep narrow features much better than far-apart pairs
    alone.
    """
    lo, hi = prob.domain.lower, prob.domain.upper
    span = hi - lo
    diam = float(np.linalg.norm(span))
    n_long = samples // 2
    n_short = samples - n_long

    best = np.zeros(width_count)
    for kind, count in (("long", n_long), ("short", n_short)):
        if count == 0:
            continue
        X = lo + span * rng.random((count, prob.n))
        if kind == "long":
            X2 = lo + span * rng.random((count, prob.n))
        else:
            direction = rng.standard_normal((count, prob.n))
            norms = np.linalg.norm(direction, axis=1, keepdims=True)
            norms[norms == 0.0] = 1.0
            X2 = np.clip(X + (1e-4 * diam) * direction / norms, lo, hi)
        dx = np.linalg.norm(X2 - X, axis=1)
        ok = dx > 0.0
        if not np.any(ok):
            continue
        dF = np.abs(np.asarray(fn(X2[ok]), dtype=float) - np.asarray(fn(X[ok]), dtype=float))
        best = np.maximum(best, (dF / dx[ok, None]).max(axis=0))
    return best


def estimate_lipschitz(prob: ProblemDefinition, samples: int = 100_000,
                       safety: float = 1.5, seed: int = 1729) -> np.ndarray:
    """Per-objective safety * max sampled slope |f(x)-f(x')| / ||x-x'||.

    Deterministic for a given seed. A constant objective yields 0; the
    solver clamps to its configured floor.
    """
    if safety <= 0:
        raise ValueError("safety must be positive")
    rng = np.random.default_rng([int(seed), 0xF])
    return safety * _slopes(prob, prob.evaluate_objectives, prob.m, rng, int(samples))


def estimate_constraint_lipschitz(prob: ProblemDefinition, samples: int = 100_000,
                                  safety: float = 1.5, seed: int = 1729) -> np.ndarray | None:
    """Same sampling scheme applied to the constraint evaluator."""
    if prob.p == 0:
        return None
    rng = np.random.default_rng([int(seed), 0x6])
    return safety * _slopes(prob, prob.evaluate_constraints, prob.p, rng, int(samples))
