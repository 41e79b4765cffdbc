"""Built-in benchmark problems and the problem registry.

Five problems ship with the package: the MOP bi-objective test problem
with a disconnected two-knee front, the DEB2DK / DEB3DK knee families
(parameter K controls the knee count, n the decision dimension), the
bi-objective welded beam design problem (cost vs end deflection, four
nonlinear constraints), and the five-objective water resource planning
problem (seven constraints).

Water resources note: some reprints of the storm-drainage formulation
carry typographic slips; this module uses the canonical coefficients,
i.e. f3 = 305700*2289*x2/(0.06*2289)^0.65 and g4 = 16000 - 2.098/(x1*x2)
- 8046.33*x3 + 696.71 >= 0.

Lipschitz constants are not part of the classic problem statements.
The registry fills them on first access by sampled estimation
(safety 1.5, 1e5 pairs, fixed seed) and caches the result; callers can
override with explicit vectors.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import UnknownProblemError
from .geometry import make_root
from .problems import (
    ProblemDefinition,
    estimate_constraint_lipschitz,
    estimate_lipschitz,
)

LIPSCHITZ_SAFETY = 1.5
LIPSCHITZ_SAMPLES = 100_000
LIPSCHITZ_SEED = 1729


def _mop_objectives(X):
    x1, x2 = X[:, 0], X[:, 1]
    s = np.sqrt(1.0 + (x1 + x2) ** 2)
    d = np.sqrt(1.0 + (x1 - x2) ** 2)
    bump = np.exp(-((x1 - x2) ** 2))
    f1 = 0.5 * (s + d + x1 - x2) + bump
    f2 = 0.5 * (s + d - x1 + x2) + bump
    return np.stack([f1, f2], axis=1)


def make_mop() -> ProblemDefinition:
    return ProblemDefinition(
        name="MOP", n=2, m=2, p=0,
        domain=make_root([-3.0, -3.0], [3.0, 3.0]),
        objectives=_mop_objectives,
    )


def make_deb2dk(K: int = 4, n: int = 3) -> ProblemDefinition:
    K = _check_knee_params(K, n)

    def objectives(X):
        x1 = X[:, 0]
        g = 1.0 + (9.0 / (n - 1)) * X[:, 1:].sum(axis=1)
        r = 5.0 + 10.0 * (x1 - 0.5) ** 2 + (1.0 / K) * np.cos(2.0 * K * np.pi * x1)
        f1 = g * r * np.sin(0.5 * np.pi * x1)
        f2 = g * r * np.cos(0.5 * np.pi * x1)
        return np.stack([f1, f2], axis=1)

    return ProblemDefinition(
        name="DEB2DK", n=n, m=2, p=0,
        domain=make_root(np.zeros(n), np.ones(n)),
        objectives=objectives,
    )


def make_deb3dk(K: int = 1, n: int = 3) -> ProblemDefinition:
    K = _check_knee_params(K, n)

    def objectives(X):
        x1, x2 = X[:, 0], X[:, 1]
        g = 1.0 + (9.0 / (n - 1)) * X[:, 2:].sum(axis=1)
        r1 = 5.0 + 10.0 * (x1 - 0.5) ** 2 + (1.0 / K) * np.cos(2.0 * K * np.pi * x1)
        r2 = 5.0 + 10.0 * (x2 - 0.5) ** 2 + (1.0 / K) * np.cos(2.0 * K * np.pi * x2)
        r = 0.5 * (r1 + r2)
        s1 = np.sin(0.5 * np.pi * x1)
        f1 = g * r * s1 * np.sin(0.5 * np.pi * x2)
        f2 = g * r * s1 * np.cos(0.5 * np.pi * x2)
        f3 = g * r * np.cos(0.5 * np.pi * x1)
        return np.stack([f1, f2, f3], axis=1)

    return ProblemDefinition(
        name="DEB3DK", n=n, m=3, p=0,
        domain=make_root(np.zeros(n), np.ones(n)),
        objectives=objectives,
    )


def _check_knee_params(K, n) -> int:
    if int(K) != K or K < 1:
        raise ValueError(f"K must be an integer >= 1, got {K}")
    if int(n) != n or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n}")
    return int(K)


def _welded_tau(X):
    x1, x3, x4 = X[:, 0], X[:, 2], X[:, 3]
    tp = 6000.0 / (np.sqrt(2.0) * x1 * x3)
    r2 = 0.25 * (x3 ** 2 + (x1 + x4) ** 2)
    tpp = (6000.0 * (14.0 + 0.5 * x3) * np.sqrt(r2)
           / (1.414 * x1 * x3 * (x3 ** 2 / 12.0 + 0.25 * (x1 + x4) ** 2)))
    return np.sqrt(tp ** 2 + tpp ** 2 + (x3 * tp * tpp) / np.sqrt(r2))


def _welded_objectives(X):
    x1, x2, x3, x4 = X.T
    f1 = 1.10471 * x1 ** 2 * x3 + 0.04811 * x2 * x4 * (14.0 + x3)
    f2 = 2.1592 / (x2 * x4 ** 3)
    return np.stack([f1, f2], axis=1)


def _welded_constraints(X):
    x1, x2, x4 = X[:, 0], X[:, 1], X[:, 3]
    sigma = 504000.0 / (x2 * x4 ** 2)
    pc = 64746.022 * (1.0 - 0.0282346 * x4) * x4 * x2 ** 3
    g1 = 13600.0 - _welded_tau(X)
    g2 = 30000.0 - sigma
    g3 = x2 - x1
    g4 = pc - 6000.0
    return np.stack([g1, g2, g3, g4], axis=1)


def make_welded_beam() -> ProblemDefinition:
    return ProblemDefinition(
        name="welded-beam", n=4, m=2, p=4,
        domain=make_root([0.125, 0.125, 0.1, 0.1], [5.0, 5.0, 10.0, 10.0]),
        objectives=_welded_objectives,
        constraints=_welded_constraints,
    )


def _water_objectives(X):
    x1, x2, x3 = X.T
    f1 = 106780.37 * (x2 + x3) + 61704.67
    f2 = 3000.0 * x1
    f3 = 305700.0 * 2289.0 * x2 / (0.06 * 2289.0) ** 0.65
    f4 = 250.0 * 2289.0 * np.exp(-39.75 * x2 + 9.9 * x3 + 2.74)
    f5 = 25.0 * (1.39 / (x1 * x2) + 4940.0 * x3 - 80.0)
    return np.stack([f1, f2, f3, f4, f5], axis=1)


def _water_constraints(X):
    x1, x2, x3 = X.T
    prod = x1 * x2
    g1 = 1.0 - (0.00139 / prod + 4.94 * x3 - 0.08)
    g2 = 1.0 - (0.000306 / prod + 1.082 * x3 - 0.0986)
    g3 = 50000.0 - (12.307 / prod + 49408.24 * x3 + 4051.02)
    g4 = 16000.0 - (2.098 / prod + 8046.33 * x3 - 696.71)
    g5 = 10000.0 - (2.138 / prod + 7883.39 * x3 - 705.04)
    g6 = 2000.0 - (0.417 * prod + 1721.26 * x3 - 136.54)
    g7 = 550.0 - (0.164 / prod + 631.13 * x3 - 54.48)
    return np.stack([g1, g2, g3, g4, g5, g6, g7], axis=1)


def make_water_resources() -> ProblemDefinition:
    return ProblemDefinition(
        name="water-resources", n=3, m=5, p=7,
        domain=make_root([0.01, 0.01, 0.01], [0.45, 0.1, 0.1]),
        objectives=_water_objectives,
        constraints=_water_constraints,
    )


# name -> (factory, default params, default (tol, delta))
_REGISTRY: dict[str, tuple[Callable[..., ProblemDefinition], dict, tuple[float, float]]] = {
    "MOP": (make_mop, {}, (0.001, 0.0001)),
    "DEB2DK": (make_deb2dk, {"K": 4, "n": 3}, (0.0015, 0.00015)),
    "DEB3DK": (make_deb3dk, {"K": 1, "n": 3}, (0.006, 0.008)),
    "welded-beam": (make_welded_beam, {}, (0.3, 0.02)),
    "water-resources": (make_water_resources, {}, (0.1, 0.02)),
}

_LIPSCHITZ_CACHE: dict[tuple, tuple] = {}


def available_problems() -> list[str]:
    return list(_REGISTRY)


def register_problem(name: str, factory: Callable[..., ProblemDefinition],
                     defaults: dict | None = None,
                     tolerance_defaults: tuple[float, float] = (0.05, 0.05)) -> None:
    """Register a user problem under a name resolvable by get_problem."""
    _REGISTRY[name] = (factory, dict(defaults or {}), tolerance_defaults)


def default_tolerances(name: str) -> tuple[float, float]:
    return _lookup(name)[2]


def _lookup(name: str):
    for key, entry in _REGISTRY.items():
        if key.lower() == str(name).lower():
            return entry
    raise UnknownProblemError(
        f"unknown problem {name!r}; available: {', '.join(_REGISTRY)}"
    )


def get_problem(name: str, params: dict | None = None, *,
                lipschitz_f=None, lipschitz_g=None,
                estimate: bool = True) -> ProblemDefinition:
    """Build a registered problem with Lipschitz constants attached.

    ``params`` are factory keyword arguments (e.g. K and n for the knee
    families); unknown keys raise. Explicit lipschitz vectors override
    the cached sampled estimates; estimate=False leaves missing
    constants unset.
    """
    factory, defaults, _ = _lookup(name)
    merged = dict(defaults)
    for key, value in (params or {}).items():
        if key not in defaults:
            raise ValueError(f"problem {name!r} takes no parameter {key!r}")
        merged[key] = value
    prob = factory(**merged)

    if lipschitz_f is None and estimate:
        lipschitz_f, cached_g = _cached_constants(prob, name, merged)
        if lipschitz_g is None:
            lipschitz_g = cached_g
    return prob.with_lipschitz(lipschitz_f, lipschitz_g)


def _cached_constants(prob: ProblemDefinition, name: str, params: dict):
    key = (name.lower(), tuple(sorted(params.items())))
    if key not in _LIPSCHITZ_CACHE:
        lf = estimate_lipschitz(prob, LIPSCHITZ_SAMPLES, LIPSCHITZ_SAFETY, LIPSCHITZ_SEED)
        lg = estimate_constraint_lipschitz(prob, LIPSCHITZ_SAMPLES, LIPSCHITZ_SAFETY, LIPSCHITZ_SEED)
        _LIPSCHITZ_CACHE[key] = (lf, lg)
    return _LIPSCHITZ_CACHE[key]
