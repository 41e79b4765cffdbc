"""Per-box bounds: Lipschitz lower bounds, midpoint upper bounds, and
the provable-infeasibility test.

The lower bound of a box is f(midpoint) - (L/2) * diameter per
objective; it under-estimates every image in the box whenever L is a
valid Lipschitz constant. An upper bound is always the image of a
feasible point found inside the box. A box is provably infeasible when
some constraint's maximum possible value over the box, estimated the
same Lipschitz way, is still negative.

Records store raw-objective values; normalized views are derived from
the current reference points so archives can be renormalized exactly
when the reference points move.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import Box, diameter, midpoint
from .problems import ProblemDefinition, ReferencePoints, normalize

PROVABLY_INFEASIBLE = "provably-infeasible"
UNKNOWN = "unknown"
HAS_FEASIBLE_POINT = "has-feasible-point"

LIPSCHITZ_FLOOR = 1e-12


@dataclass
class BoundRecord:
    """A box with its lower bound and any upper-bound candidates.

    ``lower`` is normalized to the reference points in force when the
    record was built; ``raw_lower`` keeps the unnormalized value.
    ``upper_candidates`` pairs raw objective vectors with their feasible
    preimages.
    """

    box: Box
    lower: np.ndarray
    raw_lower: np.ndarray
    upper_candidates: list[tuple[np.ndarray, np.ndarray]] = field(default_factory=list)
    feasible_status: str = UNKNOWN
    protected: bool = False

    @property
    def box_id(self) -> int:
        return self.box.id


def floored_lipschitz(L, floor: float = LIPSCHITZ_FLOOR) -> np.ndarray:
    """Clamp Lipschitz constants away from zero (constant objectives)."""
    return np.maximum(np.asarray(L, dtype=float), floor)


def raw_lower_bound(prob: ProblemDefinition, f_mid: np.ndarray, diam: float) -> np.ndarray:
    L = floored_lipschitz(prob.lipschitz_f)
    return f_mid - 0.5 * L * diam


def lipschitz_lower_bound(prob: ProblemDefinition, b: Box, ref: ReferencePoints) -> np.ndarray:
    """Normalized lower bound of the box. Requires prob.lipschitz_f."""
    f_mid = prob.evaluate_objectives(midpoint(b)[None, :])[0]
    return normalize(raw_lower_bound(prob, f_mid, diameter(b)), ref)


def feasibility_test(prob: ProblemDefinition, b: Box) -> str:
    """'provably-infeasible' when some g_j cannot reach 0 over the box.

    Needs prob.lipschitz_g; without constraint Lipschitz constants (or
    without constraints at all) the answer is always 'unknown'.
    """
    if prob.p == 0 or prob.lipschitz_g is None:
        return UNKNOWN
    g_mid = prob.evaluate_constraints(midpoint(b)[None, :])[0]
    ceiling = g_mid + 0.5 * np.asarray(prob.lipschitz_g, float) * diameter(b)
    return PROVABLY_INFEASIBLE if np.any(ceiling < 0.0) else UNKNOWN


def infeasible_mask(prob: ProblemDefinition, g_mid: np.ndarray, diam) -> np.ndarray:
    """Vectorized feasibility test over midpoints' constraint values."""
    if prob.p == 0 or prob.lipschitz_g is None:
        return np.zeros(g_mid.shape[0], dtype=bool)
    diam = np.asarray(diam, dtype=float).reshape(-1, 1)
    ceiling = g_mid + 0.5 * np.asarray(prob.lipschitz_g, float) * diam
    return np.any(ceiling < 0.0, axis=1)


def midpoint_upper_bound(prob: ProblemDefinition, b: Box,
                         ref: ReferencePoints) -> tuple[np.ndarray, np.ndarray] | None:
    """(normalized image, midpoint) when the midpoint is feasible."""
    x = midpoint(b)
    F = prob.evaluate_objectives(x[None, :])[0]
    G = prob.evaluate_constraints(x[None, :])[0]
    if np.all(G >= 0.0):
        return normalize(F, ref), x
    return None
