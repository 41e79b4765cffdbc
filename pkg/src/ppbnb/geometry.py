"""Axis-aligned boxes in decision space and their bisection.

Boxes are immutable value objects carrying a bisection lineage (id,
parent_id, depth). Identifiers are assigned by the caller so that runs
are reproducible regardless of process history.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateBoxError


def _readonly(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Box:
    """Hyperrectangle [lower, upper] with bisection lineage."""

    lower: np.ndarray
    upper: np.ndarray
    id: int = 0
    parent_id: int | None = None
    depth: int = 0

    def __post_init__(self):
        object.__setattr__(self, "lower", _readonly(self.lower))
        object.__setattr__(self, "upper", _readonly(self.upper))
        if self.lower.ndim != 1 or self.lower.shape != self.upper.shape:
            raise ValueError("lower and upper must be 1-d vectors of equal length")
        if np.any(self.lower > self.upper):
            raise ValueError("box requires lower <= upper componentwise")
        if self.depth < 0:
            raise ValueError("depth must be nonnegative")

    @property
    def n(self) -> int:
        return self.lower.shape[0]

    def contains(self, x, atol: float = 0.0) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower - atol) and np.all(x <= self.upper + atol))


def width(b: Box) -> np.ndarray:
    """Componentwise width vector upper - lower."""
    return b.upper - b.lower


def midpoint(b: Box) -> np.ndarray:
    """Center point, component k equal to (lower_k + upper_k) / 2."""
    return 0.5 * (b.lower + b.upper)


def diameter(b: Box) -> float:
    """Euclidean norm of the width vector."""
    return float(np.linalg.norm(width(b)))


def volume(b: Box) -> float:
    return float(np.prod(width(b)))


def bisect(b: Box, first_child_id: int) -> tuple[Box, Box]:
    """Split perpendicular to the direction of maximum width.

    Ties on the maximal width pick the lowest dimension index, so the
    split is deterministic. Children receive ids first_child_id and
    first_child_id + 1, the parent's id as parent_id, and depth + 1.

    Raises DegenerateBoxError for a zero-diameter box.
    """
    w = width(b)
    k = int(np.argmax(w))  # argmax returns the first maximal index
    if w[k] <= 0.0:
        raise DegenerateBoxError(f"cannot bisect zero-diameter box id={b.id}")
    cut = 0.5 * (b.lower[k] + b.upper[k])
    left_upper = b.upper.copy()
    left_upper[k] = cut
    right_lower = b.lower.copy()
    right_lower[k] = cut
    left = Box(b.lower, left_upper, id=first_child_id, parent_id=b.id, depth=b.depth + 1)
    right = Box(right_lower, b.upper, id=first_child_id + 1, parent_id=b.id, depth=b.depth + 1)
    return left, right


def make_root(lower, upper) -> Box:
    """Root box of a subdivision, id 0 and depth 0."""
    return Box(lower, upper, id=0, parent_id=None, depth=0)
