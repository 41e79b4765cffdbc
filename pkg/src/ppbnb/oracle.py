"""Brute-force ground truth on dense grids for small instances.

The oracle evaluates a problem on a uniform grid (n <= 3), keeps the
feasible points, and extracts the nondominated front. Trade-off-bounded
fronts come from a deliberately separate filter that scores differences
with the min/sum cone membership form instead of reusing the T-map code
path, so the two implementations cross-check each other in tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cone import validate_eps
from .problems import ProblemDefinition, ReferencePoints, normalize

DEFAULT_RESOLUTION = {1: 4096, 2: 512, 3: 64}
MAX_ORACLE_DIM = 3


@dataclass
class GridOracle:
    """Feasible grid points with images and the nondominated front."""

    problem_name: str
    resolution: int
    points: np.ndarray
    images: np.ndarray
    front_points: np.ndarray
    front_images: np.ndarray
    spacing: float

    def proper_front(self, eps: float) -> tuple[np.ndarray, np.ndarray]:
        return oracle_proper_front(self, eps)


def default_resolution(n: int) -> int:
    return DEFAULT_RESOLUTION.get(n, 64)


def _pareto_mask(images: np.ndarray) -> np.ndarray:
    """Nondominated mask by repeated lexicographic-minimum culling."""
    n = images.shape[0]
    mask = np.zeros(n, dtype=bool)
    if n == 0:
        return mask
    order = np.lexsort(images.T[::-1])
    rest = images[order]
    idx = order.copy()
    while len(rest) > 0:
        head = rest[0]
        eq = np.all(rest == head, axis=1)
        mask[idx[eq]] = True
        dom = np.all(rest >= head, axis=1) & np.any(rest > head, axis=1)
        keep = ~(dom | eq)
        rest = rest[keep]
        idx = idx[keep]
    return mask


def build_grid_oracle(prob: ProblemDefinition, resolution: int | None = None) -> GridOracle:
    """Evaluate the problem on a uniform grid and extract the front.

    Guarded to n <= 3; larger decision spaces are out of oracle reach.
    """
    if prob.n > MAX_ORACLE_DIM:
        raise ValueError(f"grid oracle supports n <= {MAX_ORACLE_DIM}, got n={prob.n}")
    if resolution is None:
        resolution = default_resolution(prob.n)
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    axes = [np.linspace(lo, hi, resolution)
            for lo, hi in zip(prob.domain.lower, prob.domain.upper)]
    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.stack([m.ravel() for m in mesh], axis=1)
    images = prob.evaluate_objectives(points)
    if prob.p:
        feasible = np.all(prob.evaluate_constraints(points) >= 0.0, axis=1)
        points, images = points[feasible], images[feasible]
    mask = _pareto_mask(images)
    spacing = float(np.max((prob.domain.upper - prob.domain.lower) / (resolution - 1)))
    return GridOracle(
        problem_name=prob.name,
        resolution=resolution,
        points=points,
        images=images,
        front_points=points[mask],
        front_images=images[mask],
        spacing=spacing,
    )


def _cone_filter_minsum(images: np.ndarray, eps: float) -> np.ndarray:
    """Nondominance mask under the widened cone, via the membership form.

    A point y is dominated by z exactly when every component of
    (1 - eps) * (y - z) + eps * sum(y - z) is nonnegative and y != z.
    Outer loop per point, inner comparisons vectorized; no code shared
    with the T-map implementation.
    """
    n, m = images.shape
    keep = np.ones(n, dtype=bool)
    total = images.sum(axis=1)
    for i in range(n):
        diff = images[i] - images
        diff_total = total[i] - total
        scores = (1.0 - eps) * diff + eps * diff_total[:, None]
        dominates_i = np.all(scores >= 0.0, axis=1) & np.any(images != images[i], axis=1)
        dominates_i[i] = False
        if np.any(dominates_i):
            keep[i] = False
    return keep


def oracle_proper_front(o: GridOracle, eps: float) -> tuple[np.ndarray, np.ndarray]:
    """Feasible grid points whose images no other feasible image
    eps-dominates; returns (points, images).

    Every such point is Pareto optimal on the grid, and any dominator of
    a front member is itself beaten by a front member, so filtering the
    Pareto front alone gives the same set as filtering all images.
    """
    eps = validate_eps(eps)
    mask = _cone_filter_minsum(o.front_images, eps)
    return o.front_points[mask], o.front_images[mask]


def export_front_csv(path, points: np.ndarray, images: np.ndarray,
                     ref: ReferencePoints | None = None) -> None:
    """Write a front in the solver's solutions CSV schema."""
    import csv

    points = np.atleast_2d(points)
    images = np.atleast_2d(images)
    n = points.shape[1] if points.size else 0
    m = images.shape[1] if images.size else 0
    header = ([f"x{i + 1}" for i in range(n)] + [f"f{i + 1}" for i in range(m)]
              + [f"f{i + 1}_norm" for i in range(m)])
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for x, f in zip(points, images):
            fn = normalize(f, ref) if ref is not None else f
            writer.writerow([repr(float(v)) for v in (*x, *f, *fn)])
