"""Trade-off-bounded dominance in objective space.

The order is induced by the linear map T_eps with 1 on the diagonal and
eps on all off-diagonal entries: a vector a eps-dominates b when
T_eps(a) <= T_eps(b) componentwise and a != b. At eps = 0 this is plain
Pareto dominance; as eps grows the ordering cone widens, so fewer points
survive nondominance filtering. eps = 1 is rejected everywhere because
the map degenerates to comparing objective sums.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError, DimensionError


def validate_eps(eps: float) -> float:
    """Check 0 <= eps < 1 and return eps as a float."""
    eps = float(eps)
    if not 0.0 <= eps < 1.0:
        raise ConfigError(f"eps must lie in [0, 1), got {eps}")
    return eps


def apply_t_eps(y, eps: float) -> np.ndarray:
    """Apply T_eps: component i maps to y_i + eps * sum_{j != i} y_j.

    Accepts a single m-vector or an (N, m) batch; m >= 2 required.
    """
    y = np.asarray(y, dtype=float)
    m = y.shape[-1]
    if m < 2:
        raise DimensionError(f"T_eps needs at least 2 objectives, got m={m}")
    s = y.sum(axis=-1, keepdims=True)
    return y + eps * (s - y)


def _check_pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a, b


def pareto_dominates(a, b) -> bool:
    """True when a <= b componentwise and a != b."""
    a, b = _check_pair(a, b)
    return bool(np.all(a <= b) and np.any(a != b))


def eps_dominates(a, b, eps: float, tol: float = 0.0) -> bool:
    """True when T_eps(a) <= T_eps(b) componentwise and a != b.

    tol is an absolute slack added to the comparison (default 0, exact
    IEEE comparison; the Lipschitz bounds already carry their own
    safety margin).
    """
    a, b = _check_pair(a, b)
    if np.array_equal(a, b):
        return False
    return bool(np.all(apply_t_eps(a, eps) <= apply_t_eps(b, eps) + tol))


def filter_non_eps_dominated(items, eps: float, tol: float = 0.0) -> list:
    """Keep the elements not eps-dominated by any other element.

    ``items`` is a sequence of (vector, payload) pairs; payloads travel
    with their vectors and the input order is preserved. Duplicate
    vectors are all retained (they never dominate each other). The scan
    is the O(N^2) pairwise sweep with an early exit per row; archive
    sizes at desk scale do not justify anything fancier.
    """
    items = list(items)
    if not items:
        return []
    vecs = np.asarray([np.asarray(v, dtype=float) for v, _ in items])
    tv = apply_t_eps(vecs, eps)
    keep = []
    for i in range(len(items)):
        dominated = False
        le = np.all(tv <= tv[i] + tol, axis=1)
        if np.any(le):
            eq = np.all(vecs == vecs[i], axis=1)
            dominated = bool(np.any(le & ~eq))
        if not dominated:
            keep.append(items[i])
    return keep


def non_eps_dominated_mask(vectors, eps: float, tol: float = 0.0) -> np.ndarray:
    """Boolean mask of the non-eps-dominated rows of an (N, m) array.

    Fast path for the solver's per-iteration lower-bound filtering,
    where N reaches 1e4-1e5 and the pairwise sweep is too slow. Agrees
    exactly with filter_non_eps_dominated (property-tested).
    """
    vectors = np.asarray(vectors, dtype=float)
    if vectors.size == 0:
        return np.zeros(0, dtype=bool)
    tv = apply_t_eps(vectors, eps)
    if tol != 0.0:
        # Slackened comparisons break the sweep's transitivity assumptions.
        kept = filter_non_eps_dominated(
            [(v, i) for i, v in enumerate(vectors)], eps, tol
        )
        mask = np.zeros(len(vectors), dtype=bool)
        mask[[i for _, i in kept]] = True
        return mask
    if tv.shape[1] == 2:
        return _mask_sweep_2d(tv)
    return _mask_cull(tv)


def _mask_sweep_2d(tv: np.ndarray) -> np.ndarray:
    """Sort-and-sweep nondominance mask in the transformed plane."""
    n = tv.shape[0]
    order = np.lexsort((tv[:, 1], tv[:, 0]))
    s0 = tv[order, 0]
    s1 = tv[order, 1]
    new_group = np.empty(n, dtype=bool)
    new_group[0] = True
    new_group[1:] = s0[1:] != s0[:-1]
    group_idx = np.cumsum(new_group) - 1
    starts = np.flatnonzero(new_group)
    # Within a group rows are sorted by s1, so the group head holds its min.
    group_min = s1[starts]
    prev_min = np.empty(len(starts))
    prev_min[0] = np.inf
    if len(starts) > 1:
        prev_min[1:] = np.minimum.accumulate(group_min)[:-1]
    # Dominators from strictly smaller s0 need s1 <=; within a group they
    # need strictly smaller s1 (equal pairs are exact duplicates).
    dominated_sorted = (prev_min[group_idx] <= s1) | (s1 > group_min[group_idx])
    mask = np.empty(n, dtype=bool)
    mask[order] = ~dominated_sorted
    return mask


def _mask_cull(tv: np.ndarray) -> np.ndarray:
    """Simple cull: pop the lexicographic minimum, drop what it dominates."""
    n = tv.shape[0]
    order = np.lexsort(tv.T[::-1])
    rest = tv[order]
    idx = order.copy()
    mask = np.zeros(n, dtype=bool)
    while len(rest) > 0:
        head = rest[0]
        eq = np.all(rest == head, axis=1)
        mask[idx[eq]] = True
        dom = np.all(rest >= head, axis=1) & np.any(rest > head, axis=1)
        keep = ~(dom | eq)
        rest = rest[keep]
        idx = idx[keep]
    return mask
