"""Mini decomposition-based evolutionary optimizer for per-box upper bounds.

A small-budget MOEA/D with differential-evolution variation runs inside
a single box and returns feasible points (upper-bound preimages). The
population decomposes the box's normalized objectives into Tchebycheff
subproblems on a fixed simplex of weight vectors; offspring replace at
most two neighbors, compared feasibility-first (constraint violation
ascending, then scalarized objective). Objectives are scalarized in
normalized space for consistency with the solver archives.

All randomness for a box derives from (seed, box id), so results do not
depend on scheduling or on which boxes run together in a batch. The
solver drives many boxes through the lockstep batch engine; the
single-box entry point is the same engine with a batch of one.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import combinations
from math import comb

import numpy as np

from .geometry import Box, midpoint
from .problems import ProblemDefinition, ReferencePoints, normalize

WEIGHT_FLOOR = 1e-6


@dataclass(frozen=True)
class MiniMoeaConfig:
    population: int = 10
    generations: int = 20
    neighborhood: int = 5
    de_scale: float = 0.5
    crossover_rate: float = 0.9
    seed: int = 0

    def __post_init__(self):
        if self.population < 4:
            raise ValueError("population must be >= 4 (three donors plus a target)")
        if self.generations < 1:
            raise ValueError("generations must be positive")
        if not 1 <= self.neighborhood <= self.population:
            raise ValueError("neighborhood must lie in [1, population]")
        if not 0.0 < self.de_scale <= 2.0:
            raise ValueError("de_scale must lie in (0, 2]")
        if not 0.0 <= self.crossover_rate <= 1.0:
            raise ValueError("crossover_rate must lie in [0, 1]")


@dataclass(frozen=True)
class Individual:
    """Population member: point, normalized objectives, violation."""

    x: np.ndarray
    objectives: np.ndarray
    violation: float


def constraint_violation(g) -> float:
    """Sum of the negative parts of g (zero iff feasible under g >= 0)."""
    g = np.asarray(g, dtype=float)
    return float(np.maximum(0.0, -g).sum())


def tchebycheff_scalarize(y, weight, ideal) -> float:
    """max_i weight_i * (y_i - ideal_i)."""
    y = np.asarray(y, dtype=float)
    return float(np.max(np.asarray(weight, float) * (y - np.asarray(ideal, float))))


def simplex_weights(m: int, count: int, floor: float = WEIGHT_FLOOR) -> np.ndarray:
    """``count`` weight vectors spread over the unit simplex.

    Uses the smallest uniform lattice with at least ``count`` members and
    takes evenly spaced picks from its lexicographic enumeration, then
    floors each component to keep Tchebycheff terms nondegenerate.
    """
    if count < 1:
        raise ValueError("count must be positive")
    h = 1
    while comb(h + m - 1, m - 1) < count:
        h += 1
    lattice = np.empty((comb(h + m - 1, m - 1), m))
    for row, dividers in enumerate(combinations(range(h + m - 1), m - 1)):
        prev = -1
        for j, d in enumerate(dividers):
            lattice[row, j] = d - prev - 1
            prev = d
        lattice[row, m - 1] = h + m - 2 - prev
    lattice /= h
    picks = np.round(np.linspace(0, len(lattice) - 1, count)).astype(int)
    w = np.maximum(lattice[picks], floor)
    return w / w.sum(axis=1, keepdims=True)


def _neighborhoods(weights: np.ndarray, t: int) -> np.ndarray:
    d = np.linalg.norm(weights[:, None, :] - weights[None, :, :], axis=2)
    return np.argsort(d, axis=1, kind="stable")[:, :t]


def de_offspring(target: Individual, donors, cfg: MiniMoeaConfig, box: Box,
                 rng: np.random.Generator) -> np.ndarray:
    """DE/rand/1 trial vector with binomial crossover, clipped to the box."""
    r1, r2, r3 = donors
    mutant = r1.x + cfg.de_scale * (r2.x - r3.x)
    n = mutant.shape[0]
    mask = rng.random(n) < cfg.crossover_rate
    mask[rng.integers(n)] = True
    trial = np.where(mask, mutant, target.x)
    return np.clip(trial, box.lower, box.upper)


def _distinct_triple(u: np.ndarray, pool_size: int) -> tuple[np.ndarray, ...]:
    """Map three uniforms in [0,1) to three distinct indices < pool_size."""
    a = np.minimum((u[..., 0] * pool_size).astype(int), pool_size - 1)
    b = np.minimum((u[..., 1] * (pool_size - 1)).astype(int), pool_size - 2)
    b = b + (b >= a)
    c = np.minimum((u[..., 2] * (pool_size - 2)).astype(int), pool_size - 3)
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    c = c + (c >= lo)
    c = c + (c >= hi)
    return a, b, c


def run_mini_moea_batch(prob: ProblemDefinition, boxes, ref: ReferencePoints,
                        cfg: MiniMoeaConfig, seed: int | None = None,
                        evaluator=None):
    """Run one mini MOEA per box in lockstep.

    Returns a list with one (X, F_raw, F_norm) triple of feasible rows
    per box (possibly empty). ``evaluator`` overrides the problem's
    batch objective call (the solver passes a thread-chunked wrapper).
    """
    if seed is None:
        seed = cfg.seed
    boxes = list(boxes)
    if not boxes:
        return []
    nb, n, m, pop = len(boxes), prob.n, prob.m, cfg.population
    gens, t = cfg.generations, min(cfg.neighborhood, cfg.population)
    eval_f = evaluator if evaluator is not None else prob.evaluate_objectives

    weights = simplex_weights(m, pop)
    neighbors = _neighborhoods(weights, t)
    pools = []
    for i in range(pop):
        pool = neighbors[i][neighbors[i] != i]
        if len(pool) < 3:
            pool = np.setdiff1d(np.arange(pop), [i])
        pools.append(pool)

    lo = np.array([b.lower for b in boxes])
    hi = np.array([b.upper for b in boxes])

    init_u = np.empty((nb, pop - 1, n))
    donor_u = np.empty((nb, gens, pop, 3))
    cross_u = np.empty((nb, gens, pop, n))
    jrand = np.empty((nb, gens, pop), dtype=int)
    for b, box in enumerate(boxes):
        rng = np.random.default_rng([int(seed), int(box.id)])
        init_u[b] = rng.random((pop - 1, n))
        donor_u[b] = rng.random((gens, pop, 3))
        cross_u[b] = rng.random((gens, pop, n))
        jrand[b] = rng.integers(0, n, size=(gens, pop))

    X = np.empty((nb, pop, n))
    X[:, 0, :] = 0.5 * (lo + hi)
    X[:, 1:, :] = lo[:, None, :] + (hi - lo)[:, None, :] * init_u

    flat = X.reshape(nb * pop, n)
    F = np.asarray(eval_f(flat), dtype=float).reshape(nb, pop, m)
    G = prob.evaluate_constraints(flat).reshape(nb, pop, prob.p)
    V = np.maximum(0.0, -G).sum(axis=2)
    FN = normalize(F, ref)
    z = FN.min(axis=1)

    rows = np.arange(nb)
    for g in range(gens):
        for i in range(pop):
            pool = pools[i]
            a, b_idx, c = _distinct_triple(donor_u[:, g, i, :], len(pool))
            r1, r2, r3 = pool[a], pool[b_idx], pool[c]
            mutant = X[rows, r1] + cfg.de_scale * (X[rows, r2] - X[rows, r3])
            mask = cross_u[:, g, i, :] < cfg.crossover_rate
            mask[rows, jrand[:, g, i]] = True
            trial = np.where(mask, mutant, X[:, i, :])
            trial = np.clip(trial, lo, hi)

            F_t = np.asarray(eval_f(trial), dtype=float)
            G_t = prob.evaluate_constraints(trial)
            V_t = np.maximum(0.0, -G_t).sum(axis=1)
            FN_t = normalize(F_t, ref)
            z = np.minimum(z, FN_t)

            replaced = np.zeros(nb, dtype=int)
            for j in neighbors[i]:
                w_j = weights[j]
                tch_t = np.max(w_j * (FN_t - z), axis=1)
                tch_j = np.max(w_j * (FN[:, j] - z), axis=1)
                better = (V_t < V[:, j]) | ((V_t == V[:, j]) & (tch_t < tch_j))
                allowed = better & (replaced < 2)
                if np.any(allowed):
                    X[allowed, j] = trial[allowed]
                    F[allowed, j] = F_t[allowed]
                    FN[allowed, j] = FN_t[allowed]
                    V[allowed, j] = V_t[allowed]
                replaced += allowed

    results = []
    for b in range(nb):
        feas = V[b] == 0.0
        if not np.any(feas):
            results.append((np.empty((0, n)), np.empty((0, m)), np.empty((0, m))))
            continue
        Xf, Ff, FNf = X[b, feas], F[b, feas], FN[b, feas]
        _, first = np.unique(Xf, axis=0, return_index=True)
        keep = np.sort(first)
        results.append((Xf[keep], Ff[keep], FNf[keep]))
    return results


def run_mini_moea(prob: ProblemDefinition, b: Box, ref: ReferencePoints,
                  cfg: MiniMoeaConfig) -> list[tuple[np.ndarray, np.ndarray]]:
    """Feasible (normalized objectives, point) pairs found inside the box.

    Deterministic for a given (cfg.seed, box id); empty when no feasible
    point was found.
    """
    (x_rows, _, fn_rows), = run_mini_moea_batch(prob, [b], ref, cfg)
    return [(fn_rows[i], x_rows[i]) for i in range(len(x_rows))]
