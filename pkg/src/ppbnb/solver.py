"""Parallel breadth-first branch and bound with a cone-dominance
discarding test.

Each iteration bisects every live box perpendicular to its widest side
(so all boxes share one diameter w_k), drops provably infeasible boxes,
computes Lipschitz lower bounds, filters them to a non-eps-dominated
archive L_k, runs the upper-bound provider (box midpoints or the mini
MOEA) on the boxes behind L_k, filters the feasible images to the upper
archive U_k, and discards any unprotected box whose lower bound is
eps-dominated by some member of U_k. Boxes holding the componentwise
extremes of the current bounds are protected from discarding so the
ideal/nadir estimates keep improving. The loop ends when the directed
Hausdorff gap from U_k to L_k falls to tol_eps and w_k falls to
tol_delta, or at max_iterations, or when no boxes remain.

Everything order-sensitive is keyed by box id, and all randomness is
derived from (seed, box id), so results are bitwise independent of
thread count.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .bounding import floored_lipschitz, infeasible_mask
from .cone import apply_t_eps, non_eps_dominated_mask, validate_eps
from .errors import BoxBudgetError, ConfigError, EmptySetError
from .geometry import Box, bisect, make_root
from .moea import MiniMoeaConfig, run_mini_moea_batch
from .problems import (
    ProblemDefinition,
    ReferencePoints,
    initial_reference_points,
    normalize,
    update_reference_points,
)

D_INIT = 1e6

TERMINATION_CONVERGED = "converged"
TERMINATION_MAX_ITERATIONS = "max-iterations"
TERMINATION_DEGENERATE = "degenerate"


@dataclass(frozen=True)
class SolverConfig:
    """Run parameters. proper_eps shapes the dominance cone; tol_eps is
    the archive gap target in normalized objective units; tol_delta the
    box diameter target in decision units."""

    proper_eps: float = 0.75
    tol_eps: float = 0.05
    tol_delta: float = 0.05
    max_iterations: int = 60
    ub_mode: str = "moea"
    moea: MiniMoeaConfig = field(default_factory=MiniMoeaConfig)
    threads: int = 1
    seed: int = 0
    max_boxes: int = 2 ** 20
    dominance_tol: float = 0.0
    lipschitz_floor: float = 1e-12
    ideal: tuple | None = None
    nadir: tuple | None = None

    def validate(self) -> None:
        validate_eps(self.proper_eps)
        if self.tol_eps <= 0 or self.tol_delta <= 0:
            raise ConfigError("tol_eps and tol_delta must be positive")
        if self.max_iterations < 0:
            raise ConfigError("max_iterations must be nonnegative")
        if self.ub_mode not in ("midpoint", "moea"):
            raise ConfigError(f"ub_mode must be 'midpoint' or 'moea', got {self.ub_mode!r}")
        if self.threads < 1:
            raise ConfigError("threads must be positive")
        if self.seed < 0:
            raise ConfigError("seed must be nonnegative")
        if self.max_boxes < 2:
            raise ConfigError("max_boxes must allow at least one bisection")


@dataclass
class IterationStats:
    """One trace row per iteration."""

    iteration: int
    n_boxes: int
    n_infeasible: int
    n_discarded: int
    n_lower: int
    n_upper: int
    w: float
    d: float
    lipschitz_norm: float
    wall_time: float


@dataclass
class IterationSnapshot:
    """Full view of one iteration, passed to solve()'s on_iteration hook."""

    iteration: int
    boxes: list[Box]
    lower_norm: np.ndarray
    lower_raw: np.ndarray
    lower_mask: np.ndarray
    upper_norm: np.ndarray
    upper_raw: np.ndarray
    solutions: np.ndarray
    discard_flags: np.ndarray
    protected: np.ndarray
    live_boxes: list[Box]
    ref: ReferencePoints
    w: float


@dataclass
class SolverState:
    """Final archives of a run; raw values plus views normalized to the
    final reference points."""

    iteration: int
    boxes: list[Box]
    lower_raw: np.ndarray
    lower_norm: np.ndarray
    upper_raw: np.ndarray
    upper_norm: np.ndarray
    solutions: np.ndarray
    ref: ReferencePoints
    w: float
    d: float


@dataclass
class RunResult:
    state: SolverState
    trace: list[IterationStats]
    termination: str
    eps_efficiency: float

    @property
    def converged(self) -> bool:
        return self.termination == TERMINATION_CONVERGED


def directed_hausdorff(a, b) -> float:
    """max over a of the distance to the nearest point of b."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    if a.size == 0 or b.size == 0:
        raise EmptySetError("directed Hausdorff distance needs nonempty sets")
    bb = (b * b).sum(axis=1)
    worst = 0.0
    for start in range(0, a.shape[0], 512):
        chunk = a[start:start + 512]
        sq = (chunk * chunk).sum(axis=1)[:, None] + bb[None, :] - 2.0 * chunk @ b.T
        worst = max(worst, float(np.sqrt(np.maximum(sq, 0.0)).min(axis=1).max()))
    return worst


def hausdorff(a, b) -> float:
    """max of the two directed distances."""
    return max(directed_hausdorff(a, b), directed_hausdorff(b, a))


def _discard_flags(lower_norm: np.ndarray, upper_norm: np.ndarray,
                   eps: float, tol: float = 0.0) -> np.ndarray:
    """Flag rows of lower_norm eps-dominated by some archive member."""
    n = lower_norm.shape[0]
    if upper_norm.size == 0 or n == 0:
        return np.zeros(n, dtype=bool)
    tl = apply_t_eps(lower_norm, eps)
    tu = apply_t_eps(upper_norm, eps)
    flags = np.zeros(n, dtype=bool)
    for start in range(0, n, 512):
        sl = slice(start, start + 512)
        le = np.all(tu[None, :, :] <= tl[sl][:, None, :] + tol, axis=2)
        eq = np.all(upper_norm[None, :, :] == lower_norm[sl][:, None, :], axis=2)
        flags[sl] = np.any(le & ~eq, axis=1)
    return flags


def discarding_pass(records, upper_archive, proper_eps: float,
                    tol: float = 0.0) -> list[int]:
    """Flags (1 = discard) per record, in input order.

    A record is flagged when some archive vector eps-dominates its
    (normalized) lower bound and the record is not protected.
    """
    if not records:
        return []
    lower = np.asarray([r.lower for r in records], dtype=float)
    upper = np.asarray(list(upper_archive), dtype=float)
    if upper.ndim == 1:
        upper = upper.reshape(0, lower.shape[1]) if upper.size == 0 else upper[None, :]
    protected = np.asarray([r.protected for r in records], dtype=bool)
    flags = _discard_flags(lower, upper, proper_eps, tol) & ~protected
    return [int(f) for f in flags]


def _protected_mask(lower_raw: np.ndarray, upper_best: np.ndarray | None,
                    has_upper: np.ndarray | None) -> np.ndarray:
    """Protect the argmin of each lower-bound component and the argmax
    of each upper-candidate component (first index wins ties; rows are
    in ascending box-id order)."""
    n = lower_raw.shape[0]
    mask = np.zeros(n, dtype=bool)
    if n == 0:
        return mask
    mask[np.argmin(lower_raw, axis=0)] = True
    if upper_best is not None and has_upper is not None and np.any(has_upper):
        idx = np.flatnonzero(has_upper)
        mask[idx[np.argmax(upper_best[idx], axis=0)]] = True
    return mask


def mark_protected(records: list) -> list:
    """Set the protected flag on extreme records and return the list."""
    if not records:
        return records
    order = sorted(range(len(records)), key=lambda i: records[i].box_id)
    lower = np.asarray([records[i].raw_lower for i in order], dtype=float)
    has_upper = np.asarray([bool(records[i].upper_candidates) for i in order])
    upper_best = np.full(lower.shape, -np.inf)
    for row, i in enumerate(order):
        cands = records[i].upper_candidates
        if cands:
            upper_best[row] = np.max([np.asarray(u, float) for u, _ in cands], axis=0)
    mask = _protected_mask(lower, upper_best, has_upper)
    for row, i in enumerate(order):
        records[i].protected = bool(mask[row])
    return records


def check_eps_efficient(x, eps_val: float, prob: ProblemDefinition, witnesses,
                        ref: ReferencePoints | None = None) -> bool:
    """False iff some witness improves on x by at least eps_val in every
    objective. Comparisons run in raw objective space, or normalized
    space when ref is given."""
    x = np.asarray(x, dtype=float)
    witnesses = np.atleast_2d(np.asarray(witnesses, dtype=float))
    if witnesses.size == 0:
        return True
    fx = prob.evaluate_objectives(x[None, :])[0]
    fw = prob.evaluate_objectives(witnesses)
    if ref is not None:
        fx = normalize(fx, ref)
        fw = normalize(fw, ref)
    return not bool(np.any(np.all(fw <= fx - eps_val, axis=1)))


def _make_evaluator(prob: ProblemDefinition, pool: ThreadPoolExecutor | None, threads: int):
    if pool is None:
        return prob.evaluate_objectives

    def evaluate(X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[0] < 4 * threads:
            return prob.evaluate_objectives(X)
        chunks = np.array_split(X, threads)
        return np.vstack(list(pool.map(prob.evaluate_objectives, chunks)))

    return evaluate


def _check_inputs(prob: ProblemDefinition, config: SolverConfig) -> None:
    config.validate()
    if prob.lipschitz_f is None:
        raise ConfigError(
            f"problem {prob.name!r} carries no Lipschitz constants; "
            "set lipschitz_f (estimate_lipschitz can produce them)"
        )


def solve(prob: ProblemDefinition, config: SolverConfig, on_iteration=None) -> RunResult:
    """Run the branch and bound loop; see the module docstring."""
    _check_inputs(prob, config)
    eps = config.proper_eps
    m = prob.m
    L_raw = floored_lipschitz(prob.lipschitz_f, config.lipschitz_floor)
    ref = initial_reference_points(prob, seed=config.seed,
                                   ideal=config.ideal, nadir=config.nadir)
    moea_cfg = replace(config.moea, seed=config.seed)

    pool = ThreadPoolExecutor(config.threads) if config.threads > 1 else None
    evaluator = _make_evaluator(prob, pool, config.threads)

    root = make_root(prob.domain.lower, prob.domain.upper)
    boxes: list[Box] = [root]
    next_id = 1
    w = float(np.linalg.norm(root.upper - root.lower))
    d = D_INIT
    trace: list[IterationStats] = []
    termination = None
    k = 0

    empty_m = np.empty((0, m))
    final_upper_raw = empty_m
    final_solutions = np.empty((0, prob.n))
    final_lower_raw = empty_m

    try:
        while d > config.tol_eps or w > config.tol_delta:
            if k >= config.max_iterations:
                termination = TERMINATION_MAX_ITERATIONS
                break
            k += 1
            t0 = time.perf_counter()

            if 2 * len(boxes) > config.max_boxes:
                raise BoxBudgetError(
                    f"iteration {k} would create {2 * len(boxes)} boxes "
                    f"(cap {config.max_boxes}); loosen tolerances or raise max_boxes"
                )
            bisected: list[Box] = []
            for b in boxes:
                c1, c2 = bisect(b, next_id)
                next_id += 2
                bisected.append(c1)
                bisected.append(c2)
            boxes = bisected

            lows = np.array([b.lower for b in boxes])
            highs = np.array([b.upper for b in boxes])
            diams = np.linalg.norm(highs - lows, axis=1)
            w = float(diams.max())
            mids = 0.5 * (lows + highs)

            f_mid = evaluator(mids)
            g_mid = prob.evaluate_constraints(mids)
            dead = infeasible_mask(prob, g_mid, diams)
            n_infeasible = int(dead.sum())
            if n_infeasible:
                keep = ~dead
                boxes = [b for b, k_ in zip(boxes, keep) if k_]
                f_mid, g_mid, diams = f_mid[keep], g_mid[keep], diams[keep]
                lows, highs, mids = lows[keep], highs[keep], mids[keep]
            if not boxes:
                termination = TERMINATION_DEGENERATE
                trace.append(IterationStats(k, 0, n_infeasible, 0, 0, 0, w, d,
                                            float(np.linalg.norm(L_raw / ref.range)),
                                            time.perf_counter() - t0))
                break

            raw_lower = f_mid - 0.5 * L_raw * diams[:, None]
            lower_norm = normalize(raw_lower, ref)

            lk_mask = non_eps_dominated_mask(lower_norm, eps, config.dominance_tol)
            bbar_idx = np.flatnonzero(lk_mask)

            if config.ub_mode == "midpoint":
                mid_ok = np.all(g_mid[bbar_idx] >= 0.0, axis=1) if prob.p else \
                    np.ones(len(bbar_idx), dtype=bool)
                owners = bbar_idx[mid_ok]
                upper_raw = f_mid[owners]
                upper_x = mids[owners]
            else:
                runs = run_mini_moea_batch(prob, [boxes[i] for i in bbar_idx], ref,
                                           moea_cfg, seed=config.seed,
                                           evaluator=evaluator)
                xs, fs, own = [], [], []
                for j, (x_rows, f_rows, _) in enumerate(runs):
                    if len(x_rows):
                        xs.append(x_rows)
                        fs.append(f_rows)
                        own.append(np.full(len(x_rows), bbar_idx[j]))
                if xs:
                    upper_x = np.vstack(xs)
                    upper_raw = np.vstack(fs)
                    owners = np.concatenate(own)
                else:
                    upper_x = np.empty((0, prob.n))
                    upper_raw = empty_m
                    owners = np.empty(0, dtype=int)

            if len(upper_raw):
                upper_norm_all = normalize(upper_raw, ref)
                uk_mask = non_eps_dominated_mask(upper_norm_all, eps, config.dominance_tol)
                uk_raw = upper_raw[uk_mask]
                uk_norm = upper_norm_all[uk_mask]
                uk_x = upper_x[uk_mask]
            else:
                uk_raw = empty_m
                uk_norm = empty_m
                uk_x = np.empty((0, prob.n))

            upper_best = np.full(raw_lower.shape, -np.inf)
            if len(upper_raw):
                np.maximum.at(upper_best, owners, upper_raw)
            has_upper = np.isfinite(upper_best[:, 0])
            protected = _protected_mask(raw_lower, upper_best, has_upper)

            flags = _discard_flags(lower_norm, uk_norm, eps, config.dominance_tol)
            flags &= ~protected
            n_discarded = int(flags.sum())
            live = [b for b, f in zip(boxes, flags) if not f]

            ref = update_reference_points(ref, raw_lower,
                                          upper_raw if len(upper_raw) else np.empty((0, m)))

            lk_raw = raw_lower[lk_mask]
            if len(uk_raw):
                d = directed_hausdorff(normalize(uk_raw, ref), normalize(lk_raw, ref))
                final_upper_raw, final_solutions = uk_raw, uk_x
            final_lower_raw = lk_raw

            if on_iteration is not None:
                on_iteration(IterationSnapshot(
                    iteration=k, boxes=boxes, lower_norm=lower_norm,
                    lower_raw=raw_lower, lower_mask=lk_mask, upper_norm=uk_norm,
                    upper_raw=uk_raw, solutions=uk_x, discard_flags=flags,
                    protected=protected, live_boxes=live, ref=ref, w=w,
                ))

            trace.append(IterationStats(
                iteration=k, n_boxes=len(live), n_infeasible=n_infeasible,
                n_discarded=n_discarded, n_lower=int(lk_mask.sum()),
                n_upper=len(uk_raw), w=w, d=d,
                lipschitz_norm=float(np.linalg.norm(L_raw / ref.range)),
                wall_time=time.perf_counter() - t0,
            ))

            boxes = live
            if not boxes:
                termination = TERMINATION_DEGENERATE
                break
        if termination is None:
            termination = TERMINATION_CONVERGED
    finally:
        if pool is not None:
            pool.shutdown(wait=True)

    state = SolverState(
        iteration=k,
        boxes=boxes,
        lower_raw=final_lower_raw,
        lower_norm=normalize(final_lower_raw, ref) if len(final_lower_raw) else empty_m,
        upper_raw=final_upper_raw,
        upper_norm=normalize(final_upper_raw, ref) if len(final_upper_raw) else empty_m,
        solutions=final_solutions,
        ref=ref,
        w=w,
        d=d,
    )
    eps_eff = w * float(np.linalg.norm(L_raw / ref.range))
    return RunResult(state=state, trace=trace, termination=termination,
                     eps_efficiency=eps_eff)
