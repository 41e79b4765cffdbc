import numpy as np
import pytest

from ppbnb.bounding import (
    HAS_FEASIBLE_POINT,
    PROVABLY_INFEASIBLE,
    UNKNOWN,
    BoundRecord,
    feasibility_test,
    floored_lipschitz,
    lipschitz_lower_bound,
    midpoint_upper_bound,
)
from ppbnb.geometry import Box, bisect, make_root
from ppbnb.problems import ProblemDefinition, ReferencePoints, normalize

from conftest import make_line_problem


def _identity_ref(m=2):
    return ReferencePoints(np.zeros(m), np.ones(m))


def test_lower_bound_line():
    # f = (x, -x) on [0, 2] with L = (1, 1): l = (1 - 1, -1 - 1) = (0, -2)
    prob = make_line_problem(lipschitz=[1.0, 1.0])
    box = make_root([0.0], [2.0])
    l = lipschitz_lower_bound(prob, box, _identity_ref())
    assert np.allclose(l, [0.0, -2.0])


def test_lower_bound_zero_diameter():
    prob = make_line_problem(lipschitz=[1.0, 1.0])
    box = Box(np.array([1.0]), np.array([1.0]), id=3)
    l = lipschitz_lower_bound(prob, box, _identity_ref())
    assert np.allclose(l, [1.0, -1.0])


def test_lower_bound_respects_normalization():
    prob = make_line_problem(lipschitz=[1.0, 1.0])
    box = make_root([0.0], [2.0])
    ref = ReferencePoints(np.array([-2.0, -4.0]), np.array([2.0, 0.0]))
    l = lipschitz_lower_bound(prob, box, ref)
    assert np.allclose(l, normalize([0.0, -2.0], ref))


def _constrained_problem(shift, domain, lipschitz_g=(1.0,)):
    return ProblemDefinition(
        name="shifted", n=1, m=2, p=1, domain=make_root(*domain),
        objectives=lambda X: np.stack([X[:, 0], -X[:, 0]], axis=1),
        constraints=lambda X: (X[:, 0] + shift)[:, None],
        lipschitz_g=np.asarray(lipschitz_g),
    )


def test_feasibility_test_provably_infeasible():
    # g(x) = x - 10 on [0, 1]: g(mid) = -9.5, ceiling -9.5 + 0.5 < 0
    prob = _constrained_problem(-10.0, ([0.0], [1.0]))
    assert feasibility_test(prob, make_root([0.0], [1.0])) == PROVABLY_INFEASIBLE


def test_feasibility_test_unknown():
    prob = _constrained_problem(0.0, ([1.0], [2.0]))
    assert feasibility_test(prob, make_root([1.0], [2.0])) == UNKNOWN


def test_feasibility_test_unconstrained(mop):
    assert feasibility_test(mop, make_root([-3.0, -3.0], [3.0, 3.0])) == UNKNOWN


def test_feasibility_test_without_constants():
    prob = _constrained_problem(-10.0, ([0.0], [1.0]))
    prob = prob.with_lipschitz(None, None)
    stripped = ProblemDefinition(
        name=prob.name, n=1, m=2, p=1, domain=prob.domain,
        objectives=prob.objectives, constraints=prob.constraints,
    )
    assert feasibility_test(stripped, make_root([0.0], [1.0])) == UNKNOWN


def test_midpoint_upper_bound_unconstrained():
    prob = make_line_problem(lipschitz=[1.0, 1.0])
    out = midpoint_upper_bound(prob, make_root([0.0], [2.0]), _identity_ref())
    assert out is not None
    u, x = out
    assert np.allclose(x, [1.0]) and np.allclose(u, [1.0, -1.0])


def test_midpoint_upper_bound_infeasible_midpoint():
    prob = _constrained_problem(-10.0, ([0.0], [1.0]))
    assert midpoint_upper_bound(prob, make_root([0.0], [1.0]), _identity_ref()) is None


def test_midpoint_upper_bound_boundary_counts_feasible():
    # g(x) = x - 0.5 is exactly 0 at the midpoint of [0, 1]
    prob = _constrained_problem(-0.5, ([0.0], [1.0]))
    assert midpoint_upper_bound(prob, make_root([0.0], [1.0]), _identity_ref()) is not None


def test_bound_soundness_random_boxes(mop):
    rng = np.random.default_rng(12)
    ref = ReferencePoints(np.array([0.0, 0.0]), np.array([10.0, 10.0]))
    for _ in range(300):
        lo = -3.0 + 5.0 * rng.random(2)
        hi = lo + 1.0 * rng.random(2)
        box = make_root(lo, hi)
        l = lipschitz_lower_bound(mop, box, ref)
        x = lo + (hi - lo) * rng.random(2)
        fx = normalize(mop.evaluate_objectives(x[None, :])[0], ref)
        assert np.all(l <= fx + 1e-12)


def test_bound_gap_shrinks_with_diameter(mop):
    ref = ReferencePoints(np.array([0.0, 0.0]), np.array([10.0, 10.0]))
    L_norm = mop.lipschitz_f / ref.range
    center = np.array([0.3, -0.7])
    for half in (1.0, 0.25, 0.01):
        box = make_root(center - half, center + half)
        l = lipschitz_lower_bound(mop, box, ref)
        f_mid = normalize(mop.evaluate_objectives(center[None, :])[0], ref)
        gap = np.linalg.norm(f_mid - l)
        expected = 0.5 * np.linalg.norm(L_norm) * (2 * half * np.sqrt(2))
        assert gap == pytest.approx(expected, rel=1e-9)


def test_feasibility_never_kills_boxes_with_feasible_points(welded_beam):
    rng = np.random.default_rng(13)
    lo_d, hi_d = welded_beam.domain.lower, welded_beam.domain.upper
    checked = 0
    for _ in range(200):
        lo = lo_d + (hi_d - lo_d) * rng.random(4) * 0.8
        hi = lo + (hi_d - lo) * rng.random(4) * 0.5
        box = make_root(lo, hi)
        samples = lo + (hi - lo) * rng.random((64, 4))
        feasible = np.all(welded_beam.evaluate_constraints(samples) >= 0.0, axis=1)
        if np.any(feasible):
            checked += 1
            assert feasibility_test(welded_beam, box) == UNKNOWN
    assert checked > 10


def test_floored_lipschitz():
    assert np.allclose(floored_lipschitz([0.0, 2.0]), [1e-12, 2.0])


def test_bound_record_fields():
    rec = BoundRecord(
        box=make_root([0.0], [1.0]),
        lower=np.array([0.0, 0.0]),
        raw_lower=np.array([0.0, 0.0]),
        feasible_status=HAS_FEASIBLE_POINT,
    )
    assert rec.box_id == 0 and not rec.protected and rec.upper_candidates == []
