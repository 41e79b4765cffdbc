import numpy as np
import pytest

from ppbnb.cone import eps_dominates, filter_non_eps_dominated
from ppbnb.geometry import make_root
from ppbnb.oracle import build_grid_oracle, export_front_csv, oracle_proper_front
from ppbnb.problems import ProblemDefinition, ReferencePoints


def _repeated_axis_problem():
    # both objectives equal x: front collapses to the single minimum
    return ProblemDefinition(
        name="axis", n=1, m=2, p=0, domain=make_root([0.0], [1.0]),
        objectives=lambda X: np.stack([X[:, 0], X[:, 0]], axis=1),
    )


def _tradeoff_problem():
    return ProblemDefinition(
        name="line-front", n=1, m=2, p=0, domain=make_root([0.0], [1.0]),
        objectives=lambda X: np.stack([X[:, 0], 1.0 - X[:, 0]], axis=1),
    )


def test_oracle_small_grid_front():
    o = build_grid_oracle(_repeated_axis_problem(), resolution=3)
    assert sorted(o.images[:, 0]) == [0.0, 0.5, 1.0]
    assert len(o.front_images) == 1 and np.allclose(o.front_images[0], [0.0, 0.0])


def test_oracle_linear_tradeoff_all_nondominated():
    o = build_grid_oracle(_tradeoff_problem(), resolution=11)
    assert len(o.front_images) == 11


def test_oracle_infeasible_everywhere():
    prob = ProblemDefinition(
        name="never", n=1, m=2, p=1, domain=make_root([0.0], [1.0]),
        objectives=lambda X: np.stack([X[:, 0], -X[:, 0]], axis=1),
        constraints=lambda X: np.full((X.shape[0], 1), -1.0),
    )
    o = build_grid_oracle(prob, resolution=5)
    assert len(o.points) == 0 and len(o.front_images) == 0


def test_oracle_dimension_guard(welded_beam):
    with pytest.raises(ValueError):
        build_grid_oracle(welded_beam, resolution=8)


def test_oracle_resolution_guard():
    with pytest.raises(ValueError):
        build_grid_oracle(_tradeoff_problem(), resolution=1)


def test_proper_front_eps_zero_is_pareto_front():
    o = build_grid_oracle(_tradeoff_problem(), resolution=21)
    pts, imgs = oracle_proper_front(o, 0.0)
    assert np.array_equal(imgs, o.front_images)
    assert np.array_equal(pts, o.front_points)


def test_proper_front_singleton():
    o = build_grid_oracle(_repeated_axis_problem(), resolution=9)
    _, imgs = oracle_proper_front(o, 0.75)
    assert len(imgs) == 1


def test_proper_front_linear_agrees_with_cone_filter():
    # exactly linear trade-off: the two independently coded filters must
    # pick the identical subset
    o = build_grid_oracle(_tradeoff_problem(), resolution=21)
    _, imgs = oracle_proper_front(o, 0.75)
    kept = filter_non_eps_dominated([(y, i) for i, y in enumerate(o.images)], 0.75)
    expected = np.array([y for y, _ in kept])
    assert np.array_equal(np.sort(imgs, axis=0), np.sort(expected, axis=0))


def test_proper_front_nesting(mop):
    o = build_grid_oracle(mop, resolution=64)
    front = {tuple(y) for y in o.front_images}
    last = front
    for eps in (0.0, 0.25, 0.75):
        _, imgs = oracle_proper_front(o, eps)
        current = {tuple(y) for y in imgs}
        assert current <= front
        if eps > 0.0:
            assert current <= last
        last = current


def test_proper_front_agreement_with_filter_on_full_set(mop):
    o = build_grid_oracle(mop, resolution=24)
    for eps in (0.0, 0.5, 0.75):
        _, imgs = oracle_proper_front(o, eps)
        kept = filter_non_eps_dominated([(y, i) for i, y in enumerate(o.images)], eps)
        expected = sorted(map(tuple, (y for y, _ in kept)))
        assert sorted(map(tuple, imgs)) == expected


def test_proper_front_output_is_non_eps_dominated(deb2dk):
    o = build_grid_oracle(deb2dk, resolution=16)
    _, imgs = oracle_proper_front(o, 0.75)
    for a in imgs:
        for b in imgs:
            assert not eps_dominates(a, b, 0.75)


def test_export_front_csv(tmp_path):
    o = build_grid_oracle(_tradeoff_problem(), resolution=5)
    path = tmp_path / "front.csv"
    export_front_csv(path, o.front_points, o.front_images,
                     ReferencePoints(np.zeros(2), np.ones(2)))
    lines = path.read_text().splitlines()
    assert lines[0] == "x1,f1,f2,f1_norm,f2_norm"
    assert len(lines) == 1 + len(o.front_images)
