import numpy as np
import pytest

from ppbnb.errors import DegenerateBoxError
from ppbnb.geometry import Box, bisect, diameter, make_root, midpoint, volume, width


def test_midpoint_basic():
    assert np.allclose(midpoint(make_root([0, 0], [2, 4])), [1, 2])


def test_midpoint_degenerate():
    assert np.allclose(midpoint(make_root([1], [1])), [1])


def test_midpoint_symmetric_domain():
    assert np.allclose(midpoint(make_root([-3, -3], [3, 3])), [0, 0])


def test_diameter_345():
    assert diameter(make_root([0, 0], [3, 4])) == pytest.approx(5.0)


def test_diameter_zero():
    assert diameter(make_root([1], [1])) == 0.0


@pytest.mark.parametrize("n", [1, 2, 3, 7])
def test_diameter_unit_cube(n):
    assert diameter(make_root(np.zeros(n), np.ones(n))) == pytest.approx(np.sqrt(n))


def test_bisect_max_width_dimension():
    left, right = bisect(make_root([0, 0], [2, 1]), first_child_id=1)
    assert np.allclose(left.lower, [0, 0]) and np.allclose(left.upper, [1, 1])
    assert np.allclose(right.lower, [1, 0]) and np.allclose(right.upper, [2, 1])


def test_bisect_1d():
    left, right = bisect(make_root([0], [4]), first_child_id=5)
    assert np.allclose([left.lower[0], left.upper[0]], [0, 2])
    assert np.allclose([right.lower[0], right.upper[0]], [2, 4])
    assert (left.id, right.id) == (5, 6)


def test_bisect_tie_picks_lowest_dimension():
    left, right = bisect(make_root([0, 0], [1, 1]), first_child_id=1)
    assert left.upper[0] == 0.5 and right.lower[0] == 0.5
    assert left.upper[1] == 1.0  # dimension 1 untouched


def test_bisect_lineage():
    root = make_root([0, 0], [2, 1])
    left, right = bisect(root, first_child_id=1)
    assert left.parent_id == right.parent_id == root.id
    assert left.depth == right.depth == root.depth + 1


def test_bisect_zero_diameter_raises():
    with pytest.raises(DegenerateBoxError):
        bisect(make_root([1, 2], [1, 2]), first_child_id=1)


def test_box_validation():
    with pytest.raises(ValueError):
        Box(np.array([1.0]), np.array([0.0]))
    with pytest.raises(ValueError):
        Box(np.array([0.0, 0.0]), np.array([1.0]))


def test_volume_conserved_and_diameter_shrinks():
    rng = np.random.default_rng(7)
    for _ in range(200):
        n = rng.integers(1, 5)
        lo = rng.normal(size=n)
        hi = lo + rng.random(n) + 1e-3
        parent = make_root(lo, hi)
        c1, c2 = bisect(parent, first_child_id=1)
        assert volume(c1) + volume(c2) == pytest.approx(volume(parent), rel=1e-12)
        assert diameter(c1) < diameter(parent)
        assert diameter(c2) < diameter(parent)
        # children tile the parent: common face at the cut
        assert np.allclose(np.minimum(c1.lower, c2.lower), parent.lower)
        assert np.allclose(np.maximum(c1.upper, c2.upper), parent.upper)


def test_full_rounds_halve_every_width():
    n = 3
    boxes = [make_root(np.zeros(n), np.ones(n))]
    next_id = 1
    for _ in range(n):
        nxt = []
        for b in boxes:
            c1, c2 = bisect(b, next_id)
            next_id += 2
            nxt += [c1, c2]
        boxes = nxt
    for b in boxes:
        assert np.allclose(width(b), 0.5)
