import numpy as np
import pytest

from ppbnb.cone import (
    apply_t_eps,
    eps_dominates,
    filter_non_eps_dominated,
    non_eps_dominated_mask,
    pareto_dominates,
    validate_eps,
)
from ppbnb.errors import ConfigError, DimensionError


def test_apply_t_eps_row():
    assert np.allclose(apply_t_eps([1.0, 0.0], 0.75), [1.0, 0.75])


def test_apply_t_eps_zero_vector():
    assert np.allclose(apply_t_eps(np.zeros(4), 0.3), np.zeros(4))


def test_apply_t_eps_row_sum():
    assert np.allclose(apply_t_eps([1.0, 1.0, 1.0], 0.5), [2.0, 2.0, 2.0])


def test_apply_t_eps_needs_two_objectives():
    with pytest.raises(DimensionError):
        apply_t_eps([1.0], 0.5)


def test_validate_eps():
    assert validate_eps(0.0) == 0.0
    assert validate_eps(0.75) == 0.75
    for bad in (-0.1, 1.0, 1.5):
        with pytest.raises(ConfigError):
            validate_eps(bad)


def test_pareto_dominates_examples():
    assert pareto_dominates([1, 2], [1, 3])
    assert not pareto_dominates([1, 2], [1, 2])
    assert not pareto_dominates([0, 3], [1, 2])


def test_pareto_dimension_mismatch():
    with pytest.raises(DimensionError):
        pareto_dominates([1, 2], [1, 2, 3])


def test_eps_dominates_reduces_to_pareto_at_zero():
    assert eps_dominates([1, 2], [1, 3], eps=0.0)
    assert not eps_dominates([1, 3], [1, 2], eps=0.0)


def test_eps_dominates_wide_cone():
    # T(1,0) = (1, 0.75) <= T(0,2) = (1.5, 2)
    assert eps_dominates([1, 0], [0, 2], eps=0.75)
    # T(1,0) = (1, 0.75) and T(0,1) = (0.75, 1) are incomparable
    assert not eps_dominates([1, 0], [0, 1], eps=0.75)


def test_filter_non_eps_dominated_example():
    items = [(np.array([1.0, 0.0]), "a"), (np.array([0.0, 2.0]), "b"),
             (np.array([0.0, 1.0]), "c")]
    kept = filter_non_eps_dominated(items, eps=0.75)
    assert [p for _, p in kept] == ["a", "c"]


def test_filter_singleton():
    kept = filter_non_eps_dominated([(np.array([3.0, 4.0]), 0)], eps=0.5)
    assert len(kept) == 1


def test_filter_pareto_case():
    items = [(np.array([1.0, 2.0]), 0), (np.array([2.0, 1.0]), 1),
             (np.array([2.0, 2.0]), 2)]
    kept = filter_non_eps_dominated(items, eps=0.0)
    assert [p for _, p in kept] == [0, 1]


def test_filter_retains_duplicates():
    items = [(np.array([1.0, 1.0]), i) for i in range(3)]
    kept = filter_non_eps_dominated(items, eps=0.75)
    assert [p for _, p in kept] == [0, 1, 2]


def test_irreflexive_random():
    rng = np.random.default_rng(0)
    for eps in (0.0, 0.25, 0.75):
        for _ in range(100):
            y = rng.normal(size=rng.integers(2, 6))
            assert not eps_dominates(y, y, eps)


def test_transitive_random():
    rng = np.random.default_rng(1)
    count = 0
    for eps in (0.0, 0.25, 0.75):
        for _ in range(3000):
            m = int(rng.integers(2, 5))
            b = rng.normal(size=m)
            a = b - np.abs(rng.normal(size=m)) * rng.integers(0, 2, size=m)
            c = b + np.abs(rng.normal(size=m)) * rng.integers(0, 2, size=m)
            if eps_dominates(a, b, eps) and eps_dominates(b, c, eps):
                count += 1
                assert eps_dominates(a, c, eps)
    assert count > 100  # the premise actually fired


def test_pareto_implies_eps_random():
    rng = np.random.default_rng(2)
    hits = 0
    for _ in range(2000):
        m = int(rng.integers(2, 6))
        a = rng.normal(size=m)
        b = a + np.abs(rng.normal(size=m))
        if pareto_dominates(a, b):
            hits += 1
            for eps in (0.0, 0.1, 0.5, 0.9):
                assert eps_dominates(a, b, eps)
    assert hits > 1500


def test_t_form_matches_membership_form():
    # a <=_eps b iff T(b - a) >= 0 componentwise with a != b
    rng = np.random.default_rng(3)
    for eps in (0.0, 0.25, 0.75):
        a = rng.normal(size=(5000, 3))
        b = rng.normal(size=(5000, 3))
        via_t = np.all(apply_t_eps(a, eps) <= apply_t_eps(b, eps), axis=1)
        via_membership = np.all(apply_t_eps(b - a, eps) >= 0.0, axis=1)
        distinct = np.any(a != b, axis=1)
        assert np.array_equal(via_t & distinct, via_membership & distinct)


def test_cone_min_sum_membership_equals_t_form():
    # The widened cone admits two formulations: T(y) >= 0 and
    # min_i [(1 - eps) y_i + eps * sum(y)] >= 0. They must agree.
    rng = np.random.default_rng(4)
    for eps in (0.0, 0.25, 0.75, 0.99):
        y = rng.normal(size=(20000, 4))
        in_t = np.all(apply_t_eps(y, eps) >= 0.0, axis=1)
        in_minsum = (np.min((1 - eps) * y + eps * y.sum(axis=1, keepdims=True), axis=1) >= 0.0)
        assert np.array_equal(in_t, in_minsum)


def test_filter_output_is_non_eps_dominated():
    rng = np.random.default_rng(5)
    for eps in (0.0, 0.5, 0.75):
        pts = rng.normal(size=(60, 3))
        kept = filter_non_eps_dominated([(p, i) for i, p in enumerate(pts)], eps)
        for v1, _ in kept:
            for v2, _ in kept:
                assert not eps_dominates(v1, v2, eps)


def test_filter_monotone_shrinkage():
    rng = np.random.default_rng(6)
    for _ in range(20):
        pts = rng.normal(size=(80, 2))
        items = [(p, i) for i, p in enumerate(pts)]
        small = {p for _, p in filter_non_eps_dominated(items, 0.2)}
        large = {p for _, p in filter_non_eps_dominated(items, 0.7)}
        assert large <= small


@pytest.mark.parametrize("m", [2, 3, 5])
@pytest.mark.parametrize("eps", [0.0, 0.25, 0.75])
def test_mask_agrees_with_filter(m, eps):
    rng = np.random.default_rng(m * 31 + int(eps * 100))
    pts = rng.integers(0, 6, size=(120, m)).astype(float)  # ints force duplicates/ties
    pts[40:50] = pts[:10]  # exact duplicate rows
    mask = non_eps_dominated_mask(pts, eps)
    kept = filter_non_eps_dominated([(p, i) for i, p in enumerate(pts)], eps)
    assert sorted(i for _, i in kept) == list(np.flatnonzero(mask))


def test_mask_empty():
    assert non_eps_dominated_mask(np.empty((0, 2)), 0.5).shape == (0,)
