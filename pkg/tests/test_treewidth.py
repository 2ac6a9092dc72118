"""Tests for separator selection and the bounded-treewidth explorer."""

from __future__ import annotations

import pytest

from temporal_explore.core import Always, Instance, TemporalGraph, validate_walk
from temporal_explore.decomposition import TreeDecomposition, make_nice
from temporal_explore.generators import cycle_realization, series_parallel
from temporal_explore.treewidth import (
    explore_treewidth,
    plan_separators,
    run_treewidth,
    select_separators,
)


def _static(n: int, edges, lifetime: int = 2000) -> Instance:
    edges = tuple(edges)
    return Instance(TemporalGraph(n, edges, tuple(Always() for _ in edges), lifetime), 0)


def _path_td(n: int) -> TreeDecomposition:
    bags = tuple(frozenset((i, i + 1)) for i in range(n - 1))
    return TreeDecomposition(bags, tuple((i, i + 1) for i in range(n - 2)))


def test_first_selection_on_path_exceeds_sqrt_n():
    """Test selections on a path and the partition of vertices into groups."""
    selections, groups = select_separators(make_nice(_path_td(9)), 9)
    assert selections
    assert selections[0].unmarked == 4
    assert all(s.unmarked > 3 or s.topmost >= 2 for s in selections)

    seen: set[int] = set()
    for group in groups:
        assert not group & seen
        seen |= group
    assert seen == set(range(9))


def test_components_avoid_separators():
    """Components should be disjoint from separators and anchored on them."""
    inst = _static(9, [(i, i + 1) for i in range(8)])
    plan = plan_separators(inst.graph, make_nice(_path_td(9)))
    covered = set(plan.separators)
    for component in plan.components:
        assert not component.vertices & plan.separators
        assert set(component.anchors) <= plan.separators
        covered |= component.vertices
    assert covered == set(range(9))


def test_static_path():
    """Test exploring a static path with a width-1 decomposition."""
    inst = _static(9, [(i, i + 1) for i in range(8)])
    run = run_treewidth(inst, _path_td(9))
    assert run.width == 1
    report = validate_walk(inst, run.walk)
    assert report.valid and report.covers(9)


def test_star_with_two_vertex_bags():
    inst = _static(9, [(0, i) for i in range(1, 9)])
    td = TreeDecomposition(
        tuple(frozenset((0, i)) for i in range(1, 9)), tuple((0, j) for j in range(1, 8))
    )
    report = validate_walk(inst, explore_treewidth(inst, td))
    assert report.valid and report.covers(9)


def test_min_fill_is_used_without_decomposition():
    """Without a decomposition, min-fill supplies one of width 2."""
    inst = cycle_realization(8, 2, lifetime=3000)
    run = run_treewidth(inst)
    assert run.width == 2
    report = validate_walk(inst, run.walk)
    assert report.valid and report.covers(8)


@pytest.mark.parametrize("seed", [0, 1])
def test_series_parallel_realizations(seed):
    """Ensure series-parallel realizations are explored phase by phase."""
    inst, td = series_parallel(12, seed, lifetime=10000)
    run = run_treewidth(inst, td)
    report = validate_walk(inst, run.walk)
    assert report.valid and report.covers(12)
    assert all(phase.trace for phase in run.phases if phase.targets)


@pytest.mark.parametrize("n", [16, 25, 50])
@pytest.mark.parametrize("seed", [0, 1])
def test_series_parallel_default_lifetime_suffices(n, seed):
    """The separator explorer finishes within the family's own default lifetime."""

    inst, td = series_parallel(n, seed)
    report = validate_walk(inst, explore_treewidth(inst, td))
    assert report.valid and report.covers(n)
    assert report.arrival <= inst.graph.lifetime
