"""Tests for the multi-agent 2 x n grid explorer."""

from __future__ import annotations

import math

import pytest

from temporal_explore.core import Always, Instance, TemporalGraph, validate_schedule
from temporal_explore.errors import ShapeError
from temporal_explore.generators import cycle_realization, grid_edges, grid_realization
from temporal_explore.grid import (
    agent_count,
    explore_grid_multi,
    grid_columns,
    half_budget,
    level_budget,
    recursion_depth,
    run_grid,
)


def _static_grid(columns: int, lifetime: int = 200) -> Instance:
    edges = tuple(grid_edges(columns))
    graph = TemporalGraph(2 * columns, edges, tuple(Always() for _ in edges), lifetime)
    return Instance(graph, 0)


def test_grid_columns():
    """Test the column count is read off the canonical grid."""
    assert grid_columns(grid_realization(5, 0).graph) == 5
    with pytest.raises(ShapeError):
        grid_columns(cycle_realization(10, 0).graph)


@pytest.mark.parametrize("columns, agents", [(2, 4), (4, 8), (5, 12), (8, 12)])
def test_agent_count(columns, agents):
    """Test four agents per halving level."""
    assert agent_count(columns) == agents


def test_budgets():
    assert half_budget(2) == 0
    assert level_budget(4, 2) == 14
    assert half_budget(4) == 17
    assert recursion_depth(4) == 1
    assert recursion_depth(16) == 3


@pytest.mark.parametrize("columns", [2, 4, 8])
def test_static_grid_is_covered(columns):
    """An always-present grid should be covered by its agent team."""
    inst = _static_grid(columns)
    schedule = explore_grid_multi(inst)
    assert schedule.k == agent_count(columns)
    report = validate_schedule(inst, schedule)
    assert report.valid
    assert report.coverage


def test_walks_start_at_requested_step():
    """Ensure every walk starts at the requested step."""
    inst = _static_grid(4)
    schedule = explore_grid_multi(inst, t0=3)
    assert {walk.start_time for walk in schedule.agents} == {3}
    assert all(step >= 3 for walk in schedule.agents for step, _ in walk.moves)
    assert validate_schedule(inst, schedule).coverage


@pytest.mark.parametrize("seed", range(4))
def test_random_grid_is_covered(seed):
    """Test random grids are covered."""
    inst = grid_realization(4, seed, density=0.2)
    report = validate_schedule(inst, explore_grid_multi(inst))
    assert report.valid
    assert report.coverage


def test_run_reports_recursion_state():
    """Test depth and budget are recorded on the run."""
    run = run_grid(_static_grid(8))
    assert run.depth == 1
    assert run.budget == 2 * (15 + half_budget(4))


def test_single_column_grid_is_covered():
    """A 2 x 1 grid is one edge; the corner agents cover it in one step."""

    inst = _static_grid(1, lifetime=4)
    run = run_grid(inst)
    assert run.depth == 1
    schedule = run.schedule(inst.start)
    assert schedule.k == agent_count(1) == 4
    report = validate_schedule(inst, schedule)
    assert report.valid and report.coverage
    assert report.arrival == 1


@pytest.mark.parametrize("columns", [16, 32, 64, 128])
@pytest.mark.parametrize("seed", [0, 1])
def test_large_random_grids_recurse_logarithmically(columns, seed):
    """Random grids are covered and the recursion depth stays within log2 of the width."""

    inst = grid_realization(columns, seed, density=0.1, period=97)
    run = run_grid(inst)
    assert run.depth <= math.ceil(math.log2(columns))
    schedule = run.schedule(inst.start)
    assert schedule.k == agent_count(columns)
    report = validate_schedule(inst, schedule)
    assert report.valid
    assert report.coverage
