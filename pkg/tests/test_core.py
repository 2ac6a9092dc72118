"""Tests for temporal graphs, presence patterns, validation and reachability."""

from __future__ import annotations

import pytest

from temporal_explore.core import (
    Always,
    Cyclic,
    Instance,
    Intervals,
    MultiAgentSchedule,
    Periodic,
    Steps,
    StepView,
    TemporalGraph,
    TemporalWalk,
    absence_runs,
    earliest_arrival,
    edge_present,
    greedy_extend,
    is_always_connected,
    plan_reach,
    snapshot,
    union_patterns,
    validate_schedule,
    validate_walk,
)
from temporal_explore.errors import (
    InstanceError,
    LifetimeExhaustedError,
    PreconditionError,
    StepRangeError,
)
from temporal_explore.generators import connected_gnp, cycle_realization, random_realization


def _path(n: int = 3, lifetime: int = 10) -> Instance:
    edges = tuple((i, i + 1) for i in range(n - 1))
    graph = TemporalGraph(n, edges, tuple(Always() for _ in edges), lifetime)
    return Instance(graph, 0)


def _triangle() -> Instance:
    # {0,1} at even steps, {1,2} at odd steps, {0,2} only at step 4
    graph = TemporalGraph(
        3,
        ((0, 1), (1, 2), (0, 2)),
        (Periodic(0, 1, 1), Periodic(1, 1, 1), Steps((4,))),
        8,
    )
    return Instance(graph, 0)


# ----------------------------------------------------------------------
# Patterns
# ----------------------------------------------------------------------


def test_periodic_presence_follows_offset():
    """Test periodic presence starts at its offset."""
    pattern = Periodic(1, 2, 3)
    assert [t for t in range(10) if pattern.contains(t)] == [1, 2, 6, 7]
    assert pattern.period == 5


def test_cyclic_presence_uses_residues():
    """Test cyclic presence is driven by sorted residues."""
    pattern = Cyclic(4, (3, 1))
    assert pattern.residues == (1, 3)
    assert [t for t in range(8) if pattern.contains(t)] == [1, 3, 5, 7]


def test_intervals_must_be_disjoint():
    """Overlapping intervals are rejected."""
    with pytest.raises(InstanceError):
        Intervals(((0, 3), (3, 5)))


def test_absence_runs_flag_cut_runs():
    """Runs touching step 0 or the lifetime are flagged as cut."""
    runs = absence_runs(Steps((2, 5)), 9)
    assert [(r.start, r.length, r.cut) for r in runs] == [(0, 2, True), (3, 2, False), (6, 4, True)]


def test_union_patterns_merges_adjacent_runs():
    """Test presence union of several patterns."""
    a = Intervals(((0, 2),))
    b = Intervals(((3, 5),))
    assert union_patterns([a, b], 5) == Always()
    assert union_patterns([a, b], 9) == Intervals(((0, 5),))
    assert union_patterns([a, Steps((7,))], 9) == Intervals(((0, 2), (7, 7)))
    assert union_patterns([], 9) == Steps(())
    assert union_patterns([a, Always()], 9) == Always()


# ----------------------------------------------------------------------
# Graph construction and per-step queries
# ----------------------------------------------------------------------


@pytest.mark.parametrize(
    "edges, presence",
    [
        (((0, 0),), (Always(),)),
        (((0, 1), (1, 0)), (Always(), Always())),
        (((0, 3),), (Always(),)),
        (((0, 1),), (Steps((11,)),)),
        (((0, 1),), ()),
    ],
)
def test_graph_rejects_malformed_input(edges, presence):
    """Malformed edges or patterns should raise."""
    with pytest.raises(InstanceError):
        TemporalGraph(3, edges, presence, 10)


def test_instance_rejects_start_outside_graph():
    with pytest.raises(InstanceError):
        Instance(_path().graph, 5)


def test_snapshot_and_edge_present():
    """Test per-step edge queries."""
    g = _triangle().graph
    assert snapshot(g, 0) == [(0, 1)]
    assert snapshot(g, 4) == [(0, 1), (0, 2)]
    assert edge_present(g, 1, 3)
    assert not edge_present(g, 2, 3)


def test_step_outside_lifetime_is_a_range_error():
    """Steps outside the lifetime raise a range error."""
    g = _triangle().graph
    with pytest.raises(StepRangeError):
        snapshot(g, 9)
    with pytest.raises(IndexError):
        edge_present(g, 0, -1)


def test_hyperperiod_of_periodic_graph():
    """Test the hyperperiod of purely periodic patterns."""
    g = TemporalGraph(3, ((0, 1), (1, 2)), (Periodic(0, 1, 1), Cyclic(3, (0, 1))), 20)
    assert g.hyperperiod == 6
    assert max(g.change_points) < 6


def test_always_connected_reports_failing_step():
    """Test the first disconnected step is reported."""
    g = _triangle().graph
    report = is_always_connected(g)
    assert not report
    assert report.failing_step == 0
    assert is_always_connected(_path().graph)


# ----------------------------------------------------------------------
# Validation
# ----------------------------------------------------------------------


def test_validate_walk_computes_arrival():
    """Test arrival and first visits of a valid walk."""
    inst = _path()
    report = validate_walk(inst, TemporalWalk(0, ((0, 1), (3, 2))))
    assert report.valid
    assert report.arrival == 4
    assert report.covers(3)
    assert report.first_visit == {0: 0, 1: 1, 2: 4}


@pytest.mark.parametrize(
    "walk, index, reason",
    [
        (TemporalWalk(1), -1, "start"),
        (TemporalWalk(0, ((2, 1), (2, 2))), 1, "step-order"),
        (TemporalWalk(0, ((11, 1),)), 0, "step-range"),
        (TemporalWalk(0, ((0, 2),)), 0, "non-adjacent"),
    ],
)
def test_validate_walk_names_first_violation(walk, index, reason):
    """The first violation is reported with its reason."""
    report = validate_walk(_path(), walk)
    assert not report.valid
    assert report.violation.index == index
    assert report.violation.reason == reason


def test_validate_walk_rejects_absent_edge():
    report = validate_walk(_triangle(), TemporalWalk(0, ((1, 1),)))
    assert report.violation.reason == "absent-edge"


def test_validate_schedule_combines_agents():
    """Coverage and arrival are combined over agents."""
    inst = _path()
    schedule = MultiAgentSchedule((TemporalWalk(0, ((0, 1),)), TemporalWalk(0, ((2, 1), (5, 2)))))
    report = validate_schedule(inst, schedule)
    assert report.valid
    assert report.coverage
    assert report.arrival == 6


def test_validate_schedule_collects_violations():
    inst = _path()
    schedule = MultiAgentSchedule((TemporalWalk(0, ((0, 1),)), TemporalWalk(0, ((0, 2),))))
    report = validate_schedule(inst, schedule)
    assert not report.valid
    assert [agent for agent, _ in report.violations] == [1]


# ----------------------------------------------------------------------
# Earliest arrival and reachability
# ----------------------------------------------------------------------


def test_earliest_arrival_waits_for_edges():
    """Test foremost walks wait for edges to appear."""
    inst = _triangle()
    result = earliest_arrival(inst.graph, 0)
    assert result.times == {0: 0, 1: 1, 2: 2}
    assert result.walk_moves(2) == [(0, 1), (1, 2)]
    walk = result.walk_to(2)
    assert validate_walk(inst, walk).valid


def test_earliest_arrival_from_later_step():
    """Test earliest arrival from a later start step."""
    result = earliest_arrival(_triangle().graph, 0, 1)
    assert result.arrival(1) == 3
    assert result.arrival(2) == 4


def test_earliest_arrival_reports_unreachable():
    """Unreachable vertices report an infinite arrival."""
    graph = TemporalGraph(2, ((0, 1),), (Steps((0,)),), 3)
    result = earliest_arrival(graph, 0, 1)
    assert not result.reached(1)
    assert result.arrival(1) == float("inf")
    with pytest.raises(KeyError):
        result.walk_moves(1)


def test_step_view_maps_indices_to_base_steps():
    """Test view indices, restriction and presence lookups."""
    g = _triangle().graph
    view = StepView(g, [1, 3, 4])
    assert len(view) == 3
    assert view.base_step(2) == 4
    assert view.index_of(2) == 1
    assert [e for e, _, _ in view.present_edges(2)] == [0, 2]
    restricted = view.restrict(indices=[0, 2], vertices=[0, 2])
    assert list(restricted.steps) == [1, 4]
    assert restricted.present_edges(0) == []
    assert restricted.present(0, 2, 1)


def test_plan_reach_stays_inside_subset():
    """Test planned walks only use the given subset."""
    inst = _path(4)
    reach = plan_reach(inst.graph, 0, 2, 0, {0, 1, 2})
    assert reach.walk.moves == ((0, 1), (1, 2))
    assert reach.arrival == 2


def test_plan_reach_reports_failing_step():
    with pytest.raises(PreconditionError) as info:
        plan_reach(_triangle().graph, 0, 2, 0, {0, 2})
    assert info.value.step == 0


def test_greedy_extend_visits_everything():
    """Test greedy extension covers a path."""
    inst = _path(5)
    walk = greedy_extend(inst.graph, TemporalWalk(0))
    report = validate_walk(inst, walk)
    assert report.covers(5)
    assert report.arrival == 4


def test_greedy_extend_carries_best_walk_when_lifetime_ends():
    """The partial walk travels with the lifetime error."""
    graph = TemporalGraph(3, ((0, 1), (1, 2)), (Always(), Steps((0,))), 4)
    with pytest.raises(LifetimeExhaustedError) as info:
        greedy_extend(graph, TemporalWalk(0))
    assert info.value.best.moves == ((0, 1),)


def _stepwise_arrival(graph: TemporalGraph, source: int, t0: int) -> dict[int, int]:
    """Arrival times by replaying every snapshot from ``t0``, one hop per step."""

    times = {source: t0}
    for t in range(t0, graph.lifetime + 1):
        if len(times) == graph.n:
            break
        reached = set(times)
        for u, v in snapshot(graph, t):
            if u in reached and v not in times:
                times[v] = t + 1
            elif v in reached and u not in times:
                times[u] = t + 1
    return times


@pytest.mark.parametrize("n", [6, 20, 50])
@pytest.mark.parametrize("seed", range(3))
def test_earliest_arrival_matches_snapshot_replay(n, seed):
    """Foremost times equal a brute-force replay of the snapshots."""

    graph = random_realization(connected_gnp(n, 0.08, seed), None, 0.05, seed).graph
    for source, t0 in ((0, 0), (n - 1, 3), (n // 2, 17)):
        result = earliest_arrival(graph, source, t0)
        assert result.times == _stepwise_arrival(graph, source, t0)


@pytest.mark.parametrize("seed", range(4))
def test_earliest_arrival_is_monotone_in_start_step(seed):
    """Starting later never makes any vertex reachable earlier."""

    graph = cycle_realization(15, seed, density=0.2).graph
    previous = earliest_arrival(graph, 0, 0)
    for t0 in range(1, 40):
        current = earliest_arrival(graph, 0, t0)
        for v in range(graph.n):
            assert previous.arrival(v) <= current.arrival(v)
        previous = current


def test_random_realization_snapshots_are_connected():
    """Every step of a random realization is connected."""

    graph = random_realization(connected_gnp(30, 0.1, 9), None, 0.0, 9).graph
    assert is_always_connected(graph)
