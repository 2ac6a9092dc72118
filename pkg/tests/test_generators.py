"""Tests for lower-bound families, the hardness gadget and random realizations."""

from __future__ import annotations

import networkx as nx
import pytest

from temporal_explore.core import (
    Steps,
    earliest_arrival,
    is_always_connected,
    snapshot,
    validate_schedule,
)
from temporal_explore.errors import GenerationError, InstanceError
from temporal_explore.generators import (
    GadgetSpec,
    RegularityProfile,
    chained_stars,
    chord_realization,
    connected_gnp,
    cycle_2n3,
    cycle_realization,
    draw_absence_runs,
    grid_edges,
    grid_realization,
    hardness_gadget,
    planar_rounds,
    random_realization,
    regular_instance,
    rotating_star,
    separator_lifetime,
    series_parallel,
    staggered_trees,
)


def test_rotating_star_layout():
    """Test the rotating star's edge count, lifetime and star rotation."""
    inst = rotating_star(3)
    g = inst.graph
    assert g.n == 6
    assert g.m == 3 + 9
    assert g.lifetime == 36
    assert inst.start == 0
    assert g.hyperperiod == 3
    # step 4 is the star around center 1
    present = {g.edges[e] for e in g.present_edges(4)}
    assert present == {(0, 1), (1, 2), (1, 3), (1, 4), (1, 5)}
    assert is_always_connected(g)


def test_rotating_star_leaf_to_leaf_arrival():
    """A leaf reaches another leaf only when their center is the hub."""
    result = earliest_arrival(rotating_star(2).graph, 2, 1)
    assert result.arrival(3) == 4


def test_rotating_star_rejects_tiny_n():
    with pytest.raises(InstanceError):
        rotating_star(1)


def test_chained_stars_share_one_leaf():
    """Consecutive copies share exactly one leaf."""
    inst = chained_stars(4, 8)
    assert inst.n == 7
    assert inst.graph.degree(3) == 4
    assert inst.graph.degree(0) == 3
    assert is_always_connected(inst.graph)
    with pytest.raises(InstanceError):
        chained_stars(4, 6)
    with pytest.raises(InstanceError):
        chained_stars(5, 10)


def test_planar_rounds_is_planar_and_connected():
    """Test planar rounds is planar and connected at every step."""
    inst = planar_rounds(16)
    assert inst.n == 16
    assert inst.start == 0
    assert nx.check_planarity(inst.graph.to_networkx())[0]
    assert is_always_connected(inst.graph)
    with pytest.raises(InstanceError):
        planar_rounds(12)


def test_cycle_2n3_edges():
    """Test the late edge and the early edge of the 2n-3 cycle."""
    inst = cycle_2n3(5)
    g = inst.graph
    assert g.edge_present(g.edge_index[(0, 1)], 3)
    assert not g.edge_present(g.edge_index[(0, 1)], 2)
    assert g.edge_present(g.edge_index[(1, 2)], 2)
    assert not g.edge_present(g.edge_index[(1, 2)], 3)
    assert is_always_connected(g)


def test_gadget_witness_explores_everything():
    """The Hamiltonian witness should cover the whole gadget."""
    spec = GadgetSpec.path(3)
    inst, witness = hardness_gadget(spec, path=[0, 1, 2])
    assert inst.n == spec.total_vertices == 12
    report = validate_schedule(inst, witness)
    assert report.valid and report.coverage
    assert is_always_connected(inst.graph)


def test_gadget_rejects_non_hamiltonian_path():
    """Paths that are not Hamiltonian from s to t are rejected."""
    with pytest.raises(InstanceError):
        hardness_gadget(GadgetSpec.path(3), path=[0, 2, 1])
    with pytest.raises(InstanceError):
        GadgetSpec(((0, 1),), 2, 0, 0)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_random_realizations_are_always_connected(seed):
    """Ensure every random family is connected at every step."""
    cycle = cycle_realization(8, seed, density=0.2)
    assert is_always_connected(cycle.graph)
    assert cycle.graph.m == 8

    chord = chord_realization(8, seed)
    assert chord.graph.m == 9
    assert chord.graph.edges[8] == (0, 4)
    assert is_always_connected(chord.graph)

    grid = grid_realization(4, seed)
    assert set(grid.graph.edges) == set(grid_edges(4))
    assert is_always_connected(grid.graph)


def test_random_realization_holds_each_draw():
    """Each spanning-tree draw is held for ``hold`` steps."""
    inst = random_realization(nx.petersen_graph(), None, 0.1, seed=4, hold=4)
    g = inst.graph
    assert g.n == 10 and g.m == 15
    assert g.lifetime == 100
    for segment in range(0, 96, 4):
        assert set(g.present_edges(segment)) == set(g.present_edges(segment + 3))
    assert is_always_connected(g)

    with pytest.raises(InstanceError):
        random_realization(nx.Graph([(0, 1), (2, 3)]), None, 0.0, seed=0)


def test_realizations_are_deterministic_under_seed():
    assert cycle_realization(10, 7) == cycle_realization(10, 7)
    assert cycle_realization(10, 7) != cycle_realization(10, 8)


def test_periodic_realization_uses_cyclic_patterns():
    """A periodic realization repeats with the requested period."""
    inst = cycle_realization(6, 3, period=5, lifetime=100)
    assert inst.graph.hyperperiod is not None
    assert 5 % inst.graph.hyperperiod == 0
    assert is_always_connected(inst.graph)


@pytest.mark.parametrize("seed", [0, 5])
def test_series_parallel_comes_with_width_two_decomposition(seed):
    """Test the series-parallel family ships a valid width-2 decomposition."""
    inst, td = series_parallel(20, seed)
    td.validate(inst.n, inst.graph.edges)
    assert td.width <= 2
    assert is_always_connected(inst.graph)


def test_regular_instance_on_cycle_respects_profile():
    """Ensure drawn absence runs respect the regularity profile."""
    graph = nx.cycle_graph(10)
    profile = RegularityProfile.uniform(10, 4, 2.0)
    inst = regular_instance(graph, profile, seed=3)
    assert not profile.violations(inst.graph)
    assert is_always_connected(inst.graph)


def test_regular_instance_rejects_dense_graphs():
    graph = nx.complete_graph(8)
    profile = RegularityProfile.uniform(graph.number_of_edges(), 4, 2.0)
    with pytest.raises(InstanceError):
        regular_instance(graph, profile, seed=0)


def test_regularity_profile_bounds():
    profile = RegularityProfile((5, 8), 2.0)
    assert profile.low(0) == 3
    assert profile.high(1) == 8
    with pytest.raises(InstanceError):
        RegularityProfile((0,), 2.0)
    with pytest.raises(InstanceError):
        RegularityProfile((3,), 1.0)


def test_draw_absence_runs_stays_in_range():
    """Absence runs stay inside the profile bounds."""
    profile = RegularityProfile.uniform(3, 6, 2.0)
    for pattern in draw_absence_runs(profile, 200, seed=11):
        gaps = [b - a - 1 for a, b in zip(pattern.steps, pattern.steps[1:])]
        assert all(3 <= gap <= 6 for gap in gaps)


def test_staggered_trees_are_regular():
    """Test staggered trees respect their regularity profile."""
    inst, profile = staggered_trees(50, 3, seed=0)
    assert inst.graph.m == 3 * 49
    assert set(profile.bounds) == {2}
    assert not profile.violations(inst.graph)
    assert is_always_connected(inst.graph)


def test_staggered_trees_need_enough_strides():
    with pytest.raises(GenerationError):
        staggered_trees(8, 3, seed=0)


@pytest.mark.parametrize("n", [8, 16, 32, 64])
def test_planar_rounds_snapshots_are_simple_paths(n):
    """Every snapshot is a Hamiltonian path over a planar graph of max degree 4."""

    g = planar_rounds(n).graph
    underlying = g.to_networkx()
    assert max(d for _, d in underlying.degree()) <= 4
    rounds = n.bit_length() - 2
    for t in [*range(rounds * n // 2 + 2), g.lifetime]:
        step_graph = nx.Graph(snapshot(g, t))
        assert step_graph.number_of_nodes() == n
        assert nx.is_tree(step_graph)
        assert max(d for _, d in step_graph.degree()) <= 2


def test_planar_rounds_swap_schedule():
    """With n = 32, column 4 swaps at step 16, columns 2 and 6 at 32 and odd columns at 48."""

    g = planar_rounds(32).graph
    quarter = 8

    def swapped(col: int, t: int) -> bool:
        horizontal = g.edge_present(g.edge_index[(col - 1, col)], t)
        cross = g.edge_present(g.edge_index[(col - 1, quarter + col)], t)
        assert horizontal != cross
        return cross

    for col, swap in ((4, 16), (2, 32), (6, 32), (1, 48), (3, 48), (5, 48), (7, 48)):
        assert not swapped(col, swap - 1)
        assert swapped(col, swap)
        assert swapped(col, g.lifetime)


def test_gadget_quick_links_appear_once_per_copy():
    """Quick link ``i`` joins t of copy i to s of copy i+1 only at step ``i * n'``."""

    spec = GadgetSpec.path(4)
    inst, _ = hardness_gadget(spec)
    g = inst.graph
    assert spec.centers == 4
    assert inst.n == spec.total_vertices == 20
    for i in range(1, spec.centers - 1):
        link = g.edge_index[(spec.copy_vertex(i, spec.t), spec.copy_vertex(i + 1, spec.s))]
        present = [t for t in range(g.lifetime + 1) if g.edge_present(link, t)]
        assert present == [i * spec.n_prime]
    star_and_copies = spec.centers * (spec.centers - 1) // 2 + spec.centers**2 + spec.centers * 3
    assert g.m == star_and_copies + spec.centers - 2


def test_gadget_sizing():
    """n* is ``n'^c (1 + n')``; two centers leave no room for quick links."""

    assert GadgetSpec.path(3, exponent=2).total_vertices == 36
    tiny = GadgetSpec(((0, 1),), 2, 0, 1)
    inst, _ = hardness_gadget(tiny)
    assert inst.n == tiny.total_vertices == 6
    assert inst.graph.m == 1 + 4 + 2
    assert all(not isinstance(p, Steps) for p in inst.graph.presence)


def test_gadget_witness_stays_linear():
    """The Hamiltonian witness explores within a small multiple of n*."""

    spec = GadgetSpec.path(4)
    inst, witness = hardness_gadget(spec, path=[0, 1, 2, 3])
    report = validate_schedule(inst, witness)
    assert report.valid and report.coverage
    assert report.arrival <= 5 * spec.total_vertices


@pytest.mark.parametrize("seed", range(5))
def test_connected_gnp_is_connected(seed):
    graph = connected_gnp(40, 0.02, seed)
    assert graph.number_of_nodes() == 40
    assert nx.is_connected(graph)
    assert sorted(graph.edges) == sorted(connected_gnp(40, 0.02, seed).edges)


def test_connected_gnp_rejects_bad_arguments():
    """Too few vertices or a probability outside [0, 1] is an instance error."""

    with pytest.raises(InstanceError):
        connected_gnp(1, 0.5, 0)
    with pytest.raises(InstanceError):
        connected_gnp(5, 1.5, 0)


@pytest.mark.parametrize("n", [16, 25, 50])
def test_series_parallel_lifetime_grows_with_separator_arrival(n):
    """The default lifetime of series-parallel instances follows ``separator_lifetime``."""

    inst, _ = series_parallel(n, 0)
    assert inst.graph.lifetime == separator_lifetime(n)
    assert separator_lifetime(n) > n * n
