"""Single-agent explorers for general graphs, temporal cycles and cycles with one chord."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import networkx as nx

from temporal_explore.core import (
    Instance,
    Reach,
    StepView,
    TemporalGraph,
    TemporalWalk,
    greedy_extend,
    norm_edge,
    plan_reach,
)
from temporal_explore.errors import LifetimeExhaustedError, ShapeError

logger = logging.getLogger(__name__)


def explore_greedy(inst: Instance) -> TemporalWalk:
    """Repeatedly walk to the unvisited vertex with the earliest arrival (ties: smallest id)."""

    walk = greedy_extend(inst.graph, TemporalWalk(inst.start))
    logger.info(f"greedy: arrival {walk.ready}, {len(walk.moves)} moves")
    return walk


# ----------------------------------------------------------------------
# Cycles
# ----------------------------------------------------------------------


def cycle_order(graph: TemporalGraph | nx.Graph, start: int) -> list[int]:
    """Vertices of the underlying cycle from ``start`` in clockwise order.

    Clockwise means towards the smaller-id neighbour of ``start``.
    """

    underlying = graph.to_networkx() if isinstance(graph, TemporalGraph) else graph
    n = underlying.number_of_nodes()
    if (
        n < 3
        or underlying.number_of_edges() != n
        or any(d != 2 for _, d in underlying.degree)
        or not nx.is_connected(underlying)
    ):
        raise ShapeError("underlying graph is not a cycle")

    order = [start, min(underlying.neighbors(start))]
    while len(order) < n:
        a, b = sorted(underlying.neighbors(order[-1]))
        order.append(b if a == order[-2] else a)
    return order


def sweep_cycle(view: StepView, order: list[int], t0: int = 0) -> Reach:
    """Two virtual agents leave ``order[0]`` in opposite directions; return the first to finish.

    Both agents move whenever their next edge is present. When they face each
    other across an absent edge they wait if it reappears within the next
    ``len(order)`` view steps; otherwise the clockwise agent turns around.
    """

    n = len(order)
    start_step = view.base_step(t0) if t0 < len(view) else t0
    if n == 1:
        return Reach(TemporalWalk(order[0], (), start_step), t0)

    pos = [0, 0]
    heading = [1, -1]
    seen = [{0}, {0}]
    moves: list[list[tuple[int, int]]] = [[], []]
    index = t0
    while True:
        for agent in (0, 1):
            if len(seen[agent]) == n:
                walk = TemporalWalk(order[0], tuple(moves[agent]), start_step)
                return Reach(walk, index)
        if index >= len(view):
            best = max((0, 1), key=lambda a: len(seen[a]))
            raise LifetimeExhaustedError(
                "lifetime ends before the cycle is explored",
                best=TemporalWalk(order[0], tuple(moves[best]), start_step),
            )

        ahead = [(pos[a] + heading[a]) % n for a in (0, 1)]
        facing = heading[0] != heading[1] and ahead[0] == pos[1] and ahead[1] == pos[0]
        if facing and not view.present(order[pos[0]], order[pos[1]], index):
            u, v = order[pos[0]], order[pos[1]]
            window = range(index + 1, min(index + 1 + n, len(view)))
            if not any(view.present(u, v, j) for j in window):
                logger.debug(f"cycle sweep: {{{u}, {v}}} stays absent, turning at view step {index}")
                heading[0] = -heading[0]
                ahead[0] = (pos[0] + heading[0]) % n

        for agent in (0, 1):
            if view.present(order[pos[agent]], order[ahead[agent]], index):
                pos[agent] = ahead[agent]
                seen[agent].add(pos[agent])
                moves[agent].append((view.base_step(index), order[pos[agent]]))
        index += 1


def explore_cycle_3n(inst: Instance) -> TemporalWalk:
    """Two-agent sweep on a temporal cycle; arrival at most 3n on always-connected cycles."""

    order = cycle_order(inst.graph, inst.start)
    reach = sweep_cycle(StepView.full(inst.graph), order)
    logger.info(f"cycle3n: n={inst.n}, arrival {reach.arrival}")
    return reach.walk


@dataclass(frozen=True)
class RouteType:
    """Move ``first`` steps in direction ``heading``, then reverse until the cycle is explored."""

    heading: int
    first: int

    def route(self, order: list[int]) -> list[int]:
        n = len(order)
        out = [order[(self.heading * k) % n] for k in range(self.first + 1)]
        back = [order[(-self.heading * k) % n] for k in range(1, n - 1 - self.first + 1)]
        return out + out[-2::-1] + back if self.first else out + back


def _follow(view: StepView, route: list[int], cutoff: float) -> tuple[list[tuple[int, int]], int | None]:
    """Greedily follow ``route``; returns the moves and the arrival (None when cut off)."""

    moves: list[tuple[int, int]] = []
    p = 0
    index = 0
    while p + 1 < len(route):
        if index >= len(view) or index + 1 > cutoff:
            return moves, None
        if view.present(route[p], route[p + 1], index):
            p += 1
            moves.append((view.base_step(index), route[p]))
        index += 1
    return moves, index


def cycle_optimal(inst: Instance) -> TemporalWalk:
    """Minimum-arrival walk among all one-turn route types on a temporal cycle.

    Pure clockwise and counterclockwise routes come first; then every
    turnaround distance in each direction. Raises
    :class:`LifetimeExhaustedError` with the best partial walk when no route
    completes within the lifetime.
    """

    order = cycle_order(inst.graph, inst.start)
    n = len(order)
    view = StepView.full(inst.graph)
    types = [RouteType(-1, 0), RouteType(1, 0)]
    types += [RouteType(1, k) for k in range(1, n - 1)]
    types += [RouteType(-1, k) for k in range(1, n - 1)]

    best_moves: list[tuple[int, int]] | None = None
    best_arrival: float = float("inf")
    partial: list[tuple[int, int]] = []
    for kind in types:
        moves, arrival = _follow(view, kind.route(order), best_arrival - 1)
        if arrival is not None and arrival < best_arrival:
            best_moves, best_arrival = moves, arrival
        elif arrival is None and len({v for _, v in moves}) > len({v for _, v in partial}):
            partial = moves

    if best_moves is None:
        raise LifetimeExhaustedError(
            "no route type explores the cycle within the lifetime",
            best=TemporalWalk(inst.start, tuple(partial)),
        )
    logger.info(f"cycle-opt: n={n}, optimum over {len(types)} route types = {best_arrival}")
    return TemporalWalk(inst.start, tuple(best_moves))


# ----------------------------------------------------------------------
# Cycle with one chord
# ----------------------------------------------------------------------


def find_chord(graph: TemporalGraph) -> tuple[int, int]:
    """Return the chord of a cycle-plus-one-chord underlying graph."""

    underlying = graph.to_networkx()
    n = graph.n
    hubs = sorted(v for v, d in underlying.degree if d == 3)
    if (
        n < 4
        or graph.m != n + 1
        or len(hubs) != 2
        or any(d not in (2, 3) for _, d in underlying.degree)
        or not underlying.has_edge(*hubs)
    ):
        raise ShapeError("underlying graph is not a cycle with one chord")
    rest = underlying.copy()
    rest.remove_edge(*hubs)
    if not nx.is_connected(rest) or any(d != 2 for _, d in rest.degree):
        raise ShapeError("underlying graph is not a cycle with one chord")
    return norm_edge(*hubs)


def _arc(order: list[int], a: int, b: int) -> list[int]:
    """Vertices of ``order`` walking forward from ``a`` to ``b``, both included."""
    i = order.index(a)
    out = [order[i]]
    while out[-1] != b:
        i = (i + 1) % len(order)
        out.append(order[i])
    return out


def _sub_cycle_from(arc: list[int], start: int) -> list[int]:
    """The cycle ``arc`` + chord (closing edge) listed from ``start``."""
    i = arc.index(start)
    return arc[i:] + arc[:i]


def explore_chord(inst: Instance) -> TemporalWalk:
    """Explore a cycle with one chord in O(n) steps.

    With the chord present in more than ``7n`` of the first ``10n`` steps,
    the side containing the start is swept on chord-present steps, the agent
    crosses to a chord endpoint and the other side is swept likewise.
    Otherwise the outer cycle is swept on chord-absent steps.
    """

    g = inst.graph
    n = g.n
    x, y = find_chord(g)
    chord = g.edge_index[(x, y)]
    outer = g.to_networkx()
    outer.remove_edge(x, y)
    order = cycle_order(outer, inst.start)

    horizon = min(10 * n, g.lifetime + 1)
    present_count = sum(1 for t in range(horizon) if g.edge_present(chord, t))
    pattern = g.presence[chord]
    logger.info(f"chord: {{{x}, {y}}} present in {present_count} of the first {horizon} steps")

    if present_count <= 7 * n:
        absent = [t for t in range(g.lifetime + 1) if not pattern.contains(t)]
        reach = sweep_cycle(StepView(g, absent), order)
        logger.info(f"chord: swept the outer cycle, arrival {reach.walk.ready}")
        return TemporalWalk(inst.start, reach.walk.moves)

    view = StepView(g, [t for t in range(g.lifetime + 1) if pattern.contains(t)])
    arc = _arc(order, x, y) if inst.start in _arc(order, x, y) else _arc(order, y, x)
    other = _arc(order, arc[-1], arc[0])
    home_side = view.restrict(vertices=arc)
    first = sweep_cycle(home_side, _sub_cycle_from(arc, inst.start))

    cross = plan_reach(view, first.walk.end, x, first.arrival, range(n), check=False)
    far_side = view.restrict(vertices=other)
    second = sweep_cycle(far_side, _sub_cycle_from(other, x), cross.arrival)

    walk = TemporalWalk(inst.start, first.walk.moves + cross.walk.moves + second.walk.moves)
    logger.info(f"chord: explored both sides, arrival {walk.ready}")
    return walk
