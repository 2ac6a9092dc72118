"""Exact foremost exploration for small instances."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from temporal_explore.core import (
    EarliestArrival,
    Instance,
    TemporalWalk,
    earliest_arrival,
    validate_walk,
)
from temporal_explore.errors import LifetimeExhaustedError, OracleLimitError

logger = logging.getLogger(__name__)

DEFAULT_LIMIT = 15
ENUM_MAX_VERTICES = 7
ENUM_MAX_LIFETIME = 64


@dataclass(frozen=True)
class ExactResult:
    optimum: int
    walk: TemporalWalk


def exact_optimum(inst: Instance, limit: int = DEFAULT_LIMIT) -> ExactResult:
    """Dynamic program over (visited mask, current vertex) keeping the earliest time per state.

    Transitions are foremost walks to each unvisited vertex; earliest-arrival
    runs are memoized per ``(vertex, time)``.
    """

    g = inst.graph
    n = g.n
    if n > limit:
        raise OracleLimitError(f"instance has {n} vertices, exact solver limit is {limit}")

    memo: dict[tuple[int, int], EarliestArrival] = {}

    def reach(v: int, t: int) -> EarliestArrival:
        key = (v, t)
        if key not in memo:
            memo[key] = earliest_arrival(g, v, t)
        return memo[key]

    full = (1 << n) - 1
    start_mask = 1 << inst.start
    layers: dict[int, dict[int, int]] = {start_mask: {inst.start: 0}}
    parent: dict[tuple[int, int], tuple[int, int]] = {}

    for mask in range(start_mask, full):
        states = layers.get(mask)
        if not states:
            continue
        for v, t in states.items():
            result = reach(v, t)
            for u, arrival in result.times.items():
                bit = 1 << u
                if mask & bit:
                    continue
                target = layers.setdefault(mask | bit, {})
                if arrival < target.get(u, arrival + 1):
                    target[u] = arrival
                    parent[(mask | bit, u)] = (mask, v)

    finals = layers.get(full, {})
    if n == 1:
        finals = {inst.start: 0}
    if not finals:
        raise LifetimeExhaustedError("no exploration completes within the lifetime")

    end = min(finals, key=lambda v: (finals[v], v))
    optimum = finals[end]

    chain = []
    state = (full, end)
    while state in parent:
        previous = parent[state]
        chain.append((previous, state[1]))
        state = previous
    moves: list[tuple[int, int]] = []
    for (mask, v), u in reversed(chain):
        moves.extend(reach(v, layers[mask][v]).walk_moves(u))
    walk = TemporalWalk(inst.start, tuple(moves))

    report = validate_walk(inst, walk)
    if not report.valid or report.arrival != optimum or not report.covers(n):
        raise AssertionError(f"oracle witness does not replay: {report}")
    logger.info(f"exact optimum {optimum} for n={n} ({len(memo)} earliest-arrival runs)")
    return ExactResult(optimum, walk)


def exhaustive_enum(
    inst: Instance,
    max_vertices: int = ENUM_MAX_VERTICES,
    max_lifetime: int = ENUM_MAX_LIFETIME,
) -> int:
    """Breadth-first search over every stay-or-move choice at every step."""

    g = inst.graph
    if g.n > max_vertices or g.lifetime > max_lifetime:
        raise OracleLimitError(
            f"exhaustive search is limited to n <= {max_vertices} and L <= {max_lifetime}"
        )

    full = (1 << g.n) - 1
    frontier = {(inst.start, 1 << inst.start)}
    for t in range(g.lifetime + 1):
        if any(mask == full for _, mask in frontier):
            return t
        following = set(frontier)
        for eid in g.present_edges(t):
            u, v = g.edges[eid]
            for pos, mask in frontier:
                if pos == u:
                    following.add((v, mask | (1 << v)))
                elif pos == v:
                    following.add((u, mask | (1 << u)))
        frontier = following
    if any(mask == full for _, mask in frontier):
        return g.lifetime + 1
    raise LifetimeExhaustedError("no exploration completes within the lifetime")
