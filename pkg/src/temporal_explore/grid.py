"""Multi-agent exploration of temporal 2 x n grids.

Vertex ``(r, c)`` of a grid with ``columns`` columns has id ``r * columns + c``.
The explorer recursively halves the unexplored column range: four corner
agents sweep a half inward while the remaining agents explore, on the steps
where neither corner pair moves, the columns the sweep will not reach.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache

from temporal_explore.core import (
    Instance,
    MultiAgentSchedule,
    StepView,
    TemporalGraph,
    TemporalWalk,
    components,
    earliest_arrival,
    norm_edge,
)
from temporal_explore.errors import GridPremiseError, LifetimeExhaustedError, ShapeError
from temporal_explore.generators import grid_edges

logger = logging.getLogger(__name__)


def grid_columns(graph: TemporalGraph) -> int:
    """Number of columns when the underlying graph is the canonical 2 x n grid."""

    if graph.n % 2:
        raise ShapeError("a 2 x n grid has an even number of vertices")
    columns = graph.n // 2
    expected = {norm_edge(u, v) for u, v in grid_edges(columns)}
    if set(graph.edge_index) != expected:
        raise ShapeError(f"underlying graph is not the 2 x {columns} grid")
    return columns


def agent_count(columns: int) -> int:
    return 4 * max(1, math.ceil(math.log2(columns)))


@lru_cache(maxsize=None)
def half_budget(width: int) -> int:
    """Sweep window for a half of ``width`` columns (0 when the corners cover it)."""

    if width <= 2:
        return 0
    return level_budget(width, width - 2) + width - 1


@lru_cache(maxsize=None)
def level_budget(domain: int, width: int) -> int:
    """Steps needed to explore ``width`` columns inside a ``domain``-column subgrid."""

    if width <= 0:
        return 0
    total = 0
    for half in (width - width // 2, width // 2):
        if half:
            total += 2 * domain - 1 + half_budget(half)
    return total


@lru_cache(maxsize=None)
def recursion_depth(width: int) -> int:
    if width <= 0:
        return 0
    return max(
        1 + (recursion_depth(half - 2) if half > 2 else 0)
        for half in (width - width // 2, width // 2)
        if half
    )


@dataclass
class GridRun:
    """Mutable state of one exploration: agent walks and recursion statistics."""

    columns: int
    start_step: int
    positions: list[int]
    moves: list[list[tuple[int, int]]]
    depth: int = 0
    budget: int = 0
    still_steps: list[int] = field(default_factory=list)

    def vertex(self, row: int, col: int) -> int:
        return row * self.columns + col

    def schedule(self, start: int) -> MultiAgentSchedule:
        return MultiAgentSchedule(
            tuple(TemporalWalk(start, tuple(m), self.start_step) for m in self.moves)
        )

    def move(self, agent: int, step: int, target: int) -> None:
        self.moves[agent].append((step, target))
        self.positions[agent] = target


def _place(
    run: GridRun,
    view: StepView,
    t: int,
    domain: frozenset[int],
    targets: dict[int, int],
    nested: bool,
) -> int:
    """Route each agent to its target inside ``domain`` within ``|domain| - 1`` view steps."""

    window = len(domain) - 1
    pending = {a: v for a, v in targets.items() if run.positions[a] != v}
    if not pending:
        return t + window
    for index in range(t, min(t + window, len(view))):
        pairs = [(u, v) for _, u, v in view.present_edges(index)]
        forest = components(domain, pairs)
        for agent, target in pending.items():
            if forest[run.positions[agent]] != forest[target]:
                step = view.base_step(index)
                raise GridPremiseError(
                    f"agent {agent} at {run.positions[agent]} cannot reach {target} "
                    f"inside the subgrid at step {step}"
                )
    if t + window > len(view):
        if nested:
            raise GridPremiseError("still steps ran out during placement")
        raise LifetimeExhaustedError("lifetime ends during agent placement")

    for agent, target in pending.items():
        result = earliest_arrival(view, run.positions[agent], t, stop_at=[target])
        if not result.reached(target) or result.times[target] > t + window:
            raise GridPremiseError(f"agent {agent} missed {target} within {window} steps")
        for step, v in result.walk_moves(target):
            run.move(agent, step, v)
    return t + window


def _explore(
    run: GridRun,
    view: StepView,
    t: int,
    domain: tuple[int, int],
    cols: tuple[int, int],
    agents: list[int],
    level: int,
) -> int:
    """Explore columns ``cols`` using view steps from ``t``; returns the first free view step."""

    c0, c1 = cols
    if c0 > c1:
        return t
    run.depth = max(run.depth, level)
    nested = level > 1
    d0, d1 = domain
    members = frozenset(run.vertex(r, c) for r in range(2) for c in range(d0, d1 + 1))
    local = view.restrict(vertices=members)
    mid = (c0 + c1) // 2

    for h0, h1 in ((c0, mid), (mid + 1, c1)):
        if h0 > h1:
            continue
        width = h1 - h0 + 1
        sweep_start = t + len(members) - 1
        budget = half_budget(width)
        corner, middle = agents[:4], agents[4:]

        # corner sweep, computed ahead of placement
        a, b = h0, h1
        left_moves: list[tuple[int, int]] = []
        right_moves: list[tuple[int, int]] = []
        still: list[int] = []
        for index in range(sweep_start, sweep_start + budget):
            if b - a <= 1:
                break
            if index >= len(local):
                if nested:
                    raise GridPremiseError("still steps ran out during a corner sweep")
                raise LifetimeExhaustedError("lifetime ends during a corner sweep")
            step = local.base_step(index)
            left_ok = local.present(run.vertex(0, a), run.vertex(0, a + 1), index) and local.present(
                run.vertex(1, a), run.vertex(1, a + 1), index
            )
            right_ok = local.present(
                run.vertex(0, b), run.vertex(0, b - 1), index
            ) and local.present(run.vertex(1, b), run.vertex(1, b - 1), index)
            if left_ok:
                a += 1
                left_moves.append((step, a))
            if right_ok:
                b -= 1
                right_moves.append((step, b))
            if not left_ok and not right_ok:
                still.append(index)

        inner = (a + 1, b - 1)
        targets = {
            corner[0]: run.vertex(0, h0),
            corner[1]: run.vertex(1, h0),
            corner[2]: run.vertex(0, h1),
            corner[3]: run.vertex(1, h1),
        }
        if inner[0] <= inner[1]:
            meeting = run.vertex(0, (inner[0] + inner[1]) // 2)
            targets.update({agent: meeting for agent in middle})
        _place(run, local, t, members, targets, nested)

        for step, col in left_moves:
            run.move(corner[0], step, run.vertex(0, col))
            run.move(corner[1], step, run.vertex(1, col))
        for step, col in right_moves:
            run.move(corner[2], step, run.vertex(0, col))
            run.move(corner[3], step, run.vertex(1, col))

        if inner[0] <= inner[1]:
            if len(middle) < 4:
                raise GridPremiseError(f"no agents left for columns {inner} at depth {level}")
            run.still_steps.append(len(still))
            sub_view = local.restrict(indices=still)
            used = _explore(run, sub_view, 0, (h0, h1), inner, middle, level + 1)
            logger.debug(
                f"grid level {level}: columns {h0}..{h1} used {used} of {len(still)} still steps"
            )
        t = sweep_start + budget
    return t


def run_grid(inst: Instance, t0: int = 0) -> GridRun:
    """Run the recursive grid exploration and return its full state."""

    columns = grid_columns(inst.graph)
    k = agent_count(columns)
    run = GridRun(columns, t0, [inst.start] * k, [[] for _ in range(k)])
    view = StepView.full(inst.graph, t0)
    run.budget = _explore(run, view, 0, (0, columns - 1), (0, columns - 1), list(range(k)), 1)
    logger.info(
        f"grid: {columns} columns, {k} agents, depth {run.depth}, budget {run.budget} steps"
    )
    return run


def explore_grid_multi(inst: Instance, t0: int = 0) -> MultiAgentSchedule:
    """Explore a temporal 2 x n grid with ``4 * ceil(log2 n)`` agents starting at ``inst.start``.

    All walks start at step ``t0``. Raises :class:`GridPremiseError` when a
    still step leaves the unexplored columns disconnected inside their half.
    """

    return run_grid(inst, t0).schedule(inst.start)
