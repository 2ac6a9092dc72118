"""Single-agent exploration of temporal graphs of bounded treewidth.

Separator bags chosen along a nice tree decomposition split the vertices into
small components. Each component is explored by one virtual agent per
adjacent separator vertex, and the agents are merged into a single walk by
phase compression.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

from networkx.utils import UnionFind

from temporal_explore.core import (
    Instance,
    MultiAgentSchedule,
    StepView,
    TemporalGraph,
    TemporalWalk,
    components,
    greedy_extend,
    plan_reach,
)
from temporal_explore.decomposition import (
    NiceDecomposition,
    TreeDecomposition,
    make_nice,
    min_fill_decomposition,
)
from temporal_explore.errors import LifetimeExhaustedError
from temporal_explore.reductions import Compression, compress_phases

logger = logging.getLogger(__name__)


# ----------------------------------------------------------------------
# Separator selection
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class Selection:
    """Why a nice node became a separator."""

    node: int
    unmarked: int
    topmost: int


@dataclass(frozen=True)
class Component:
    vertices: frozenset[int]
    anchors: tuple[int, ...]


@dataclass
class SeparatorPlan:
    selected: list[Selection]
    separators: frozenset[int]
    components: list[Component] = field(default_factory=list)

    @property
    def largest(self) -> int:
        return max((len(c.vertices) for c in self.components), default=0)

    @property
    def max_anchors(self) -> int:
        return max((len(c.anchors) for c in self.components), default=0)


def select_separators(nice: NiceDecomposition, n: int) -> tuple[list[Selection], list[set[int]]]:
    """Post-order separator rule over ``nice``.

    A node is selected when more than ``sqrt(n)`` unmarked vertices lie
    strictly below it, or when at least two topmost selected nodes lie below
    it. Selecting marks its bag and everything below. Returns the selections
    and the vertex groups marked by each one, followed by the unmarked rest.
    """

    limit = math.sqrt(n)
    marked: set[int] = set()
    chosen: set[int] = set()
    selections: list[Selection] = []
    groups: list[set[int]] = []
    below: dict[int, set[int]] = {}
    topmost: dict[int, int] = {}

    for node_id in nice.postorder():
        node = nice.nodes[node_id]
        unmarked: set[int] = set()
        tops = 0
        for child in node.children:
            unmarked |= nice.nodes[child].bag | below.pop(child)
            tops += 1 if child in chosen else topmost.pop(child)
        unmarked -= marked
        if len(unmarked) > limit or tops >= 2:
            selections.append(Selection(node_id, len(unmarked), tops))
            chosen.add(node_id)
            fresh = (unmarked | node.bag) - marked
            marked |= fresh
            groups.append(fresh)
            unmarked = set()
        below[node_id] = unmarked
        topmost[node_id] = tops

    groups.append(set(range(n)) - marked)
    return selections, groups


def plan_separators(g: TemporalGraph, nice: NiceDecomposition) -> SeparatorPlan:
    """Separator vertices and the components they leave, each with its adjacent separators.

    Marking groups that share an edge outside the separators are merged, so
    every component is closed under adjacency in ``G - S``.
    """

    selections, groups = select_separators(nice, g.n)
    separators = frozenset().union(*(nice.nodes[s.node].bag for s in selections))

    forest = UnionFind(v for v in range(g.n) if v not in separators)
    for group in groups:
        members = sorted(group - separators)
        for v in members[1:]:
            forest.union(members[0], v)
    for u, v in g.edges:
        if u not in separators and v not in separators:
            forest.union(u, v)

    plan = SeparatorPlan(selections, separators)
    for part in sorted(forest.to_sets(), key=min):
        anchors = sorted(
            {x for v in part for x, _ in g.adjacency[v] if x in separators}
        )
        plan.components.append(Component(frozenset(part), tuple(anchors)))
    logger.info(
        f"treewidth: {len(selections)} separator bags, {len(separators)} separator vertices, "
        f"{len(plan.components)} components (largest {plan.largest}, anchors <= {plan.max_anchors})"
    )
    return plan


# ----------------------------------------------------------------------
# Component exploration
# ----------------------------------------------------------------------


@dataclass
class ComponentBuilder:
    """Phase builder exploring one component with an agent per anchor.

    Every agent first walks from ``origin`` to its anchor. Then each pending
    vertex gets a window of ``a * threshold`` steps; the anchor connected to
    it inside the component in the most steps of the window sends its agent
    there and back on exactly those steps.
    """

    graph: TemporalGraph
    origin: int
    component: Component
    slides: int = 0

    def __post_init__(self) -> None:
        n = self.graph.n
        self.anchors = self.component.anchors or (self.origin,)
        self.scope = self.component.vertices | frozenset(self.anchors)
        self.threshold = max(math.ceil(4 * math.sqrt(n)), 2 * (len(self.scope) - 1))
        self.window = len(self.anchors) * self.threshold

    def _connected_steps(self, v: int, start: int) -> dict[int, list[int]]:
        end = min(start + self.window, self.graph.lifetime + 1)
        hits: dict[int, list[int]] = {a: [] for a in self.anchors}
        for step in range(start, end):
            pairs = [
                self.graph.edges[eid]
                for eid in self.graph.present_edges(step)
                if self.graph.edges[eid][0] in self.scope and self.graph.edges[eid][1] in self.scope
            ]
            forest = components(self.scope, pairs)
            for anchor in self.anchors:
                if forest[anchor] == forest[v]:
                    hits[anchor].append(step)
        return hits

    def __call__(self, t: int, pending: frozenset[int]) -> MultiAgentSchedule:
        g = self.graph
        moves: list[list[tuple[int, int]]] = []
        ready = t
        for anchor in self.anchors:
            reach = plan_reach(g, self.origin, anchor, t, range(g.n), check=False)
            moves.append(list(reach.walk.moves))
            ready = max(ready, reach.walk.ready)

        todo = sorted(pending & self.component.vertices)
        seen = {self.origin, *(v for agent in moves for _, v in agent)}
        cursor = ready
        for v in todo:
            if v in seen:
                continue
            while True:
                if cursor > g.lifetime:
                    raise LifetimeExhaustedError(f"lifetime ends before {v} is visited")
                hits = self._connected_steps(v, cursor)
                anchor = max(self.anchors, key=lambda a: (len(hits[a]), -a))
                if len(hits[anchor]) >= self.threshold:
                    break
                self.slides += 1
                logger.warning(
                    f"treewidth: {v} joined to an anchor in only {len(hits[anchor])} of "
                    f"{self.window} steps from {cursor}, sliding the window"
                )
                cursor += self.window

            view = StepView(g, hits[anchor])
            out = plan_reach(view, anchor, v, 0, self.scope, check=False)
            back = plan_reach(view, v, anchor, out.arrival, self.scope, check=False)
            agent = moves[self.anchors.index(anchor)]
            agent.extend(out.walk.moves + back.walk.moves)
            seen.update(step_v for _, step_v in out.walk.moves)
            logger.debug(f"treewidth: anchor {anchor} visits {v} in window from {cursor}")
            cursor += self.window

        return MultiAgentSchedule(
            tuple(TemporalWalk(self.origin, tuple(m), t) for m in moves)
        )


@dataclass
class TreewidthRun:
    walk: TemporalWalk
    plan: SeparatorPlan
    width: int
    phases: list[Compression] = field(default_factory=list)
    slides: int = 0


def run_treewidth(inst: Instance, td: TreeDecomposition | None = None) -> TreewidthRun:
    """Explore ``inst`` component by component and return the walk with its bookkeeping.

    Without ``td`` a min-fill decomposition is computed.
    """

    g = inst.graph
    if td is None:
        td = min_fill_decomposition(g.to_networkx())
    td.validate(g.n, g.edges)
    nice = make_nice(td)
    nice.check_form()
    plan = plan_separators(g, nice)

    origin = inst.start
    walk = TemporalWalk(origin)
    run = TreewidthRun(walk, plan, td.width)
    for component in plan.components:
        if walk.end != origin:
            back = plan_reach(g, walk.end, origin, walk.ready, range(g.n), check=False)
            walk = walk.extended(back.walk.moves)
        builder = ComponentBuilder(g, origin, component)
        compression = compress_phases(g, origin, walk.ready, component.vertices, builder, walk)
        walk = compression.walk
        run.phases.append(compression)
        run.slides += builder.slides

    walk = greedy_extend(g, walk)
    run.walk = walk
    logger.info(
        f"treewidth: n={g.n}, width {td.width}, {sum(len(c.trace) for c in run.phases)} phases, "
        f"arrival {walk.ready}"
    )
    return run


def explore_treewidth(inst: Instance, td: TreeDecomposition | None = None) -> TemporalWalk:
    return run_treewidth(inst, td).walk
