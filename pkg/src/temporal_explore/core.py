"""Temporal graph model, per-step views, walk validation and reachability.

Everything else in the package builds on the types defined here. Graphs,
instances and walks are immutable; a :class:`TemporalGraph` keeps a private
snapshot cache that only ever stores pure functions of its fields.
"""

from __future__ import annotations

import bisect
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence, Union

import networkx as nx
from networkx.utils import UnionFind

from temporal_explore.errors import (
    InstanceError,
    LifetimeExhaustedError,
    PreconditionError,
    StepRangeError,
)

logger = logging.getLogger(__name__)

INF = math.inf

Edge = tuple[int, int]
Move = tuple[int, int]


def norm_edge(u: int, v: int) -> Edge:
    """Return the undirected edge ``{u, v}`` as an ordered pair."""
    return (u, v) if u < v else (v, u)


# ----------------------------------------------------------------------
# Presence patterns
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class Always:
    """Edge present at every step."""

    def contains(self, step: int) -> bool:
        return True

    def change_points(self, lifetime: int) -> list[int]:
        return []

    @property
    def period(self) -> int | None:
        return 1


@dataclass(frozen=True)
class Steps:
    """Edge present exactly at an explicit set of steps."""

    steps: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(sorted({int(s) for s in self.steps})))

    def contains(self, step: int) -> bool:
        index = bisect.bisect_left(self.steps, step)
        return index < len(self.steps) and self.steps[index] == step

    def change_points(self, lifetime: int) -> list[int]:
        points: set[int] = set()
        for step in self.steps:
            points.add(step)
            if step + 1 <= lifetime:
                points.add(step + 1)
        return sorted(p for p in points if 0 <= p <= lifetime)

    @property
    def period(self) -> int | None:
        return 1 if not self.steps else None


@dataclass(frozen=True)
class Intervals:
    """Edge present on a sorted list of disjoint inclusive step ranges."""

    intervals: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        spans = tuple((int(a), int(b)) for a, b in self.intervals)
        for a, b in spans:
            if a > b:
                raise InstanceError(f"interval [{a}, {b}] is empty")
        for (_, b1), (a2, _) in zip(spans, spans[1:]):
            if a2 <= b1:
                raise InstanceError("intervals must be sorted and disjoint")
        object.__setattr__(self, "intervals", spans)

    @cached_property
    def _starts(self) -> list[int]:
        return [a for a, _ in self.intervals]

    def contains(self, step: int) -> bool:
        index = bisect.bisect_right(self._starts, step) - 1
        return index >= 0 and step <= self.intervals[index][1]

    def change_points(self, lifetime: int) -> list[int]:
        points: set[int] = set()
        for a, b in self.intervals:
            points.add(a)
            points.add(b + 1)
        return sorted(p for p in points if 0 <= p <= lifetime)

    @property
    def period(self) -> int | None:
        return 1 if not self.intervals else None


@dataclass(frozen=True)
class Periodic:
    """Present for ``present`` steps, then absent for ``absent`` steps, from ``offset``."""

    offset: int
    present: int
    absent: int

    def __post_init__(self) -> None:
        if self.present < 1 or self.absent < 0:
            raise InstanceError("periodic runs need present >= 1 and absent >= 0")

    @property
    def period(self) -> int | None:
        return self.present + self.absent

    def contains(self, step: int) -> bool:
        return (step - self.offset) % (self.present + self.absent) < self.present

    def change_points(self, lifetime: int) -> list[int]:
        if self.absent == 0:
            return []
        cycle = self.present + self.absent
        first_on = self.offset % cycle
        first_off = (self.offset + self.present) % cycle
        points = list(range(first_on, lifetime + 1, cycle))
        points.extend(range(first_off, lifetime + 1, cycle))
        return sorted(points)


@dataclass(frozen=True)
class Cyclic:
    """Present at step ``t`` iff ``t mod period`` is one of ``residues``."""

    period: int
    residues: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.period < 1:
            raise InstanceError("cyclic period must be >= 1")
        residues = tuple(sorted({int(r) for r in self.residues}))
        if any(r < 0 or r >= self.period for r in residues):
            raise InstanceError("cyclic residues must lie in [0, period)")
        object.__setattr__(self, "residues", residues)

    @cached_property
    def _lookup(self) -> frozenset[int]:
        return frozenset(self.residues)

    def contains(self, step: int) -> bool:
        return step % self.period in self._lookup

    def change_points(self, lifetime: int) -> list[int]:
        toggles = [
            r
            for r in range(self.period)
            if self.contains(r) != self.contains(r - 1)
        ]
        points: list[int] = []
        for r in toggles:
            points.extend(range(r, lifetime + 1, self.period))
        return sorted(points)


Pattern = Union[Always, Steps, Intervals, Periodic, Cyclic]


def present_runs(pattern: Pattern, lifetime: int) -> list[tuple[int, int]]:
    """Return the maximal present runs of ``pattern`` inside ``[0, lifetime]``."""

    points = sorted({0, *pattern.change_points(lifetime)})
    runs: list[tuple[int, int]] = []
    for index, start in enumerate(points):
        end = points[index + 1] - 1 if index + 1 < len(points) else lifetime
        if not pattern.contains(start):
            continue
        if runs and runs[-1][1] + 1 == start:
            runs[-1] = (runs[-1][0], end)
        else:
            runs.append((start, end))
    return runs


@dataclass(frozen=True)
class AbsenceRun:
    """A maximal run of absent steps; ``cut`` runs touch step 0 or the lifetime end."""

    start: int
    length: int
    cut: bool


def absence_runs(pattern: Pattern, lifetime: int) -> list[AbsenceRun]:
    """Return the maximal absence runs of ``pattern`` inside ``[0, lifetime]``."""

    runs: list[AbsenceRun] = []
    cursor = 0
    for a, b in present_runs(pattern, lifetime):
        if a > cursor:
            runs.append(AbsenceRun(cursor, a - cursor, cut=cursor == 0))
        cursor = b + 1
    if cursor <= lifetime:
        runs.append(AbsenceRun(cursor, lifetime + 1 - cursor, cut=True))
    return runs


def union_patterns(patterns: Sequence[Pattern], lifetime: int) -> Pattern:
    """Pattern present whenever any of ``patterns`` is present."""

    if not patterns:
        return Steps(())
    if any(isinstance(p, Always) for p in patterns):
        return Always()
    if len(patterns) == 1:
        return patterns[0]

    spans = sorted(span for p in patterns for span in present_runs(p, lifetime))
    merged: list[tuple[int, int]] = []
    for a, b in spans:
        if merged and a <= merged[-1][1] + 1:
            merged[-1] = (merged[-1][0], max(merged[-1][1], b))
        else:
            merged.append((a, b))
    if merged == [(0, lifetime)]:
        return Always()
    return Intervals(tuple(merged))


# ----------------------------------------------------------------------
# Graphs and instances
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class TemporalGraph:
    """Vertices ``0..n-1``, underlying edges and their presence over ``[0, lifetime]``."""

    n: int
    edges: tuple[Edge, ...]
    presence: tuple[Pattern, ...]
    lifetime: int
    _snapshots: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        object.__setattr__(self, "presence", tuple(self.presence))

        if self.n < 1:
            raise InstanceError("a temporal graph needs at least one vertex")
        if self.lifetime < 0:
            raise InstanceError("lifetime must be >= 0")
        if len(self.presence) != len(self.edges):
            raise InstanceError("every edge needs exactly one presence pattern")

        seen: set[Edge] = set()
        for u, v in self.edges:
            if u == v:
                raise InstanceError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InstanceError(f"edge {{{u}, {v}}} references a vertex outside [0, {self.n})")
            key = norm_edge(u, v)
            if key in seen:
                raise InstanceError(f"duplicate edge {{{u}, {v}}}")
            seen.add(key)

        for pattern in self.presence:
            if isinstance(pattern, Steps) and pattern.steps:
                if pattern.steps[0] < 0 or pattern.steps[-1] > self.lifetime:
                    raise InstanceError("step pattern references steps outside the lifetime")
            if isinstance(pattern, Intervals) and pattern.intervals:
                if pattern.intervals[0][0] < 0 or pattern.intervals[-1][1] > self.lifetime:
                    raise InstanceError("interval pattern references steps outside the lifetime")

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {norm_edge(u, v): eid for eid, (u, v) in enumerate(self.edges)}

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per vertex, ``(neighbour, edge id)`` pairs sorted by neighbour."""

        lists: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for eid, (u, v) in enumerate(self.edges):
            lists[u].append((v, eid))
            lists[v].append((u, eid))
        return tuple(tuple(sorted(items)) for items in lists)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @cached_property
    def hyperperiod(self) -> int | None:
        """Common period of all patterns, or None when some pattern is aperiodic."""

        period = 1
        for pattern in self.presence:
            p = pattern.period
            if p is None:
                return None
            period = math.lcm(period, p)
        return period

    @cached_property
    def change_points(self) -> tuple[int, ...]:
        """Steps at which the edge set may differ from the previous step (always incl. 0)."""

        horizon = self.lifetime
        if self.hyperperiod is not None:
            horizon = min(self.lifetime, self.hyperperiod - 1)
        points = {0}
        for pattern in self.presence:
            points.update(p for p in pattern.change_points(horizon) if p <= horizon)
        return tuple(sorted(points))

    def check_step(self, step: int) -> None:
        if not 0 <= step <= self.lifetime:
            raise StepRangeError(step, self.lifetime)

    def snapshot_key(self, step: int) -> int:
        """Key shared by all steps with the same edge set."""

        if self.hyperperiod is not None:
            return step % self.hyperperiod
        return bisect.bisect_right(self.change_points, step) - 1

    def present_edges(self, step: int) -> tuple[int, ...]:
        """Ids of the edges present at ``step``, in increasing order."""

        self.check_step(step)
        key = self.snapshot_key(step)
        cached = self._snapshots.get(key)
        if cached is None:
            cached = tuple(
                eid for eid, pattern in enumerate(self.presence) if pattern.contains(step)
            )
            self._snapshots[key] = cached
        return cached

    def edge_present(self, eid: int, step: int) -> bool:
        self.check_step(step)
        return self.presence[eid].contains(step)

    def with_presence(self, updates: dict[int, Pattern]) -> TemporalGraph:
        """Copy of this graph with some edges' patterns replaced."""

        presence = tuple(updates.get(eid, p) for eid, p in enumerate(self.presence))
        return TemporalGraph(self.n, self.edges, presence, self.lifetime)

    def to_networkx(self) -> nx.Graph:
        """The underlying static graph, edge ids stored as the ``eid`` attribute."""

        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        for eid, (u, v) in enumerate(self.edges):
            graph.add_edge(u, v, eid=eid)
        return graph


@dataclass(frozen=True)
class Instance:
    """A temporal graph with a start vertex."""

    graph: TemporalGraph
    start: int

    def __post_init__(self) -> None:
        if not 0 <= self.start < self.graph.n:
            raise InstanceError(f"start vertex {self.start} outside [0, {self.graph.n})")

    @property
    def n(self) -> int:
        return self.graph.n


@dataclass(frozen=True)
class TemporalWalk:
    """A time-respecting walk: ``moves`` are ``(step, destination)`` pairs."""

    start: int
    moves: tuple[Move, ...] = ()
    start_time: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "moves", tuple((int(s), int(v)) for s, v in self.moves))

    @property
    def end(self) -> int:
        return self.moves[-1][1] if self.moves else self.start

    @property
    def ready(self) -> int:
        """First step at which the walk's end vertex can move again."""
        return self.moves[-1][0] + 1 if self.moves else self.start_time

    def visits(self) -> list[tuple[int, int]]:
        """``(time, vertex)`` positions, starting with the start vertex."""
        return [(self.start_time, self.start)] + [(step + 1, v) for step, v in self.moves]

    def extended(self, moves: Iterable[Move]) -> TemporalWalk:
        return TemporalWalk(self.start, self.moves + tuple(moves), self.start_time)


@dataclass(frozen=True)
class MultiAgentSchedule:
    """One temporal walk per agent."""

    agents: tuple[TemporalWalk, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "agents", tuple(self.agents))

    @property
    def k(self) -> int:
        return len(self.agents)


# ----------------------------------------------------------------------
# Step views
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class StepView:
    """A temporal graph seen through a step subsequence and a vertex subset.

    View step ``i`` is base step ``steps[i]``; edges with an endpoint outside
    ``vertices`` are invisible.
    """

    base: TemporalGraph
    steps: Sequence[int]
    vertices: frozenset[int] | None = None
    _filtered: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    @classmethod
    def full(cls, graph: TemporalGraph, t0: int = 0) -> StepView:
        return cls(graph, range(t0, graph.lifetime + 1))

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def vertex_count(self) -> int:
        return self.base.n if self.vertices is None else len(self.vertices)

    def contains_vertex(self, v: int) -> bool:
        return self.vertices is None or v in self.vertices

    def base_step(self, index: int) -> int:
        return self.steps[index]

    def index_of(self, step: int) -> int:
        """View index of the first view step at or after base ``step``."""
        return bisect.bisect_left(self.steps, step)

    def present_edges(self, index: int) -> list[tuple[int, int, int]]:
        """``(edge id, u, v)`` triples visible at view step ``index``."""

        step = self.steps[index]
        eids = self.base.present_edges(step)
        if self.vertices is None:
            edges = self.base.edges
            return [(eid, edges[eid][0], edges[eid][1]) for eid in eids]
        key = self.base.snapshot_key(step)
        cached = self._filtered.get(key)
        if cached is None:
            cached = [
                (eid, u, v)
                for eid in eids
                for u, v in (self.base.edges[eid],)
                if u in self.vertices and v in self.vertices
            ]
            self._filtered[key] = cached
        return cached

    def present(self, u: int, v: int, index: int) -> bool:
        if not (self.contains_vertex(u) and self.contains_vertex(v)):
            return False
        eid = self.base.edge_index.get(norm_edge(u, v))
        return eid is not None and self.base.presence[eid].contains(self.steps[index])

    def restrict(
        self,
        indices: Iterable[int] | None = None,
        vertices: Iterable[int] | None = None,
    ) -> StepView:
        """Sub-view over some of this view's steps and/or vertices."""

        steps = self.steps if indices is None else tuple(self.steps[i] for i in indices)
        subset = self.vertices
        if vertices is not None:
            chosen = frozenset(vertices)
            subset = chosen if subset is None else subset & chosen
        return StepView(self.base, steps, subset)


def as_view(source: TemporalGraph | StepView) -> StepView:
    return source if isinstance(source, StepView) else StepView.full(source)


# ----------------------------------------------------------------------
# Per-step queries
# ----------------------------------------------------------------------


def edge_present(g: TemporalGraph, eid: int, step: int) -> bool:
    """True iff edge ``eid`` is present at ``step``."""
    return g.edge_present(eid, step)


def snapshot(g: TemporalGraph, step: int) -> list[Edge]:
    """The edges present at ``step``."""
    return [g.edges[eid] for eid in g.present_edges(step)]


def components(vertices: Iterable[int], edges: Iterable[Edge]) -> UnionFind:
    """Union-find over ``vertices`` joined by ``edges``."""

    forest = UnionFind(vertices)
    for u, v in edges:
        forest.union(u, v)
    return forest


def _connected(n: int, edges: Iterable[Edge]) -> bool:
    forest = components(range(n), edges)
    root = forest[0]
    return all(forest[v] == root for v in range(1, n))


@dataclass(frozen=True)
class ConnectivityReport:
    connected: bool
    failing_step: int | None = None

    def __bool__(self) -> bool:
        return self.connected


def is_always_connected(g: TemporalGraph) -> ConnectivityReport:
    """Check that every snapshot spans all vertices, evaluated at change points only."""

    for step in g.change_points:
        if not _connected(g.n, snapshot(g, step)):
            logger.debug(f"snapshot at step {step} is disconnected")
            return ConnectivityReport(False, step)
    return ConnectivityReport(True)


# ----------------------------------------------------------------------
# Validation
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    """First invalid move of a walk. ``index`` is -1 for a wrong start."""

    index: int
    reason: str
    detail: str

    def __str__(self) -> str:
        return f"move {self.index}: {self.reason} ({self.detail})"


@dataclass(frozen=True)
class WalkReport:
    valid: bool
    arrival: int | None
    visited: frozenset[int]
    first_visit: dict[int, int] = field(default_factory=dict, compare=False)
    violation: Violation | None = None

    def covers(self, n: int) -> bool:
        return len(self.visited) == n


@dataclass(frozen=True)
class ScheduleReport:
    valid: bool
    arrival: int | None
    coverage: bool
    visited: frozenset[int]
    violations: tuple[tuple[int, Violation], ...] = ()


def validate_walk(inst: Instance, walk: TemporalWalk) -> WalkReport:
    """Check a walk against the instance and compute its arrival time.

    Returns a report instead of raising; ``violation`` names the first bad
    move. A move at step ``i`` reaches its destination at time ``i + 1``.
    """

    g = inst.graph
    if walk.start != inst.start:
        violation = Violation(-1, "start", f"walk starts at {walk.start}, instance at {inst.start}")
        return WalkReport(False, None, frozenset(), violation=violation)

    first_visit = {walk.start: walk.start_time}
    position = walk.start
    previous = walk.start_time - 1
    for index, (step, target) in enumerate(walk.moves):
        violation = None
        if step <= previous:
            violation = Violation(index, "step-order", f"step {step} after step {previous}")
        elif not 0 <= step <= g.lifetime:
            violation = Violation(index, "step-range", f"step {step} outside [0, {g.lifetime}]")
        else:
            eid = g.edge_index.get(norm_edge(position, target)) if position != target else None
            if eid is None:
                violation = Violation(index, "non-adjacent", f"{position} and {target} at step {step}")
            elif not g.presence[eid].contains(step):
                violation = Violation(
                    index, "absent-edge", f"{{{position}, {target}}} absent at step {step}"
                )
        if violation is not None:
            return WalkReport(
                False, None, frozenset(first_visit), dict(first_visit), violation
            )
        first_visit.setdefault(target, step + 1)
        position = target
        previous = step

    return WalkReport(True, max(first_visit.values()), frozenset(first_visit), first_visit)


def validate_schedule(inst: Instance, schedule: MultiAgentSchedule) -> ScheduleReport:
    """Validate every agent's walk and combine their first visits."""

    first_visit: dict[int, int] = {}
    violations: list[tuple[int, Violation]] = []
    for agent, walk in enumerate(schedule.agents):
        report = validate_walk(inst, walk)
        if not report.valid:
            violations.append((agent, report.violation))
            continue
        for v, time in report.first_visit.items():
            if time < first_visit.get(v, INF):
                first_visit[v] = time

    if violations:
        return ScheduleReport(False, None, False, frozenset(first_visit), tuple(violations))
    if not first_visit:
        first_visit[inst.start] = 0
    return ScheduleReport(
        True,
        max(first_visit.values()),
        len(first_visit) == inst.n,
        frozenset(first_visit),
    )


# ----------------------------------------------------------------------
# Earliest arrival and reachability
# ----------------------------------------------------------------------


@dataclass
class EarliestArrival:
    """Earliest reach times (view time) from ``source`` at view step ``t0``."""

    view: StepView
    source: int
    t0: int
    times: dict[int, int]
    pred: dict[int, tuple[int, int]]

    def arrival(self, v: int) -> float:
        return self.times.get(v, INF)

    def reached(self, v: int) -> bool:
        return v in self.times

    def walk_moves(self, v: int) -> list[Move]:
        """Moves (in base steps) of a foremost walk from the source to ``v``."""

        if v not in self.times:
            raise KeyError(f"vertex {v} is unreachable")
        moves: list[Move] = []
        while v != self.source:
            index, previous = self.pred[v]
            moves.append((self.view.base_step(index), v))
            v = previous
        moves.reverse()
        return moves

    def walk_to(self, v: int) -> TemporalWalk:
        return TemporalWalk(self.source, tuple(self.walk_moves(v)), _start_step(self.view, self.t0))


def earliest_arrival(
    source_graph: TemporalGraph | StepView,
    source: int,
    t0: int = 0,
    *,
    stop_at: Iterable[int] | None = None,
    stop_at_any: Iterable[int] | None = None,
) -> EarliestArrival:
    """Time-layered frontier expansion from ``(source, t0)``; waiting is allowed.

    Unreachable vertices are absent from ``times`` (``arrival`` reports INF).
    Ties go to the smallest edge id.
    """

    view = as_view(source_graph)
    if not 0 <= t0 <= len(view):
        raise StepRangeError(t0, len(view))

    times = {source: t0}
    pred: dict[int, tuple[int, int]] = {}
    remaining = set(stop_at) - {source} if stop_at is not None else None
    any_targets = frozenset(stop_at_any) if stop_at_any is not None else None
    total = view.vertex_count

    index = t0
    while index < len(view) and len(times) < total:
        if remaining is not None and not remaining:
            break
        found = False
        for _, u, v in view.present_edges(index):
            tu = times.get(u)
            tv = times.get(v)
            if tu is not None and tu <= index and tv is None:
                times[v] = index + 1
                pred[v] = (index, u)
                reached = v
            elif tv is not None and tv <= index and tu is None:
                times[u] = index + 1
                pred[u] = (index, v)
                reached = u
            else:
                continue
            if remaining is not None:
                remaining.discard(reached)
            if any_targets is not None and reached in any_targets:
                found = True
        index += 1
        if found:
            break

    return EarliestArrival(view, source, t0, times, pred)


def greedy_extend(
    g: TemporalGraph,
    walk: TemporalWalk,
    targets: Iterable[int] | None = None,
) -> TemporalWalk:
    """Extend ``walk`` by foremost hops until every target has been visited.

    Each hop goes to the pending vertex with the smallest earliest-arrival
    time, ties to the smallest id. Vertices passed on the way count as visited.
    """

    visited = {walk.start, *(v for _, v in walk.moves)}
    pending = set(range(g.n) if targets is None else targets) - visited
    current = walk
    while pending:
        result = earliest_arrival(g, current.end, current.ready, stop_at_any=pending)
        reached = [v for v in pending if result.reached(v)]
        if not reached:
            raise LifetimeExhaustedError(
                f"lifetime ends with {len(pending)} vertices unvisited", best=current
            )
        target = min(reached, key=lambda v: (result.times[v], v))
        moves = result.walk_moves(target)
        pending.difference_update(v for _, v in moves)
        current = current.extended(moves)
    return current


@dataclass(frozen=True)
class Reach:
    """A walk segment and the view time at which it ends."""

    walk: TemporalWalk
    arrival: int


def _start_step(view: StepView, index: int) -> int:
    if index < len(view):
        return view.base_step(index)
    return view.base_step(len(view) - 1) + 1 if len(view) else 0


def plan_reach(
    source_graph: TemporalGraph | StepView,
    u: int,
    v: int,
    t0: int,
    subset: Iterable[int],
    *,
    check: bool = True,
) -> Reach:
    """Move from ``u`` to ``v`` inside ``subset`` within ``|subset| - 1`` view steps.

    With ``check`` the precondition (``u`` and ``v`` joined inside the
    induced subgraph at each of those steps) is verified first and a
    :class:`PreconditionError` names the first failing base step.
    """

    view = as_view(source_graph)
    chosen = frozenset(subset)
    if u not in chosen or v not in chosen:
        raise PreconditionError(f"{u} and {v} must both lie in the vertex subset")
    if u == v:
        return Reach(TemporalWalk(u, (), _start_step(view, t0)), t0)

    window = len(chosen) - 1
    if check:
        for index in range(t0, min(t0 + window, len(view))):
            pairs = [
                (a, b)
                for _, a, b in view.present_edges(index)
                if a in chosen and b in chosen
            ]
            forest = components(chosen, pairs)
            if forest[u] != forest[v]:
                step = view.base_step(index)
                raise PreconditionError(
                    f"{u} and {v} are not connected inside the subset at step {step}", step
                )

    restricted = view.restrict(vertices=chosen)
    result = earliest_arrival(restricted, u, t0, stop_at=[v])
    if not result.reached(v):
        if t0 + window > len(view):
            raise LifetimeExhaustedError(f"lifetime ends before {v} is reachable from {u}")
        raise PreconditionError(f"{v} unreachable from {u} inside the subset")
    moves = result.walk_moves(v)
    return Reach(TemporalWalk(u, tuple(moves), _start_step(view, t0)), result.times[v])
