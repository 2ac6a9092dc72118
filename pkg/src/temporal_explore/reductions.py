"""Schedule transfer tools: phase compression of k agents into one, and edge contraction."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from temporal_explore.core import (
    Always,
    Edge,
    Instance,
    MultiAgentSchedule,
    Pattern,
    TemporalGraph,
    TemporalWalk,
    components,
    norm_edge,
    plan_reach,
    union_patterns,
    validate_walk,
)
from temporal_explore.errors import InstanceError, ReductionError, TransferError

logger = logging.getLogger(__name__)

PhaseBuilder = Callable[[int, frozenset[int]], MultiAgentSchedule]


# ----------------------------------------------------------------------
# k agents -> 1 agent
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class PhaseRecord:
    index: int
    start: int
    horizon: int
    agents: int
    chosen: int
    unexplored_before: int
    covered: int

    @property
    def unexplored_after(self) -> int:
        return self.unexplored_before - self.covered


@dataclass
class Compression:
    """Single-agent walk produced by phase compression, with its per-phase trace."""

    walk: TemporalWalk
    trace: list[PhaseRecord] = field(default_factory=list)
    horizon: int = 0
    targets: int = 0

    @property
    def agents(self) -> int:
        return max((p.agents for p in self.trace), default=1)

    def bound(self, n: int) -> int:
        """``(t + n)(ceil(k ln n) + 1)`` with ``t`` the largest phase horizon."""
        return (self.horizon + n) * (math.ceil(self.agents * math.log(n)) + 1) if n > 1 else 0


def compress_phases(
    graph: TemporalGraph,
    origin: int,
    t_start: int,
    targets: Iterable[int],
    phase_builder: PhaseBuilder,
    walk: TemporalWalk | None = None,
) -> Compression:
    """Explore ``targets`` with one agent by copying, phase after phase, the best of k agents.

    Each phase asks ``phase_builder(t, pending)`` for a k-agent schedule starting at
    ``origin`` at the current step, follows the agent that covers the most
    unexplored targets (ties: lowest index) and returns to ``origin`` within
    ``n - 1`` steps. When ``walk`` is given the phases extend it; it must
    end at ``origin``.
    """

    pending = set(targets)
    current = walk if walk is not None else TemporalWalk(origin, (), t_start)
    if current.end != origin:
        raise ReductionError("phase compression must start at the origin")
    pending.difference_update({current.start, *(v for _, v in current.moves)})
    result = Compression(current, targets=len(pending))
    origin_inst = Instance(graph, origin)
    t = max(t_start, current.ready)

    while pending:
        schedule = phase_builder(t, frozenset(pending))
        if schedule.k == 0:
            raise ReductionError("phase builder returned no agents")

        best, best_cover, horizon = -1, -1, 0
        for agent, agent_walk in enumerate(schedule.agents):
            report = validate_walk(origin_inst, agent_walk)
            if not report.valid or agent_walk.start_time != t:
                raise ReductionError(
                    f"phase {len(result.trace)}: agent {agent} does not start at "
                    f"({origin}, {t}) or is invalid: {report.violation}"
                )
            horizon = max(horizon, agent_walk.ready - t)
            cover = len(report.visited & pending)
            if cover > best_cover:
                best, best_cover = agent, cover
        if best_cover == 0:
            raise ReductionError(
                f"phase {len(result.trace)}: no agent reaches any of {len(pending)} unexplored vertices"
            )

        record = PhaseRecord(len(result.trace), t, horizon, schedule.k, best, len(pending), best_cover)
        result.trace.append(record)
        result.horizon = max(result.horizon, horizon)
        logger.debug(
            f"phase {record.index} at step {t}: agent {best} covers {best_cover} of {len(pending)}"
        )

        chosen = schedule.agents[best]
        current = current.extended(chosen.moves)
        pending.difference_update(v for _, v in chosen.moves)
        if not pending:
            break
        back = plan_reach(graph, current.end, origin, current.ready, range(graph.n), check=False)
        current = current.extended(back.walk.moves)
        t = current.ready

    result.walk = current
    logger.info(
        f"compressed {result.agents} agents into one over {len(result.trace)} phases, "
        f"horizon {result.horizon}"
    )
    return result


def multi_to_single(inst: Instance, phase_builder: PhaseBuilder) -> Compression:
    """Single-agent exploration of the whole instance from k-agent phase schedules."""
    return compress_phases(inst.graph, inst.start, 0, range(inst.n), phase_builder)


@dataclass(frozen=True)
class ProgressAudit:
    ok: bool
    failures: tuple[PhaseRecord, ...] = ()


def progress_per_phase_audit(trace: Sequence[PhaseRecord]) -> ProgressAudit:
    """Check that every phase covered at least ``ceil(unexplored / k)`` vertices."""

    failures = tuple(
        p for p in trace if p.covered < math.ceil(p.unexplored_before / p.agents)
    )
    return ProgressAudit(not failures, failures)


def replay_builder(schedule: MultiAgentSchedule, graph: TemporalGraph | None = None) -> PhaseBuilder:
    """Phase builder replaying a stored schedule shifted to each phase start.

    A stored schedule only replays where the realization repeats; with
    ``graph`` given, the first phase whose shifted schedule is invalid raises
    :class:`ReductionError` naming the step and the violation.
    """

    def build(t: int, pending: frozenset[int]) -> MultiAgentSchedule:
        shifted = []
        for agent, walk in enumerate(schedule.agents):
            delta = t - walk.start_time
            moved = TemporalWalk(walk.start, tuple((s + delta, v) for s, v in walk.moves), t)
            if graph is not None and delta:
                report = validate_walk(Instance(graph, walk.start), moved)
                if not report.valid:
                    raise ReductionError(
                        f"stored schedule does not replay from step {t}: "
                        f"agent {agent}: {report.violation}"
                    )
            shifted.append(moved)
        return MultiAgentSchedule(tuple(shifted))

    return build


# ----------------------------------------------------------------------
# Edge contraction
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class Contraction:
    graph: TemporalGraph
    mapping: tuple[int, ...]


def _check_edges(g: TemporalGraph, contraction: Iterable[Edge]) -> list[Edge]:
    chosen = []
    for u, v in contraction:
        key = norm_edge(u, v)
        if key not in g.edge_index:
            raise InstanceError(f"cannot contract {{{u}, {v}}}: not an edge")
        chosen.append(key)
    return chosen


def contract_edges(g: TemporalGraph, contraction: Iterable[Edge]) -> Contraction:
    """Contract edges; parallel images merge by presence union and self-loops are dropped.

    Merged vertices take the rank of their smallest original vertex.
    """

    chosen = _check_edges(g, contraction)
    forest = components(range(g.n), chosen)
    leaders = sorted({min(group) for group in forest.to_sets()})
    rank = {leader: i for i, leader in enumerate(leaders)}
    lowest = {}
    for group in forest.to_sets():
        low = min(group)
        for v in group:
            lowest[v] = low
    mapping = tuple(rank[lowest[v]] for v in range(g.n))

    merged: dict[Edge, list[Pattern]] = {}
    for (u, v), pattern in zip(g.edges, g.presence):
        a, b = mapping[u], mapping[v]
        if a == b:
            continue
        merged.setdefault(norm_edge(a, b), []).append(pattern)

    edges = list(merged)
    presence = [union_patterns(merged[e], g.lifetime) for e in edges]
    contracted = TemporalGraph(len(leaders), tuple(edges), tuple(presence), g.lifetime)
    logger.info(f"contracted {len(chosen)} edges: {g.n} -> {contracted.n} vertices")
    return Contraction(contracted, mapping)


def contract_instance(inst: Instance, contraction: Iterable[Edge]) -> tuple[Instance, tuple[int, ...]]:
    result = contract_edges(inst.graph, contraction)
    return Instance(result.graph, result.mapping[inst.start]), result.mapping


def lift_realization(
    contracted: TemporalGraph,
    n: int,
    edges: Sequence[Edge],
    contraction: Iterable[Edge],
) -> TemporalGraph:
    """Realization of the uncontracted graph: contracted edges always present, the rest
    present whenever their image is."""

    underlying = TemporalGraph(n, tuple(edges), tuple(Always() for _ in edges), contracted.lifetime)
    chosen = set(_check_edges(underlying, contraction))
    mapping = contract_edges(underlying, chosen).mapping
    presence: list[Pattern] = []
    for u, v in underlying.edges:
        if norm_edge(u, v) in chosen or mapping[u] == mapping[v]:
            presence.append(Always())
            continue
        image = contracted.edge_index.get(norm_edge(mapping[u], mapping[v]))
        if image is None:
            raise InstanceError(f"edge {{{u}, {v}}} has no image in the contracted graph")
        presence.append(contracted.presence[image])
    return TemporalGraph(n, underlying.edges, tuple(presence), contracted.lifetime)


def transfer_schedule(
    inst: Instance, walk: TemporalWalk, mapping: Sequence[int]
) -> TemporalWalk:
    """Image of ``walk`` under ``mapping``; moves inside a merged vertex are dropped."""

    report = validate_walk(inst, walk)
    if not report.valid:
        raise TransferError(f"walk is invalid on the source realization: {report.violation}")
    position = mapping[walk.start]
    moves = []
    for step, v in walk.moves:
        image = mapping[v]
        if image != position:
            moves.append((step, image))
            position = image
    return TemporalWalk(mapping[walk.start], tuple(moves), walk.start_time)
