"""JSON models for instances, schedules and tree decompositions.

The pydantic models mirror the on-disk layout; converters map them to the
immutable core types. Files written here read back to identical bytes.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from temporal_explore.core import (
    Always,
    Cyclic,
    Instance,
    Intervals,
    MultiAgentSchedule,
    Pattern,
    Periodic,
    Steps,
    TemporalGraph,
    TemporalWalk,
)
from temporal_explore.decomposition import TreeDecomposition
from temporal_explore.errors import DecompositionError, InstanceError

logger = logging.getLogger(__name__)


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid")


class AlwaysModel(_Model):
    type: Literal["always"]


class StepsModel(_Model):
    type: Literal["steps"]
    steps: list[int]


class IntervalsModel(_Model):
    type: Literal["intervals"]
    intervals: list[tuple[int, int]]


class PeriodicModel(_Model):
    type: Literal["periodic"]
    offset: int
    present: int
    absent: int


class CyclicModel(_Model):
    type: Literal["cyclic"]
    period: int
    residues: list[int]


PresenceModel = Annotated[
    Union[AlwaysModel, StepsModel, IntervalsModel, PeriodicModel, CyclicModel],
    Field(discriminator="type"),
]


class EdgeModel(_Model):
    u: int
    v: int
    presence: PresenceModel


class InstanceModel(_Model):
    n: int
    start: int
    lifetime: int
    edges: list[EdgeModel]


class WalkModel(_Model):
    start: int
    moves: list[tuple[int, int]]
    start_time: int = 0


class ScheduleModel(_Model):
    agents: list[WalkModel]


class DecompositionModel(_Model):
    bags: list[list[int]]
    tree: list[tuple[int, int]]


# ----------------------------------------------------------------------
# Converters
# ----------------------------------------------------------------------


def pattern_to_model(pattern: Pattern) -> BaseModel:
    if isinstance(pattern, Always):
        return AlwaysModel(type="always")
    if isinstance(pattern, Steps):
        return StepsModel(type="steps", steps=list(pattern.steps))
    if isinstance(pattern, Intervals):
        return IntervalsModel(type="intervals", intervals=list(pattern.intervals))
    if isinstance(pattern, Periodic):
        return PeriodicModel(
            type="periodic", offset=pattern.offset, present=pattern.present, absent=pattern.absent
        )
    if isinstance(pattern, Cyclic):
        return CyclicModel(type="cyclic", period=pattern.period, residues=list(pattern.residues))
    raise InstanceError(f"unknown presence pattern {pattern!r}")


def pattern_from_model(model: BaseModel) -> Pattern:
    if isinstance(model, AlwaysModel):
        return Always()
    if isinstance(model, StepsModel):
        return Steps(tuple(model.steps))
    if isinstance(model, IntervalsModel):
        return Intervals(tuple(model.intervals))
    if isinstance(model, PeriodicModel):
        return Periodic(model.offset, model.present, model.absent)
    if isinstance(model, CyclicModel):
        return Cyclic(model.period, tuple(model.residues))
    raise InstanceError(f"unknown presence model {model!r}")


def instance_to_model(inst: Instance) -> InstanceModel:
    g = inst.graph
    edges = [
        EdgeModel(u=u, v=v, presence=pattern_to_model(pattern))
        for (u, v), pattern in zip(g.edges, g.presence)
    ]
    return InstanceModel(n=g.n, start=inst.start, lifetime=g.lifetime, edges=edges)


def instance_from_model(model: InstanceModel) -> Instance:
    graph = TemporalGraph(
        n=model.n,
        edges=tuple((e.u, e.v) for e in model.edges),
        presence=tuple(pattern_from_model(e.presence) for e in model.edges),
        lifetime=model.lifetime,
    )
    return Instance(graph, model.start)


def schedule_to_model(schedule: MultiAgentSchedule | TemporalWalk) -> ScheduleModel:
    if isinstance(schedule, TemporalWalk):
        schedule = MultiAgentSchedule((schedule,))
    return ScheduleModel(
        agents=[
            WalkModel(start=w.start, moves=list(w.moves), start_time=w.start_time)
            for w in schedule.agents
        ]
    )


def schedule_from_model(model: ScheduleModel) -> MultiAgentSchedule:
    return MultiAgentSchedule(
        tuple(TemporalWalk(a.start, tuple(a.moves), a.start_time) for a in model.agents)
    )


# ----------------------------------------------------------------------
# Text round trips
# ----------------------------------------------------------------------


def _dump(model: BaseModel) -> str:
    return model.model_dump_json(exclude_defaults=True) + "\n"


def dump_instance(inst: Instance) -> str:
    return _dump(instance_to_model(inst))


def parse_instance(text: str) -> Instance:
    """Parse instance JSON; every structural problem becomes an :class:`InstanceError`."""

    try:
        model = InstanceModel.model_validate_json(text)
    except ValidationError as e:
        raise InstanceError(f"invalid instance JSON: {e.error_count()} error(s): {e}") from e
    return instance_from_model(model)


def dump_schedule(schedule: MultiAgentSchedule | TemporalWalk) -> str:
    return _dump(schedule_to_model(schedule))


def parse_schedule(text: str) -> MultiAgentSchedule:
    try:
        model = ScheduleModel.model_validate_json(text)
    except ValidationError as e:
        raise InstanceError(f"invalid schedule JSON: {e}") from e
    return schedule_from_model(model)


def dump_decomposition(td: TreeDecomposition) -> str:
    model = DecompositionModel(
        bags=[sorted(bag) for bag in td.bags], tree=[tuple(edge) for edge in td.tree]
    )
    return _dump(model)


def parse_decomposition(text: str) -> TreeDecomposition:
    try:
        model = DecompositionModel.model_validate_json(text)
    except ValidationError as e:
        raise DecompositionError(f"invalid decomposition JSON: {e}") from e
    return TreeDecomposition(
        tuple(frozenset(bag) for bag in model.bags), tuple(tuple(e) for e in model.tree)
    )


# ----------------------------------------------------------------------
# Files
# ----------------------------------------------------------------------


def _read(path: str | Path) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise InstanceError(f"cannot read {path}: {e}") from e


def read_instance(path: str | Path) -> Instance:
    inst = parse_instance(_read(path))
    logger.debug(f"Loaded instance from {path}: n={inst.n}, lifetime={inst.graph.lifetime}")
    return inst


def _write(path: str | Path, text: str) -> None:
    path = Path(path).expanduser()
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def write_instance(inst: Instance, path: str | Path) -> None:
    _write(path, dump_instance(inst))
    logger.info(f"Wrote instance to {path}")


def read_schedule(path: str | Path) -> MultiAgentSchedule:
    return parse_schedule(_read(path))


def write_schedule(schedule: MultiAgentSchedule | TemporalWalk, path: str | Path) -> None:
    _write(path, dump_schedule(schedule))
    logger.info(f"Wrote schedule to {path}")


def read_decomposition(path: str | Path) -> TreeDecomposition:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise DecompositionError(f"cannot read {path}: {e}") from e
    return parse_decomposition(text)


def write_decomposition(td: TreeDecomposition, path: str | Path) -> None:
    _write(path, dump_decomposition(td))
