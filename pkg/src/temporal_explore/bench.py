"""Benchmark harness, growth-curve fitting and human-readable schedule traces."""

from __future__ import annotations

import asyncio
import csv
import io
import json
import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from temporal_explore import __version__
from temporal_explore.config import BenchConfig
from temporal_explore.core import (
    Instance,
    MultiAgentSchedule,
    TemporalWalk,
    validate_schedule,
    validate_walk,
)
from temporal_explore.decomposition import TreeDecomposition
from temporal_explore.errors import InsufficientDataError, InstanceError, TemporalExplorationError
from temporal_explore.explorers import (
    cycle_optimal,
    explore_chord,
    explore_cycle_3n,
    explore_greedy,
)
from temporal_explore.formats import dump_schedule, parse_schedule
from temporal_explore.generators import (
    GadgetSpec,
    RegularityProfile,
    chained_stars,
    chord_realization,
    connected_gnp,
    cycle_2n3,
    cycle_realization,
    grid_realization,
    hardness_gadget,
    planar_rounds,
    random_realization,
    rotating_star,
    series_parallel,
    staggered_trees,
)
from temporal_explore.grid import explore_grid_multi
from temporal_explore.oracle import DEFAULT_LIMIT, exact_optimum
from temporal_explore.reductions import multi_to_single
from temporal_explore.regular import explore_regular_mst
from temporal_explore.revision import source_revision
from temporal_explore.treewidth import explore_treewidth

logger = logging.getLogger(__name__)

CSV_FIELDS = ("family", "n", "seed", "algo", "agents", "arrival", "valid", "wall_ms", "note")


# ----------------------------------------------------------------------
# Families and algorithms
# ----------------------------------------------------------------------


@dataclass
class Case:
    """A generated instance together with the structure hints algorithms may need."""

    instance: Instance
    kind: str = "general"
    decomposition: TreeDecomposition | None = None
    profile: RegularityProfile | None = None
    oracle_limit: int = DEFAULT_LIMIT


FamilyBuilder = Callable[[int, int, dict], Case]


def _realization(params: dict) -> dict:
    """Keyword arguments shared by the random families: ``lifetime``, ``hold`` and ``period``."""
    return {
        "lifetime": params.get("lifetime"),
        "hold": params.get("hold", 1),
        "period": params.get("period"),
    }


def _gadget(n: int, seed: int, params: dict) -> Case:
    spec = GadgetSpec.path(n, params.get("exponent", 1))
    inst, _ = hardness_gadget(spec)
    return Case(inst)


def _random(n: int, seed: int, params: dict) -> Case:
    graph = connected_gnp(n, params.get("p", 0.1), seed)
    density = params.get("density", 0.0)
    inst = random_realization(graph, density=density, seed=seed, **_realization(params))
    return Case(inst)


def _series_parallel(n: int, seed: int, params: dict) -> Case:
    inst, td = series_parallel(n, seed, params.get("density", 0.0), **_realization(params))
    return Case(inst, "general", decomposition=td)


def _regular(n: int, seed: int, params: dict) -> Case:
    inst, profile = staggered_trees(n, params.get("layers", 3), seed)
    return Case(inst, "regular", profile=profile)


FAMILIES: dict[str, FamilyBuilder] = {
    "rotating-star": lambda n, seed, p: Case(rotating_star(n)),
    "chained-stars": lambda n, seed, p: Case(chained_stars(p.get("d", 4), n)),
    "planar-rounds": lambda n, seed, p: Case(planar_rounds(n)),
    "gadget": _gadget,
    "cycle-2n3": lambda n, seed, p: Case(cycle_2n3(n), "cycle"),
    "random": _random,
    "random-cycle": lambda n, seed, p: Case(
        cycle_realization(n, seed, p.get("density", 0.0), **_realization(p)), "cycle"
    ),
    "random-chord": lambda n, seed, p: Case(
        chord_realization(n, seed, chord_density=p.get("chord_density", 0.5), **_realization(p)),
        "chord",
    ),
    "random-grid": lambda n, seed, p: Case(
        grid_realization(n, seed, p.get("density", 0.0), **_realization(p)), "grid"
    ),
    "series-parallel": _series_parallel,
    "regular": _regular,
}


@dataclass(frozen=True)
class Algo:
    run: Callable[[Case], MultiAgentSchedule | TemporalWalk]
    requires: str | None = None


def _oracle(case: Case) -> TemporalWalk:
    return exact_optimum(case.instance, case.oracle_limit).walk


def _grid_single(case: Case) -> TemporalWalk:
    inst = case.instance
    return multi_to_single(inst, lambda t, pending: explore_grid_multi(inst, t)).walk


ALGOS: dict[str, Algo] = {
    "greedy": Algo(lambda c: explore_greedy(c.instance)),
    "cycle3n": Algo(lambda c: explore_cycle_3n(c.instance), "cycle"),
    "cycle-opt": Algo(lambda c: cycle_optimal(c.instance), "cycle"),
    "chord": Algo(lambda c: explore_chord(c.instance), "chord"),
    "grid": Algo(lambda c: explore_grid_multi(c.instance), "grid"),
    "grid-single": Algo(_grid_single, "grid"),
    "treewidth": Algo(lambda c: explore_treewidth(c.instance, c.decomposition)),
    "regular-mst": Algo(lambda c: explore_regular_mst(c.instance, c.profile or "estimate"), "regular"),
    "oracle": Algo(_oracle),
}


def build_case(family: str, n: int, seed: int, params: dict | None = None) -> Case:
    if family not in FAMILIES:
        raise InstanceError(f"unknown family {family!r}; known: {', '.join(sorted(FAMILIES))}")
    return FAMILIES[family](n, seed, dict(params or {}))


# ----------------------------------------------------------------------
# Bench rows
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class BenchRow:
    family: str
    n: int
    seed: int
    algo: str
    agents: int = 0
    arrival: int | None = None
    valid: bool | None = None
    wall_ms: float = 0.0
    note: str = ""

    @property
    def key(self) -> tuple:
        return (self.family, self.n, self.seed, self.algo)

    def as_record(self) -> dict[str, Any]:
        return {
            "family": self.family,
            "n": self.n,
            "seed": self.seed,
            "algo": self.algo,
            "agents": self.agents,
            "arrival": "" if self.arrival is None else self.arrival,
            "valid": "" if self.valid is None else str(self.valid).lower(),
            "wall_ms": f"{self.wall_ms:.1f}" if self.wall_ms else "0",
            "note": self.note,
        }

    @classmethod
    def from_record(cls, record: dict[str, str]) -> BenchRow:
        valid = {"true": True, "false": False}.get(record.get("valid", ""))
        arrival = record.get("arrival", "")
        return cls(
            record["family"],
            int(record["n"]),
            int(record["seed"]),
            record["algo"],
            int(record.get("agents") or 0),
            int(arrival) if arrival else None,
            valid,
            float(record.get("wall_ms") or 0),
            record.get("note", ""),
        )


def _skip_reason(case: Case, algo_name: str) -> str | None:
    algo = ALGOS[algo_name]
    if algo.requires is not None and case.kind != algo.requires:
        return f"{algo_name} needs a {algo.requires} instance"
    if algo_name == "oracle" and case.instance.n > case.oracle_limit:
        return f"oracle limited to n <= {case.oracle_limit}"
    return None


def run_cell(case: Case, family: str, n: int, seed: int, algo_name: str, timing: bool) -> BenchRow:
    """Run one algorithm on one case; failures become rows, never exceptions."""

    reason = _skip_reason(case, algo_name)
    if reason is not None:
        return BenchRow(family, n, seed, algo_name, note=f"skipped: {reason}")

    started = time.perf_counter()
    try:
        result = ALGOS[algo_name].run(case)
    except TemporalExplorationError as exc:
        wall = (time.perf_counter() - started) * 1000 if timing else 0.0
        logger.warning(f"{family} n={n} seed={seed} {algo_name}: {exc}")
        return BenchRow(family, n, seed, algo_name, valid=False, wall_ms=wall, note=type(exc).__name__)
    wall = (time.perf_counter() - started) * 1000 if timing else 0.0

    # the serialized form is what gets validated
    schedule = parse_schedule(dump_schedule(result))
    report = validate_schedule(case.instance, schedule)
    valid = report.valid and report.coverage
    note = "" if valid else "; ".join(f"agent {a}: {v}" for a, v in report.violations) or "incomplete"
    return BenchRow(family, n, seed, algo_name, schedule.k, report.arrival, valid, wall, note)


async def run_bench(config: BenchConfig) -> list[BenchRow]:
    """Run every (family, n, seed, algo) cell with at most ``config.workers`` in flight."""

    for algo in config.algos:
        if algo not in ALGOS:
            raise InstanceError(f"unknown algorithm {algo!r}; known: {', '.join(sorted(ALGOS))}")
    semaphore = asyncio.Semaphore(max(1, config.workers))

    async def case_rows(family: str, n: int, seed: int) -> list[BenchRow]:
        async with semaphore:
            try:
                case = await asyncio.to_thread(build_case, family, n, seed, config.family_params(family))
            except TemporalExplorationError as exc:
                logger.warning(f"cannot build {family} n={n} seed={seed}: {exc}")
                return [
                    BenchRow(family, n, seed, algo, note=f"skipped: {exc}") for algo in config.algos
                ]
        case.oracle_limit = config.oracle_limit
        rows = []
        for algo in config.algos:
            async with semaphore:
                rows.append(
                    await asyncio.to_thread(run_cell, case, family, n, seed, algo, config.timing)
                )
        logger.info(f"bench: {family} n={n} seed={seed} done")
        return rows

    tasks = [
        case_rows(family, n, seed)
        for family in config.families
        for n in config.sizes
        for seed in config.seeds
    ]
    results = await asyncio.gather(*tasks)
    rows = sorted((row for group in results for row in group), key=lambda r: r.key)
    logger.info(f"bench: {len(rows)} rows")
    return rows


def rows_to_csv(rows: Iterable[BenchRow]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row.as_record())
    return buffer.getvalue()


def read_rows(path: str | Path) -> list[BenchRow]:
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or tuple(reader.fieldnames) != CSV_FIELDS:
            raise InstanceError(f"{path} is not a bench CSV (columns {reader.fieldnames})")
        return [BenchRow.from_record(record) for record in reader]


def write_bench(rows: Sequence[BenchRow], config: BenchConfig, output: str | Path | None = None) -> Path:
    """Write the CSV in one go plus a ``.meta.json`` with config, version and revision."""

    path = Path(output or config.output)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(rows_to_csv(rows))
    meta = {
        "config": config.to_dict(),
        "version": __version__,
        "revision": source_revision(),
        "rows": len(rows),
    }
    Path(f"{path}.meta.json").write_text(json.dumps(meta, indent=2) + "\n")
    return path


# ----------------------------------------------------------------------
# Growth fitting
# ----------------------------------------------------------------------

MODELS: dict[str, Callable[[np.ndarray], np.ndarray] | None] = {
    "linear": lambda n: n,
    "nlogn": lambda n: n * np.log2(n),
    "power": None,
    "quadratic": lambda n: n**2,
}


@dataclass(frozen=True)
class FitResult:
    model: str
    a: float
    p: float
    residual: float
    sizes: tuple[int, ...] = field(default=())


def fit_points(sizes: Sequence[float], values: Sequence[float], model: str = "power") -> FitResult:
    """Least-squares fit of ``values ~ a * f(n)`` in log space.

    For ``power`` both ``a`` and the exponent ``p`` are fitted; the fixed
    models report their own exponent (``nlogn`` reports 1). ``residual`` is the
    root-mean-square log error.
    """

    if model not in MODELS:
        raise InstanceError(f"unknown model {model!r}; known: {', '.join(MODELS)}")
    n = np.asarray(sizes, dtype=float)
    y = np.asarray(values, dtype=float)
    if len(np.unique(n)) < 3:
        raise InsufficientDataError(f"need at least 3 sizes to fit, got {len(np.unique(n))}")
    if np.any(n <= 0) or np.any(y <= 0):
        raise InsufficientDataError("sizes and values must be positive for a log-space fit")

    log_n, log_y = np.log(n), np.log(y)
    shape = MODELS[model]
    if shape is None:
        design = np.column_stack([log_n, np.ones_like(log_n)])
        (p, log_a), *_ = np.linalg.lstsq(design, log_y, rcond=None)
        predicted = p * log_n + log_a
    else:
        log_f = np.log(shape(n))
        log_a = float(np.mean(log_y - log_f))
        predicted = log_f + log_a
        p = {"linear": 1.0, "nlogn": 1.0, "quadratic": 2.0}[model]
    residual = float(np.sqrt(np.mean((log_y - predicted) ** 2)))
    return FitResult(model, float(math.exp(log_a)), float(p), residual, tuple(int(s) for s in n))


def fit_growth(
    rows: Sequence[BenchRow],
    model: str = "power",
    family: str | None = None,
    algo: str | None = None,
) -> FitResult:
    """Fit the mean valid arrival per size for one (family, algo) group."""

    groups = {(r.family, r.algo) for r in rows if r.valid and r.arrival is not None}
    if family is not None:
        groups = {g for g in groups if g[0] == family}
    if algo is not None:
        groups = {g for g in groups if g[1] == algo}
    if len(groups) != 1:
        raise InsufficientDataError(
            f"expected one (family, algo) group with valid rows, found {sorted(groups)}"
        )
    chosen = groups.pop()
    by_size: dict[int, list[int]] = {}
    for r in rows:
        if (r.family, r.algo) == chosen and r.valid and r.arrival is not None:
            by_size.setdefault(r.n, []).append(r.arrival)
    sizes = sorted(by_size)
    means = [float(np.mean(by_size[s])) for s in sizes]
    result = fit_points(sizes, means, model)
    logger.info(
        f"fit {chosen[0]}/{chosen[1]} {model}: a={result.a:.3f} p={result.p:.3f} "
        f"residual={result.residual:.4f}"
    )
    return result


# ----------------------------------------------------------------------
# Traces
# ----------------------------------------------------------------------


def _trace(walk: TemporalWalk) -> list[str]:
    lines = [f"t={walk.start_time} at {walk.start}"]
    seen = {walk.start}
    for step, v in walk.moves:
        marker = "" if v in seen else "  *"
        seen.add(v)
        lines.append(f"t={step + 1} at {v}{marker}")
    return lines


def report(inst: Instance, schedule: MultiAgentSchedule | TemporalWalk) -> str:
    """Per-step positions with ``*`` on first visits, or the validator's findings."""

    if isinstance(schedule, TemporalWalk):
        result = validate_walk(inst, schedule)
        if not result.valid:
            return f"invalid: {result.violation}\n"
        return "\n".join(_trace(schedule)) + "\n"

    result = validate_schedule(inst, schedule)
    if not result.valid:
        return "".join(f"invalid: agent {a}: {v}\n" for a, v in result.violations)
    if schedule.k == 1:
        return "\n".join(_trace(schedule.agents[0])) + "\n"
    lines = []
    for index, walk in enumerate(schedule.agents):
        lines.append(f"agent {index}:")
        lines.extend(f"  {line}" for line in _trace(walk))
    return "\n".join(lines) + "\n"
