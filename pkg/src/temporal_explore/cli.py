"""Command-line interface: generate, explore, validate, reduce and benchmark."""

from __future__ import annotations

import argparse
import asyncio
import logging
import sys
from typing import Callable, Sequence

import yaml

from temporal_explore import __version__
from temporal_explore.bench import (
    ALGOS,
    FAMILIES,
    MODELS,
    Case,
    build_case,
    fit_growth,
    read_rows,
    report,
    run_bench,
    write_bench,
)
from temporal_explore.config import load_config
from temporal_explore.core import Instance, MultiAgentSchedule, validate_schedule
from temporal_explore.errors import (
    EXIT_BAD_INPUT,
    EXIT_OK,
    EXIT_VALIDATION,
    InstanceError,
    LifetimeExhaustedError,
    TemporalExplorationError,
)
from temporal_explore.formats import (
    read_decomposition,
    read_instance,
    read_schedule,
    write_decomposition,
    write_instance,
    write_schedule,
)
from temporal_explore.grid import explore_grid_multi
from temporal_explore.oracle import DEFAULT_LIMIT, exact_optimum, exhaustive_enum
from temporal_explore.reductions import (
    PhaseBuilder,
    contract_instance,
    multi_to_single,
    progress_per_phase_audit,
    replay_builder,
    transfer_schedule,
)

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# multi-agent explorers that can recompute a phase from any start step
PHASE_EXPLORERS: dict[str, Callable[[Instance], PhaseBuilder]] = {
    "grid": lambda inst: lambda t, pending: explore_grid_multi(inst, t),
}


def _params(pairs: Sequence[str] | None) -> dict:
    params = {}
    for pair in pairs or ():
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise InstanceError(f"expected key=value, got {pair!r}")
        params[key] = yaml.safe_load(value)
    return params


def _edges(text: str) -> list[tuple[int, int]]:
    edges = []
    for item in text.split(","):
        u, sep, v = item.strip().partition("-")
        if not sep:
            raise InstanceError(f"expected u-v, got {item!r}")
        edges.append((int(u), int(v)))
    return edges


def _print_check(inst: Instance, schedule: MultiAgentSchedule) -> int:
    result = validate_schedule(inst, schedule)
    if not result.valid:
        for agent, violation in result.violations:
            print(f"invalid: agent {agent}: {violation}")
        return EXIT_VALIDATION
    print(f"valid: arrival {result.arrival}, {schedule.k} agent(s), covers all: {result.coverage}")
    return EXIT_OK if result.coverage else EXIT_VALIDATION


# ----------------------------------------------------------------------
# Subcommands
# ----------------------------------------------------------------------


def cmd_gen(args: argparse.Namespace) -> int:
    case = build_case(args.family, args.n, args.seed, _params(args.param))
    write_instance(case.instance, args.output)
    if args.decomposition_out:
        if case.decomposition is None:
            raise InstanceError(f"family {args.family} has no decomposition to write")
        write_decomposition(case.decomposition, args.decomposition_out)
    print(f"{args.family}: n={case.instance.n}, m={case.instance.graph.m}, "
          f"lifetime {case.instance.graph.lifetime}")
    return EXIT_OK


def cmd_explore(args: argparse.Namespace) -> int:
    inst = read_instance(args.instance)
    td = read_decomposition(args.decomposition) if args.decomposition else None
    algo = ALGOS[args.algo]
    case = Case(inst, algo.requires or "general", decomposition=td)
    try:
        result = algo.run(case)
    except LifetimeExhaustedError as exc:
        if exc.best is not None and args.output:
            write_schedule(exc.best, args.output)
            print(f"partial walk written to {args.output}")
        raise
    schedule = result if isinstance(result, MultiAgentSchedule) else MultiAgentSchedule((result,))
    if args.output:
        write_schedule(schedule, args.output)
    return _print_check(inst, schedule)


def cmd_validate(args: argparse.Namespace) -> int:
    return _print_check(read_instance(args.instance), read_schedule(args.schedule))


def cmd_oracle(args: argparse.Namespace) -> int:
    inst = read_instance(args.instance)
    if args.exhaustive:
        print(f"optimum {exhaustive_enum(inst)}")
        return EXIT_OK
    result = exact_optimum(inst, args.limit)
    if args.output:
        write_schedule(result.walk, args.output)
    print(f"optimum {result.optimum}")
    return EXIT_OK


def cmd_reduce(args: argparse.Namespace) -> int:
    inst = read_instance(args.instance)
    if args.rebuild:
        builder = PHASE_EXPLORERS[args.rebuild](inst)
    else:
        builder = replay_builder(read_schedule(args.multi), inst.graph)
    compression = multi_to_single(inst, builder)
    audit = progress_per_phase_audit(compression.trace)
    if args.output:
        write_schedule(compression.walk, args.output)
    print(
        f"{len(compression.trace)} phases, horizon {compression.horizon}, "
        f"arrival {compression.walk.ready}, bound {compression.bound(inst.n)}, "
        f"progress audit {'ok' if audit.ok else 'failed'}"
    )
    return _print_check(inst, MultiAgentSchedule((compression.walk,)))


def cmd_contract(args: argparse.Namespace) -> int:
    inst = read_instance(args.instance)
    contracted, mapping = contract_instance(inst, _edges(args.edges))
    write_instance(contracted, args.output)
    print(f"contracted {inst.n} -> {contracted.n} vertices, mapping {list(mapping)}")
    if args.schedule:
        source = read_schedule(args.schedule)
        walks = tuple(transfer_schedule(inst, walk, mapping) for walk in source.agents)
        image = MultiAgentSchedule(walks)
        if args.schedule_out:
            write_schedule(image, args.schedule_out)
        return _print_check(contracted, image)
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    config = load_config(args.config).override(
        families=args.families,
        sizes=args.sizes,
        algos=args.algos,
        seeds=args.seeds,
        output=args.output,
        workers=args.workers,
        timing=args.timing,
        oracle_limit=args.oracle_limit,
    )
    for family in config.families:
        if family not in FAMILIES:
            raise InstanceError(f"unknown family {family!r}")
    rows = asyncio.run(run_bench(config))
    path = write_bench(rows, config)
    failed = sum(1 for r in rows if r.valid is False)
    print(f"{len(rows)} rows written to {path} ({failed} failed)")
    return EXIT_OK


def cmd_fit(args: argparse.Namespace) -> int:
    result = fit_growth(read_rows(args.csv), args.model, args.family, args.algo)
    print(
        f"model {result.model}: a={result.a:.4f} p={result.p:.3f} "
        f"residual={result.residual:.4f} sizes={list(result.sizes)}"
    )
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    inst = read_instance(args.instance)
    schedule = read_schedule(args.schedule)
    sys.stdout.write(report(inst, schedule))
    return EXIT_OK if validate_schedule(inst, schedule).valid else EXIT_VALIDATION


# ----------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="temporal-explore", description="Exploration of temporal graphs"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="logging verbosity (default: WARNING)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance")
    p.add_argument("family", choices=sorted(FAMILIES))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--param", action="append", metavar="KEY=VALUE")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--decomposition-out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("explore", help="run an explorer")
    p.add_argument("--algo", choices=sorted(ALGOS), required=True)
    p.add_argument("-i", "--instance", required=True)
    p.add_argument("--decomposition")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_explore)

    p = sub.add_parser("validate", help="validate a schedule")
    p.add_argument("-i", "--instance", required=True)
    p.add_argument("-s", "--schedule", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("oracle", help="exact optimum for small instances")
    p.add_argument("-i", "--instance", required=True)
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("reduce", help="compress a multi-agent schedule to one agent")
    p.add_argument("-i", "--instance", required=True)
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument(
        "--multi", help="stored k-agent schedule, replayed shifted to every phase start"
    )
    source.add_argument(
        "--rebuild",
        choices=sorted(PHASE_EXPLORERS),
        help="recompute every phase with this multi-agent explorer",
    )
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("contract", help="contract edges and transfer a schedule")
    p.add_argument("-i", "--instance", required=True)
    p.add_argument("--edges", required=True, help="comma separated u-v pairs")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("-s", "--schedule")
    p.add_argument("--schedule-out")
    p.set_defaults(func=cmd_contract)

    p = sub.add_parser("bench", help="run a benchmark plan")
    p.add_argument("--config")
    p.add_argument("--families", nargs="+")
    p.add_argument("--sizes", nargs="+", type=int)
    p.add_argument("--algos", nargs="+")
    p.add_argument("--seeds", nargs="+", type=int)
    p.add_argument("-o", "--output")
    p.add_argument("--workers", type=int)
    p.add_argument("--timing", action="store_true", default=None)
    p.add_argument("--oracle-limit", type=int)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("fit", help="fit a growth model to bench results")
    p.add_argument("csv")
    p.add_argument("--model", choices=sorted(MODELS), default="power")
    p.add_argument("--family")
    p.add_argument("--algo")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("report", help="print a per-step trace")
    p.add_argument("-i", "--instance", required=True)
    p.add_argument("-s", "--schedule", required=True)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level, format=LOG_FORMAT)
    try:
        return args.func(args)
    except TemporalExplorationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
