"""Tests for the command-line interface."""

from __future__ import annotations

import json

import pytest

from temporal_explore import __version__
from temporal_explore.cli import main
from temporal_explore.core import Always, Instance, Steps, TemporalGraph, TemporalWalk
from temporal_explore.errors import EXIT_BAD_INPUT, EXIT_LIFETIME, EXIT_OK, EXIT_VALIDATION
from temporal_explore.formats import read_instance, read_schedule, write_instance, write_schedule


@pytest.fixture
def cycle_file(tmp_path):
    path = tmp_path / "cycle.json"
    assert main(["gen", "cycle-2n3", "--n", "5", "-o", str(path)]) == EXIT_OK
    return path


def test_version(capsys):
    """Test --version prints the package version."""
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_gen_explore_validate_report(cycle_file, tmp_path, capsys):
    """Test the generate, explore, validate and report round trip."""
    schedule = tmp_path / "walk.json"
    assert main(["explore", "--algo", "cycle-opt", "-i", str(cycle_file), "-o", str(schedule)]) == EXIT_OK
    assert "valid: arrival 7" in capsys.readouterr().out

    assert main(["validate", "-i", str(cycle_file), "-s", str(schedule)]) == EXIT_OK
    assert main(["report", "-i", str(cycle_file), "-s", str(schedule)]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.splitlines()[-1] == "t=7 at 1  *"


def test_gen_with_parameters(tmp_path):
    path = tmp_path / "stars.json"
    assert main(["gen", "chained-stars", "--n", "8", "--param", "d=4", "-o", str(path)]) == EXIT_OK
    assert read_instance(path).n == 7


def test_gen_writes_decomposition(tmp_path):
    """Series-parallel instances can ship their decomposition."""
    inst = tmp_path / "sp.json"
    td = tmp_path / "td.json"
    args = ["gen", "series-parallel", "--n", "10", "-o", str(inst), "--decomposition-out", str(td)]
    assert main(args) == EXIT_OK
    assert main(["explore", "--algo", "greedy", "-i", str(inst)]) == EXIT_OK
    assert len(json.loads(td.read_text())["bags"]) == 9


def test_oracle(cycle_file, capsys):
    """Test both oracle modes and the size limit."""
    assert main(["oracle", "-i", str(cycle_file)]) == EXIT_OK
    assert main(["oracle", "-i", str(cycle_file), "--exhaustive"]) == EXIT_OK
    assert capsys.readouterr().out.endswith("optimum 7\noptimum 7\n")
    assert main(["oracle", "-i", str(cycle_file), "--limit", "4"]) == EXIT_BAD_INPUT


def test_invalid_schedule_exit_code(cycle_file, tmp_path, capsys):
    """An invalid schedule should exit with the validation code."""
    schedule = tmp_path / "bad.json"
    schedule.write_text('{"agents": [{"start": 0, "moves": [[0, 2]]}]}')
    assert main(["validate", "-i", str(cycle_file), "-s", str(schedule)]) == EXIT_VALIDATION
    assert "non-adjacent" in capsys.readouterr().out


def test_incomplete_schedule_exit_code(cycle_file, tmp_path):
    schedule = tmp_path / "short.json"
    write_schedule(TemporalWalk(0, ((0, 4),)), schedule)
    assert main(["validate", "-i", str(cycle_file), "-s", str(schedule)]) == EXIT_VALIDATION


def test_bad_input_exit_code(tmp_path, capsys):
    """Ensure unreadable input maps to the bad-input exit code."""
    broken = tmp_path / "broken.json"
    broken.write_text("not json")
    assert main(["explore", "--algo", "greedy", "-i", str(broken)]) == EXIT_BAD_INPUT
    assert main(["explore", "--algo", "greedy", "-i", str(tmp_path / "missing.json")]) == EXIT_BAD_INPUT
    assert "error:" in capsys.readouterr().err


def test_lifetime_exhausted_writes_partial_walk(tmp_path):
    """The best partial walk is written when the lifetime runs out."""
    graph = TemporalGraph(3, ((0, 1), (1, 2)), (Always(), Steps((0,))), 4)
    inst = tmp_path / "stuck.json"
    partial = tmp_path / "partial.json"
    write_instance(Instance(graph, 0), inst)
    assert main(["explore", "--algo", "greedy", "-i", str(inst), "-o", str(partial)]) == EXIT_LIFETIME
    assert read_schedule(partial).agents[0].moves == ((0, 1),)


def test_reduce(tmp_path, capsys):
    """Test compressing a two-agent schedule on a static path."""
    graph = TemporalGraph(3, ((0, 1), (1, 2)), (Always(), Always()), 20)
    inst = tmp_path / "path.json"
    multi = tmp_path / "multi.json"
    single = tmp_path / "single.json"
    write_instance(Instance(graph, 1), inst)
    multi.write_text(
        '{"agents": [{"start": 1, "moves": [[0, 0]]}, {"start": 1, "moves": [[0, 2]]}]}'
    )
    assert main(["reduce", "-i", str(inst), "--multi", str(multi), "-o", str(single)]) == EXIT_OK
    assert "2 phases" in capsys.readouterr().out
    assert read_schedule(single).agents[0].moves == ((0, 0), (1, 1), (2, 2))


@pytest.fixture
def grid_files(tmp_path):
    inst = tmp_path / "grid.json"
    multi = tmp_path / "multi.json"
    gen = ["gen", "random-grid", "--n", "8", "--seed", "3", "--param", "density=0.1"]
    assert main(gen + ["--param", "lifetime=5000", "-o", str(inst)]) == EXIT_OK
    assert main(["explore", "--algo", "grid", "-i", str(inst), "-o", str(multi)]) == EXIT_OK
    return inst, multi


def test_reduce_refuses_to_replay_on_changing_realization(grid_files, capsys):
    """A stored grid schedule cannot be shifted onto a non-periodic realization."""

    inst, multi = grid_files
    assert main(["reduce", "-i", str(inst), "--multi", str(multi)]) == EXIT_VALIDATION
    assert "does not replay" in capsys.readouterr().err


def test_reduce_rebuilds_grid_phases(grid_files, tmp_path, capsys):
    """With --rebuild the grid explorer recomputes every phase from its own start step."""

    inst, _ = grid_files
    single = tmp_path / "single.json"
    assert main(["reduce", "-i", str(inst), "--rebuild", "grid", "-o", str(single)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "progress audit ok" in out
    assert read_schedule(single).k == 1
    assert main(["validate", "-i", str(inst), "-s", str(single)]) == EXIT_OK


def test_reduce_needs_a_phase_source(cycle_file):
    with pytest.raises(SystemExit):
        main(["reduce", "-i", str(cycle_file)])


def test_gen_random_family(tmp_path, capsys):
    path = tmp_path / "random.json"
    assert main(["gen", "random", "--n", "8", "--param", "p=0.3", "-o", str(path)]) == EXIT_OK
    assert "random: n=8" in capsys.readouterr().out
    assert read_instance(path).n == 8
    assert main(["explore", "--algo", "greedy", "-i", str(path)]) == EXIT_OK


def test_outputs_create_missing_directories(tmp_path):
    """Instances and schedules can be written into directories that do not exist yet."""

    inst = tmp_path / "a" / "b" / "cycle.json"
    walk = tmp_path / "c" / "walk.json"
    assert main(["gen", "cycle-2n3", "--n", "5", "-o", str(inst)]) == EXIT_OK
    assert main(["explore", "--algo", "cycle-opt", "-i", str(inst), "-o", str(walk)]) == EXIT_OK
    assert read_schedule(walk).k == 1


def test_contract(tmp_path, capsys):
    """Test contraction and schedule transfer through the CLI."""
    graph = TemporalGraph(
        4,
        ((0, 1), (1, 2), (2, 3), (0, 3)),
        (Always(), Steps((1,)), Steps((2,)), Steps((3,))),
        5,
    )
    inst = tmp_path / "square.json"
    walk = tmp_path / "walk.json"
    out = tmp_path / "contracted.json"
    image = tmp_path / "image.json"
    write_instance(Instance(graph, 0), inst)
    write_schedule(TemporalWalk(0, ((0, 1), (1, 2), (2, 3))), walk)

    args = ["contract", "-i", str(inst), "--edges", "1-2", "-o", str(out)]
    assert main(args + ["-s", str(walk), "--schedule-out", str(image)]) == EXIT_OK
    assert "contracted 4 -> 3 vertices" in capsys.readouterr().out
    assert read_instance(out).n == 3
    assert read_schedule(image).agents[0].moves == ((0, 1), (2, 2))
    assert main(["contract", "-i", str(inst), "--edges", "1+2", "-o", str(out)]) == EXIT_BAD_INPUT


def test_bench_then_fit(tmp_path, capsys):
    csv_path = tmp_path / "bench.csv"
    args = [
        "bench",
        "--families", "cycle-2n3",
        "--sizes", "4", "5", "6",
        "--algos", "cycle-opt",
        "-o", str(csv_path),
        "--workers", "2",
    ]
    assert main(args) == EXIT_OK
    assert "3 rows written" in capsys.readouterr().out
    assert (tmp_path / "bench.csv.meta.json").exists()

    assert main(["fit", str(csv_path), "--model", "linear"]) == EXIT_OK
    assert "model linear" in capsys.readouterr().out


def test_bench_rejects_unknown_family(tmp_path):
    args = ["bench", "--families", "moebius", "-o", str(tmp_path / "b.csv")]
    assert main(args) == EXIT_BAD_INPUT


def test_bench_reads_config_file(tmp_path, capsys):
    """Ensure bench reads its plan from a YAML file."""
    plan = tmp_path / "plan.yaml"
    csv_path = tmp_path / "from-plan.csv"
    plan.write_text(
        f"families: [rotating-star]\nsizes: [2, 3]\nalgos: [greedy, oracle]\noutput: {csv_path}\n"
    )
    assert main(["bench", "--config", str(plan)]) == EXIT_OK
    assert "4 rows written" in capsys.readouterr().out
    assert csv_path.exists()


def test_bench_oracle_limit_flag(tmp_path):
    csv_path = tmp_path / "oracle.csv"
    args = ["bench", "--families", "cycle-2n3", "--sizes", "4", "5", "--algos", "oracle"]
    assert main(args + ["--oracle-limit", "4", "-o", str(csv_path)]) == EXIT_OK
    lines = csv_path.read_text().splitlines()
    assert lines[1].startswith("cycle-2n3,4,0,oracle,1,5,true")
    assert lines[2].endswith("skipped: oracle limited to n <= 4")
