"""Benchmark plan configuration."""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any

import yaml

from temporal_explore.oracle import DEFAULT_LIMIT

logger = logging.getLogger(__name__)

DEFAULT_OUTPUT = "bench.csv"
YAML_SUFFIXES = (".yaml", ".yml")


@dataclass
class BenchConfig:
    """Serializable description of one benchmark run."""

    families: list[str] = field(default_factory=lambda: ["rotating-star"])
    sizes: list[int] = field(default_factory=lambda: [3, 4, 5, 6])
    algos: list[str] = field(default_factory=lambda: ["greedy"])
    seeds: list[int] = field(default_factory=lambda: [0])
    output: str = DEFAULT_OUTPUT
    workers: int = 4
    timing: bool = False
    oracle_limit: int = DEFAULT_LIMIT
    params: dict[str, dict[str, Any]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        """Return the config as a JSON-serializable dictionary."""
        return asdict(self)

    def family_params(self, family: str) -> dict[str, Any]:
        return dict(self.params.get(family, {}))

    def override(self, **values: Any) -> BenchConfig:
        """Copy with every non-None keyword replacing the stored value."""

        data = self.to_dict()
        data.update({key: value for key, value in values.items() if value is not None})
        return BenchConfig(**data)


def _read(path: Path) -> Any:
    text = path.read_text()
    if path.suffix.lower() in YAML_SUFFIXES:
        return yaml.safe_load(text)
    return json.loads(text)


def load_config(path: str | Path | None) -> BenchConfig:
    """Load a bench plan, falling back to defaults."""

    if path is None:
        return BenchConfig()
    path = Path(path).expanduser()
    if not path.exists():
        return BenchConfig()

    try:
        data = _read(path)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        logger.warning(f"malformed bench config {path}, using defaults: {exc}")
        return BenchConfig()
    if not isinstance(data, dict):
        logger.warning(f"bench config {path} is not a mapping, using defaults")
        return BenchConfig()

    known = {f.name for f in fields(BenchConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        logger.warning(f"ignoring unknown bench config keys: {', '.join(unknown)}")

    config = BenchConfig()
    config.families = [str(f) for f in data.get("families", config.families)]
    config.sizes = [int(n) for n in data.get("sizes", config.sizes)]
    config.algos = [str(a) for a in data.get("algos", config.algos)]
    config.seeds = [int(s) for s in data.get("seeds", config.seeds)]
    config.output = str(data.get("output", config.output))
    config.workers = max(1, int(data.get("workers", config.workers)))
    config.timing = bool(data.get("timing", config.timing))
    config.oracle_limit = int(data.get("oracle_limit", config.oracle_limit))
    config.params = {
        family: dict(values) for family, values in (data.get("params") or {}).items()
    }
    return config


def save_config(config: BenchConfig, path: str | Path) -> None:
    """Persist a bench plan as YAML or JSON depending on the suffix."""

    path = Path(path).expanduser()
    path.parent.mkdir(parents=True, exist_ok=True)
    if path.suffix.lower() in YAML_SUFFIXES:
        path.write_text(yaml.safe_dump(config.to_dict(), sort_keys=False))
    else:
        path.write_text(json.dumps(config.to_dict(), indent=2))
