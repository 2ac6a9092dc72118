"""Exception hierarchy shared by every module.

Each exception carries the process exit code the CLI reports for it.
"""

from __future__ import annotations

from typing import Any

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_BAD_INPUT = 2
EXIT_LIFETIME = 3


class TemporalExplorationError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = EXIT_VALIDATION


class InstanceError(TemporalExplorationError, ValueError):
    """A temporal graph, instance or schedule is malformed."""

    exit_code = EXIT_BAD_INPUT


class StepRangeError(TemporalExplorationError, IndexError):
    """A step index lies outside ``[0, lifetime]``."""

    exit_code = EXIT_BAD_INPUT

    def __init__(self, step: int, lifetime: int):
        super().__init__(f"step {step} outside [0, {lifetime}]")
        self.step = step
        self.lifetime = lifetime


class ShapeError(TemporalExplorationError, ValueError):
    """The underlying graph does not have the shape an algorithm needs."""

    exit_code = EXIT_BAD_INPUT


class GenerationError(TemporalExplorationError):
    """A generator could not produce an instance."""

    exit_code = EXIT_BAD_INPUT

    def __init__(self, message: str, seed: int | None = None):
        if seed is not None:
            message = f"{message} (seed {seed})"
        super().__init__(message)
        self.seed = seed


class DecompositionError(TemporalExplorationError, ValueError):
    """A tree decomposition is invalid for the graph it is paired with."""

    exit_code = EXIT_BAD_INPUT


class LifetimeExhaustedError(TemporalExplorationError):
    """An algorithm would have to move past the last step of the lifetime."""

    exit_code = EXIT_LIFETIME

    def __init__(self, message: str, best: Any = None):
        super().__init__(message)
        self.best = best


class PreconditionError(TemporalExplorationError):
    """A reachability precondition fails at ``step``."""

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class GridPremiseError(TemporalExplorationError):
    """The grid recursion's connectivity premise failed at a still step."""


class RegularityError(TemporalExplorationError):
    """An edge violates its regularity profile."""


class ReductionError(TemporalExplorationError):
    """A phase builder broke its contract."""


class TransferError(TemporalExplorationError):
    """A walk cannot be transferred to the contracted graph."""


class OracleLimitError(TemporalExplorationError):
    """An instance is too large for an exact solver."""

    exit_code = EXIT_BAD_INPUT


class InsufficientDataError(TemporalExplorationError):
    """Not enough benchmark rows to fit a growth model."""

    exit_code = EXIT_BAD_INPUT
