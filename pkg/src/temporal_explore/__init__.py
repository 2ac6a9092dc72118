"""Temporal Explore - exploration schedules and lower bounds for temporal graphs."""

__version__ = "0.1.0"
