"""Entry point for running temporal-explore as a module."""

from temporal_explore.cli import main

if __name__ == "__main__":
    raise SystemExit(main())
