"""Source revision stamp for benchmark outputs."""

from __future__ import annotations

import logging
from pathlib import Path

from git import InvalidGitRepositoryError, NoSuchPathError, Repo

logger = logging.getLogger(__name__)

UNKNOWN = "unknown"


def source_revision(path: Path | None = None) -> str:
    """Commit hash of the repository containing ``path`` (or this package).

    Returns ``"unknown"`` outside a repository or on a repository without commits.
    A ``+dirty`` suffix marks uncommitted changes.
    """

    path = path or Path(__file__).resolve().parent
    try:
        repo = Repo(path, search_parent_directories=True)
    except (InvalidGitRepositoryError, NoSuchPathError):
        return UNKNOWN
    try:
        sha = repo.head.commit.hexsha
    except ValueError:
        logger.debug(f"repository at {repo.working_dir} has no commits")
        return UNKNOWN
    return f"{sha}+dirty" if repo.is_dirty() else sha
