"""Exception hierarchy shared by every freewill module."""
from __future__ import annotations

from pathlib import Path


class FreeWillError(Exception):
    """Base class for all errors raised by the package."""


class InvalidInput(FreeWillError, ValueError):
    """An operation received input outside its documented domain."""


class DivergenceUndefined(FreeWillError, ValueError):
    """KL(p || q) requested where q has zero mass under p's support."""


class ConfigError(FreeWillError):
    """Invalid run configuration; ``key`` names the offending dotted key."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key
        self.message = message


class ReportIOError(FreeWillError, OSError):
    """Reading or writing an output file failed."""

    def __init__(self, path: str | Path, message: str):
        super().__init__(f"{path}: {message}")
        self.path = Path(path)


class ManifestInconsistent(FreeWillError):
    """A manifest references files that are missing or whose hashes differ."""

    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = list(problems)


class RunFailed(FreeWillError):
    """An exception escaped a seeded run."""

    def __init__(self, seed: int, cause: BaseException):
        super().__init__(f"run with seed {seed} failed: {cause!r}")
        self.seed = seed
        self.cause = cause

    def __reduce__(self):
        # crosses process boundaries when runs execute in joblib workers
        return (self.__class__, (self.seed, self.cause))
