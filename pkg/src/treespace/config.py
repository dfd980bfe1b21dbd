"""Run configuration shared by the CLI and the experiment scripts."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass

from treespace.complexes import PARTITION_NERVE, TREE_SPACE

SPACES = (TREE_SPACE, PARTITION_NERVE)
FORMATS = ("json", "text")
DEPTHS = ("quick", "full")
JOBS_ENV = "TREESPACE_JOBS"

# largest n each command accepts
LIMITS = {
    "enumerate": 7,
    "verify": 7,
    "character": 6,
    "whitehouse": 5,
    "export": 7,
}
# verify sub-check ceilings
HOMOLOGY_MAX = 6
NERVE_MAX = 5
THETA_MAX = 6
INVARIANCE_MAX = 6
WHITEHOUSE_MAX = 5


def default_jobs() -> int:
    raw = os.environ.get(JOBS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: int
    space: str = TREE_SPACE
    fmt: str = "json"
    depth: str = "quick"
    seed: int = 0
    jobs: int = 1
    out: str | None = None

    def __post_init__(self) -> None:
        if self.command not in LIMITS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.space not in SPACES:
            raise ConfigError(f"space must be one of {SPACES}")
        if self.fmt not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}")
        if self.depth not in DEPTHS:
            raise ConfigError(f"depth must be one of {DEPTHS}")
        if self.jobs < 1:
            raise ConfigError("jobs must be positive")
        if not 1 <= self.n <= LIMITS[self.command]:
            raise ConfigError(f"{self.command} supports 1 <= n <= {LIMITS[self.command]}, got {self.n}")

    def as_dict(self) -> dict:
        d = asdict(self)
        d.pop("out")
        d.pop("jobs")  # does not affect results
        return d
