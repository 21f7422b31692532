"""Growth measurement and the rerun-vs-incremental decision rule."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Decision(str, Enum):
    USE_INCREMENTAL = "use_incremental"
    RERUN_FULL = "rerun_full"


def delta_percent(old_size: int, added: int) -> float:
    """Added points as a percentage of the original database size.

    Raises for old_size == 0: the growth ratio has no baseline there and
    silently returning a number would hide the problem.
    """
    if not isinstance(old_size, int) or isinstance(old_size, bool) or old_size < 1:
        raise ValueError(f"old_size must be an integer >= 1, got {old_size!r}")
    if not isinstance(added, int) or isinstance(added, bool) or added < 0:
        raise ValueError(f"added must be an integer >= 0, got {added!r}")
    return added / old_size * 100.0


@dataclass(frozen=True)
class DeltaStats:
    old_size: int
    added: int
    delta_percent: float

    @classmethod
    def from_counts(cls, old_size: int, added: int) -> "DeltaStats":
        return cls(old_size=old_size, added=added, delta_percent=delta_percent(old_size, added))


@dataclass(frozen=True)
class RerunPolicy:
    """Keep the incremental result up to (and including) threshold_x percent."""

    threshold_x: float

    def __post_init__(self) -> None:
        if not self.threshold_x > 0:
            raise ValueError(f"threshold_x must be > 0, got {self.threshold_x!r}")


def should_rerun(stats: DeltaStats, policy: RerunPolicy) -> Decision:
    """Rerun the full algorithm only when growth strictly exceeds the threshold."""
    if stats.delta_percent > policy.threshold_x:
        return Decision.RERUN_FULL
    return Decision.USE_INCREMENTAL
