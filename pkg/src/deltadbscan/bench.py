"""Benchmark harness: full-rerun vs incremental-update timing and agreement.

Each trial clusters `base ∪ additions` from scratch (t1) and, separately,
feeds the additions into the precomputed base model (t2), then scores how
similar the two partitions are with the Rand index. A sweep runs trials over
a ladder of growth fractions with a cumulative, seeded addition stream and
reports where (if anywhere) the incremental path stops paying off.
"""

from __future__ import annotations

import statistics
import time
from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Mapping, Optional, Sequence

import numpy as np

from .batch import coord_matrix, dbscan
from .incremental import batch_insert
from .model import ClusterModel, Dataset, Point, validate_dataset

NOISE_MODES = ("singletons", "ignore")


@dataclass(frozen=True)
class TrialResult:
    """One growth level: wall-clock medians, speedup, partition agreement."""

    delta_fraction: float
    t_full: float
    t_incremental: float
    speedup: float
    agreement: float


@dataclass(frozen=True)
class BenchReport:
    trials: tuple[TrialResult, ...]
    crossover_percent: Optional[float]
    recommended_percent: Optional[float]
    agreement_floor: float


@dataclass(frozen=True)
class AdditionStream:
    """Spec for the seeded addition sampler used by `sweep`.

    Most points are Gaussian offsets around a uniformly chosen core object of
    the stored model (exercising the assignment path); `noise_fraction` of
    them are uniform draws over the base bounding box inflated by two eps
    (exercising the pooling path).
    """

    seed: int = 0
    noise_fraction: float = 0.1
    core_sigma_scale: float = 0.25

    def __post_init__(self) -> None:
        if not 0.0 <= self.noise_fraction <= 1.0:
            raise ValueError(f"noise_fraction must be in [0, 1], got {self.noise_fraction!r}")
        if self.core_sigma_scale <= 0:
            raise ValueError(f"core_sigma_scale must be > 0, got {self.core_sigma_scale!r}")


def rand_index(a: Mapping[Hashable, Hashable], b: Mapping[Hashable, Hashable]) -> float:
    """Fraction of unordered id pairs grouped consistently by both partitions.

    `a` and `b` map each id to its group key and must cover the same id set.
    With fewer than two ids there are no pairs to disagree on, so 1.0.
    """
    if set(a) != set(b):
        raise ValueError("partitions must cover the same id set")
    n = len(a)
    if n < 2:
        return 1.0
    joint = Counter((a[k], b[k]) for k in a)
    same_a = sum(c * (c - 1) // 2 for c in Counter(a.values()).values())
    same_b = sum(c * (c - 1) // 2 for c in Counter(b.values()).values())
    same_both = sum(c * (c - 1) // 2 for c in joint.values())
    pairs = n * (n - 1) // 2
    return (pairs - same_a - same_b + 2 * same_both) / pairs


def model_partition(model: ClusterModel, noise: str = "singletons") -> dict[int, Hashable]:
    """Point id -> group key for Rand-index comparison.

    noise="singletons" gives every pooled outlier its own group, so noise
    disagreements are penalized; noise="ignore" drops outliers entirely.
    """
    if noise not in NOISE_MODES:
        raise ValueError(f"noise must be one of {NOISE_MODES}, got {noise!r}")
    part: dict[int, Hashable] = {}
    for cid, cluster in model.clusters.items():
        for pid in cluster.members:
            part[pid] = ("cluster", cid)
    if noise == "singletons":
        for pid in model.outliers:
            part[pid] = ("outlier", pid)
    return part


def partition_agreement(a: ClusterModel, b: ClusterModel, noise: str = "singletons") -> float:
    """Rand index between two models over their common ground."""
    pa = model_partition(a, noise)
    pb = model_partition(b, noise)
    if noise == "ignore":
        shared = set(pa) & set(pb)
        pa = {k: pa[k] for k in shared}
        pb = {k: pb[k] for k in shared}
    return rand_index(pa, pb)


def run_trial(
    base: Dataset,
    additions: Dataset,
    params,
    repeats: int = 5,
    noise_mode: str = "singletons",
) -> TrialResult:
    """Time a full re-cluster against an incremental update of the same growth.

    The base model is computed outside the timed regions; each timing repeat
    re-runs only the algorithm under test. Both result partitions come from
    deterministic code, so agreement is computed once.
    """
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    if len(base) == 0:
        raise ValueError("base dataset must be non-empty")
    collisions = set(base.ids()) & set(additions.ids())
    if collisions:
        raise ValueError(f"addition ids collide with base ids: {sorted(collisions)[:5]}")
    if len(additions) and additions.dimension != base.dimension:
        raise ValueError(
            f"dimension mismatch: base d={base.dimension}, additions d={additions.dimension}"
        )

    stored = dbscan(base, params)
    combined = validate_dataset(base.points + additions.points)

    full_times = []
    for _ in range(repeats):
        start = time.perf_counter()
        full_model = dbscan(combined, params)
        full_times.append(time.perf_counter() - start)

    incr_times = []
    for _ in range(repeats):
        start = time.perf_counter()
        incr_model, _ = batch_insert(stored, additions.points)
        incr_times.append(time.perf_counter() - start)

    t_full = statistics.median(full_times)
    t_incremental = statistics.median(incr_times)
    agreement = partition_agreement(incr_model, full_model, noise_mode)
    return TrialResult(
        delta_fraction=len(additions) / len(base),
        t_full=t_full,
        t_incremental=t_incremental,
        speedup=t_full / t_incremental,
        agreement=agreement,
    )


def generate_additions(
    stream: AdditionStream, base: Dataset, model: ClusterModel, count: int
) -> list[Point]:
    """Sample `count` addition points per the stream spec, ids continuing base."""
    rng = np.random.default_rng(stream.seed)
    eps = model.params.eps
    dim = base.dimension
    coords = coord_matrix(base)
    lo = coords.min(axis=0) - 2.0 * eps
    hi = coords.max(axis=0) + 2.0 * eps
    core_rows = [
        model.points[pid].coords
        for cid in sorted(model.clusters)
        for pid in sorted(model.clusters[cid].cores)
    ]
    cores = np.array(core_rows, dtype=np.float64) if core_rows else None
    sigma = stream.core_sigma_scale * eps
    next_id = max(base.ids()) + 1
    out: list[Point] = []
    for k in range(count):
        if cores is None or rng.random() < stream.noise_fraction:
            sample = rng.uniform(lo, hi)
        else:
            center = cores[rng.integers(len(cores))]
            sample = center + rng.normal(0.0, sigma, size=dim)
        out.append(Point(id=next_id + k, coords=tuple(float(c) for c in sample)))
    return out


def sweep(
    base: Dataset,
    stream: AdditionStream,
    params,
    deltas: Sequence[float],
    repeats: int = 5,
    agreement_floor: float = 0.95,
    noise_mode: str = "singletons",
) -> BenchReport:
    """Run one trial per growth fraction, drawing additions cumulatively.

    `deltas` must be ascending fractions in (0, 1]. Additions come from a
    single seeded stream, so the trial at a larger delta extends (not
    replaces) the additions of a smaller one and the whole sweep reproduces
    exactly for a fixed seed — timings aside.
    """
    deltas = list(deltas)
    if not deltas:
        raise ValueError("deltas must be non-empty")
    if any(not 0.0 < d <= 1.0 for d in deltas):
        raise ValueError(f"every delta must be in (0, 1], got {deltas}")
    if deltas != sorted(deltas):
        raise ValueError(f"deltas must be ascending, got {deltas}")
    if len(base) == 0:
        raise ValueError("base dataset must be non-empty")

    stored = dbscan(base, params)
    counts = [max(1, round(d * len(base))) for d in deltas]
    master = generate_additions(stream, base, stored, counts[-1])

    trials = []
    for m in counts:
        additions = validate_dataset(master[:m])
        trials.append(run_trial(base, additions, params, repeats=repeats, noise_mode=noise_mode))

    crossover = next(
        (t.delta_fraction * 100.0 for t in trials if t.t_incremental >= t.t_full), None
    )
    recommended = next(
        (
            t.delta_fraction * 100.0
            for t in reversed(trials)
            if t.agreement >= agreement_floor and t.t_incremental < t.t_full
        ),
        None,
    )
    return BenchReport(
        trials=tuple(trials),
        crossover_percent=crossover,
        recommended_percent=recommended,
        agreement_floor=agreement_floor,
    )


def format_report(report: BenchReport) -> str:
    """Render a report as CSV rows plus trailing `#` summary comments."""
    lines = ["delta_percent,t1_seconds,t2_seconds,speedup,rand_index"]
    for t in report.trials:
        lines.append(
            f"{t.delta_fraction * 100.0!r},{t.t_full!r},{t.t_incremental!r},"
            f"{t.speedup!r},{t.agreement!r}"
        )
    crossover = "none" if report.crossover_percent is None else repr(report.crossover_percent)
    recommended = (
        "none" if report.recommended_percent is None else repr(report.recommended_percent)
    )
    lines.append(f"# crossover_percent={crossover}")
    lines.append(f"# recommended_percent={recommended}")
    lines.append(f"# agreement_floor={report.agreement_floor!r}")
    return "\n".join(lines) + "\n"


def write_report(report: BenchReport, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_report(report))
