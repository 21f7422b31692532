"""Shared domain types: points, parameters, distance metrics, and the cluster model.

Everything here is an immutable value. The incremental engine never mutates a
model in place; it builds updated copies, so superseded models stay valid and
can be shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

METRICS = ("manhattan", "euclidean")
OUTLIER_RULES = ("count_only", "density")


@dataclass(frozen=True)
class Point:
    """A coordinate vector with a caller-assigned non-negative integer id."""

    id: int
    coords: tuple[float, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.id, int) or isinstance(self.id, bool) or self.id < 0:
            raise ValueError(f"point id must be a non-negative integer, got {self.id!r}")
        coords = tuple(float(c) for c in self.coords)
        if len(coords) < 1:
            raise ValueError(f"point {self.id}: coords must have dimension >= 1")
        for c in coords:
            if not math.isfinite(c):
                raise ValueError(f"point {self.id}: non-finite coordinate {c!r}")
        object.__setattr__(self, "coords", coords)

    @property
    def dimension(self) -> int:
        return len(self.coords)


@dataclass(frozen=True)
class Dataset:
    """An ordered collection of uniform-dimension points with distinct ids.

    Iteration order is the insertion/load order; batch clustering depends on
    it for deterministic cluster numbering. Build instances through
    `validate_dataset`.
    """

    points: tuple[Point, ...]
    dimension: Optional[int]

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def ids(self) -> tuple[int, ...]:
        return tuple(p.id for p in self.points)


@dataclass(frozen=True)
class Params:
    """Clustering parameters: radius, density threshold, metric, pool rule."""

    eps: float
    min_pts: int
    metric: str = "manhattan"
    outlier_rule: str = "count_only"

    def __post_init__(self) -> None:
        eps = float(self.eps)
        if not math.isfinite(eps) or eps < 0:
            raise ValueError(f"eps must be finite and >= 0, got {self.eps!r}")
        object.__setattr__(self, "eps", eps)
        if not isinstance(self.min_pts, int) or isinstance(self.min_pts, bool) or self.min_pts < 1:
            raise ValueError(f"min_pts must be an integer >= 1, got {self.min_pts!r}")
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}, got {self.metric!r}")
        if self.outlier_rule not in OUTLIER_RULES:
            raise ValueError(
                f"outlier_rule must be one of {OUTLIER_RULES}, got {self.outlier_rule!r}"
            )


@dataclass(frozen=True)
class Cluster:
    """One cluster: a member id set and the subset marked as core objects."""

    cluster_id: int
    members: frozenset[int]
    cores: frozenset[int]

    def __post_init__(self) -> None:
        if not isinstance(self.cluster_id, int) or self.cluster_id < 1:
            raise ValueError(f"cluster_id must be an integer >= 1, got {self.cluster_id!r}")
        members = frozenset(self.members)
        cores = frozenset(self.cores)
        if not members:
            raise ValueError(f"cluster {self.cluster_id}: members must be non-empty")
        if not cores <= members:
            raise ValueError(f"cluster {self.cluster_id}: cores must be a subset of members")
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "cores", cores)


@dataclass(frozen=True)
class ClusterModel:
    """The clustering state: clusters, the outlier pool, and the point registry.

    Invariant (checked on construction): every registered point id lives in
    exactly one cluster's member set or in the outlier pool, never both and
    never neither.
    """

    params: Params
    points: Mapping[int, Point]
    clusters: Mapping[int, Cluster]
    outliers: frozenset[int]
    next_cluster_id: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", dict(self.points))
        object.__setattr__(self, "clusters", dict(self.clusters))
        object.__setattr__(self, "outliers", frozenset(self.outliers))
        self._validate()

    def _validate(self) -> None:
        dims = {p.dimension for p in self.points.values()}
        if len(dims) > 1:
            raise ValueError(f"registry mixes dimensions {sorted(dims)}")
        for pid, point in self.points.items():
            if pid != point.id:
                raise ValueError(f"registry key {pid} does not match point id {point.id}")
        registered = set(self.points)
        seen: dict[int, int] = {}
        for cid, cluster in self.clusters.items():
            if cid != cluster.cluster_id:
                raise ValueError(f"cluster key {cid} does not match cluster_id {cluster.cluster_id}")
            if cid >= self.next_cluster_id:
                raise ValueError(
                    f"next_cluster_id {self.next_cluster_id} does not exceed cluster id {cid}"
                )
            for pid in cluster.members:
                if pid in seen:
                    raise ValueError(f"point {pid} appears in clusters {seen[pid]} and {cid}")
                if pid not in registered:
                    raise ValueError(f"cluster {cid} references unregistered point {pid}")
                seen[pid] = cid
        for pid in self.outliers:
            if pid in seen:
                raise ValueError(f"point {pid} is both outlier and member of cluster {seen[pid]}")
            if pid not in registered:
                raise ValueError(f"outlier pool references unregistered point {pid}")
        homeless = registered - set(seen) - set(self.outliers)
        if homeless:
            raise ValueError(f"points {sorted(homeless)} belong to no cluster and no outlier pool")
        if self.next_cluster_id < 1:
            raise ValueError(f"next_cluster_id must be >= 1, got {self.next_cluster_id}")

    @classmethod
    def empty(cls, params: Params) -> "ClusterModel":
        return cls(params=params, points={}, clusters={}, outliers=frozenset(), next_cluster_id=1)

    @property
    def dimension(self) -> Optional[int]:
        for p in self.points.values():
            return p.dimension
        return None

    def labels(self) -> dict[int, int]:
        """Point id -> cluster id, with -1 for pooled outliers."""
        out = {pid: -1 for pid in self.outliers}
        for cid, cluster in self.clusters.items():
            for pid in cluster.members:
                out[pid] = cid
        return out

    def cluster_of(self, point_id: int) -> Optional[int]:
        for cid, cluster in self.clusters.items():
            if point_id in cluster.members:
                return cid
        return None


def distance(a: Point, b: Point, metric: str = "manhattan") -> float:
    """Distance between two points of equal dimension.

    manhattan: sum of absolute coordinate differences.
    euclidean: root of the sum of squared differences.
    """
    if metric not in METRICS:
        raise ValueError(f"metric must be one of {METRICS}, got {metric!r}")
    if a.dimension != b.dimension:
        raise ValueError(
            f"dimension mismatch: point {a.id} has d={a.dimension}, point {b.id} has d={b.dimension}"
        )
    if metric == "manhattan":
        return sum(abs(x - y) for x, y in zip(a.coords, b.coords))
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(a.coords, b.coords)))


def validate_dataset(points: Iterable[Point]) -> Dataset:
    """Check uniform dimension, distinct ids, and finite coords; build a Dataset."""
    pts = tuple(points)
    if not pts:
        return Dataset(points=(), dimension=None)
    seen: set[int] = set()
    dim = pts[0].dimension
    for p in pts:
        if not isinstance(p, Point):
            raise ValueError(f"expected Point, got {type(p).__name__}")
        if p.id in seen:
            raise ValueError(f"duplicate point id {p.id}")
        seen.add(p.id)
        if p.dimension != dim:
            raise ValueError(
                f"point {p.id} has dimension {p.dimension}, expected {dim}"
            )
    return Dataset(points=pts, dimension=dim)
