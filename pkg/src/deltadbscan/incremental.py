"""Incremental insertion engine for an existing cluster model.

Arriving points are compared against the core objects of existing clusters:
a point joins the cluster of its nearest core when that core is within eps
and the cluster already holds at least min_pts members; otherwise it lands in
the outlier pool. Whenever a point is pooled, the pool-formation rule runs
once: under `count_only` the whole pool becomes one new cluster as soon as it
reaches min_pts points; under `density` the pool is re-clustered with DBSCAN
and only dense subgroups graduate.

Existing memberships are never revisited: an insert adds exactly one point
(and possibly promotes the pool). Divergence from a full re-run is a measured
quantity, not a hidden one — see `deltadbscan.bench`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Union

import numpy as np

from .batch import dbscan, row_distances
from .model import Cluster, ClusterModel, Point, validate_dataset


@dataclass(frozen=True)
class Assigned:
    """The point joined an existing cluster via its nearest core object."""

    cluster_id: int
    nearest_core_id: int
    distance: float


@dataclass(frozen=True)
class PooledOutlier:
    """The point was rejected by every cluster and sits in the outlier pool."""


@dataclass(frozen=True)
class NewClusterFormed:
    """Pooling the point tipped the pool over and a new cluster absorbed it."""

    cluster_id: int
    member_ids: frozenset[int]


InsertOutcome = Union[Assigned, PooledOutlier, NewClusterFormed]


class NearestCore(NamedTuple):
    cluster_id: int
    core_id: int
    distance: float


class BatchInsertError(ValueError):
    """A point in a batch failed; all prior insertions remain applied.

    Attributes carry the partial result: `model` is the state after the last
    successful insert, `outcomes` the outcomes up to (not including) the
    failed point, `failed_point` the offender.
    """

    def __init__(self, reason: str, model: ClusterModel, outcomes: list, failed_point: Point):
        super().__init__(f"batch insert aborted at point {failed_point.id}: {reason}")
        self.model = model
        self.outcomes = outcomes
        self.failed_point = failed_point


class _Growable:
    """Append-only array with doubling capacity; `view()` is the live prefix."""

    def __init__(self, cols: Optional[int], dtype) -> None:
        shape = (16,) if cols is None else (16, cols)
        self._arr = np.empty(shape, dtype=dtype)
        self._n = 0

    def append(self, value) -> None:
        if self._n == len(self._arr):
            grown_shape = (2 * len(self._arr),) + self._arr.shape[1:]
            grown = np.empty(grown_shape, dtype=self._arr.dtype)
            grown[: self._n] = self._arr
            self._arr = grown
        self._arr[self._n] = value
        self._n += 1

    def view(self) -> np.ndarray:
        return self._arr[: self._n]


@dataclass
class _MutCluster:
    members: set[int]
    cores: set[int]


class _EngineState:
    """Mutable working copy of a ClusterModel for one insertion session.

    A session is either a single `insert` call or one `batch_insert` stream;
    the immutable model is rebuilt once at the end. Coordinate buffers for the
    full registry and for the core objects keep every query a single
    vectorized scan.
    """

    def __init__(self, model: ClusterModel) -> None:
        self.params = model.params
        self.points: dict[int, Point] = dict(model.points)
        self.clusters: dict[int, _MutCluster] = {
            cid: _MutCluster(set(c.members), set(c.cores)) for cid, c in model.clusters.items()
        }
        self.outliers: set[int] = set(model.outliers)
        self.next_cluster_id = model.next_cluster_id
        self.dim: Optional[int] = model.dimension
        self._registry: Optional[_Growable] = None
        self._core_coords: Optional[_Growable] = None
        self._core_cids = _Growable(None, np.int64)
        self._core_pids = _Growable(None, np.int64)
        if self.dim is not None:
            self._init_buffers(self.dim)
            for p in self.points.values():
                self._registry.append(p.coords)
            for cid in sorted(self.clusters):
                for pid in sorted(self.clusters[cid].cores):
                    self._append_core(cid, pid)

    def _init_buffers(self, dim: int) -> None:
        self.dim = dim
        self._registry = _Growable(dim, np.float64)
        self._core_coords = _Growable(dim, np.float64)

    def _append_core(self, cid: int, pid: int) -> None:
        self._core_coords.append(self.points[pid].coords)
        self._core_cids.append(cid)
        self._core_pids.append(pid)

    def _register(self, p: Point) -> None:
        self.points[p.id] = p
        self._registry.append(p.coords)

    def nearest_core(self, p: Point) -> Optional[NearestCore]:
        if self._core_coords is None or len(self._core_coords.view()) == 0:
            return None
        dists = row_distances(
            self._core_coords.view(), np.asarray(p.coords, dtype=np.float64), self.params.metric
        )
        best = dists.min()
        ties = np.flatnonzero(dists == best)
        cids = self._core_cids.view()
        pids = self._core_pids.view()
        cid, pid = min((int(cids[i]), int(pids[i])) for i in ties)
        return NearestCore(cluster_id=cid, core_id=pid, distance=float(best))

    def _neighborhood_size(self, p: Point) -> int:
        dists = row_distances(
            self._registry.view(), np.asarray(p.coords, dtype=np.float64), self.params.metric
        )
        return int((dists <= self.params.eps).sum())

    def insert_point(self, p: Point) -> InsertOutcome:
        if p.id in self.points:
            raise ValueError(f"point {p.id} is already registered in the model")
        if self.dim is None:
            self._init_buffers(p.dimension)
        elif p.dimension != self.dim:
            raise ValueError(
                f"dimension mismatch: point {p.id} has d={p.dimension}, model has d={self.dim}"
            )

        nearest = self.nearest_core(p)
        if (
            nearest is not None
            and nearest.distance <= self.params.eps
            and len(self.clusters[nearest.cluster_id].members) >= self.params.min_pts
        ):
            self._register(p)
            cluster = self.clusters[nearest.cluster_id]
            cluster.members.add(p.id)
            if self._neighborhood_size(p) >= self.params.min_pts:
                cluster.cores.add(p.id)
                self._append_core(nearest.cluster_id, p.id)
            return Assigned(
                cluster_id=nearest.cluster_id,
                nearest_core_id=nearest.core_id,
                distance=nearest.distance,
            )

        self._register(p)
        self.outliers.add(p.id)
        for cid in self.form_from_pool():
            if p.id in self.clusters[cid].members:
                return NewClusterFormed(
                    cluster_id=cid, member_ids=frozenset(self.clusters[cid].members)
                )
        return PooledOutlier()

    def form_from_pool(self) -> list[int]:
        """Run the pool-formation rule once; return newly created cluster ids."""
        if len(self.outliers) < self.params.min_pts:
            return []
        if self.params.outlier_rule == "count_only":
            cid = self.next_cluster_id
            self.next_cluster_id += 1
            members = set(self.outliers)
            self.clusters[cid] = _MutCluster(members=members, cores=set(members))
            self.outliers.clear()
            for pid in sorted(members):
                self._append_core(cid, pid)
            return [cid]

        pool = validate_dataset([self.points[pid] for pid in sorted(self.outliers)])
        sub = dbscan(pool, self.params)
        new_ids: list[int] = []
        for sub_cid in sorted(sub.clusters):
            sub_cluster = sub.clusters[sub_cid]
            cid = self.next_cluster_id
            self.next_cluster_id += 1
            self.clusters[cid] = _MutCluster(set(sub_cluster.members), set(sub_cluster.cores))
            self.outliers -= sub_cluster.members
            for pid in sorted(sub_cluster.cores):
                self._append_core(cid, pid)
            new_ids.append(cid)
        return new_ids

    def to_model(self) -> ClusterModel:
        clusters = {
            cid: Cluster(
                cluster_id=cid, members=frozenset(c.members), cores=frozenset(c.cores)
            )
            for cid, c in self.clusters.items()
        }
        return ClusterModel(
            params=self.params,
            points=self.points,
            clusters=clusters,
            outliers=frozenset(self.outliers),
            next_cluster_id=self.next_cluster_id,
        )


def nearest_core(model: ClusterModel, p: Point) -> Optional[NearestCore]:
    """Globally nearest core object across all clusters, or None without cores.

    Ties break toward the lower distance, then lower cluster id, then lower
    core point id.
    """
    dim = model.dimension
    if dim is not None and p.dimension != dim:
        raise ValueError(
            f"dimension mismatch: point {p.id} has d={p.dimension}, model has d={dim}"
        )
    return _EngineState(model).nearest_core(p)


def insert(model: ClusterModel, p: Point) -> tuple[ClusterModel, InsertOutcome]:
    """Insert one point, returning the updated model and what happened to it."""
    state = _EngineState(model)
    outcome = state.insert_point(p)
    return state.to_model(), outcome


def batch_insert(
    model: ClusterModel, points: Iterable[Point]
) -> tuple[ClusterModel, list[InsertOutcome]]:
    """Fold `insert` left-to-right over `points`.

    Equivalent to repeated single inserts but reuses one working state, so
    large streams cost O(n) per point instead of O(n) model copies. The first
    failing point raises BatchInsertError carrying the partial result.
    """
    state = _EngineState(model)
    outcomes: list[InsertOutcome] = []
    for p in points:
        try:
            outcomes.append(state.insert_point(p))
        except ValueError as exc:
            raise BatchInsertError(str(exc), state.to_model(), outcomes, p) from exc
    return state.to_model(), outcomes


def form_cluster_from_pool(model: ClusterModel) -> tuple[ClusterModel, Optional[int]]:
    """Apply the pool-formation rule once, outside of any insert.

    Returns the updated model and the first newly created cluster id, or None
    when the rule does not fire (pool below min_pts, or — under the density
    rule — no dense subgroup in the pool).
    """
    state = _EngineState(model)
    new_ids = state.form_from_pool()
    return state.to_model(), (min(new_ids) if new_ids else None)
