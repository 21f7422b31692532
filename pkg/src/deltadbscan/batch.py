"""Batch DBSCAN: region queries, core/border/noise labels, cluster expansion.

`dbscan` is the production path (linear-scan region queries vectorized with
numpy, classic seed expansion). `oracle_dbscan` is a deliberately independent
reimplementation — explicit pairwise distance matrix, transitive closure over
the core graph, borders to the lowest eligible cluster id — kept around so the
two can be checked against each other on randomized inputs.
"""

from __future__ import annotations

from collections import deque
from enum import Enum

import numpy as np

from .model import Cluster, ClusterModel, Dataset, Params, Point, distance


class PointLabel(str, Enum):
    CORE = "core"
    BORDER = "border"
    NOISE = "noise"


def coord_matrix(points) -> np.ndarray:
    """Stack point coords into an (n, d) float64 matrix."""
    pts = list(points)
    if not pts:
        return np.empty((0, 0), dtype=np.float64)
    return np.array([p.coords for p in pts], dtype=np.float64)


def row_distances(matrix: np.ndarray, center: np.ndarray, metric: str) -> np.ndarray:
    """Distances from every matrix row to `center` under the given metric."""
    diff = matrix - center
    if metric == "manhattan":
        return np.abs(diff).sum(axis=1)
    return np.sqrt((diff * diff).sum(axis=1))


def region_query(dataset: Dataset, center: Point, params: Params) -> set[int]:
    """Ids of all dataset points within eps of `center` (inclusive bound)."""
    if len(dataset) == 0:
        return set()
    if center.dimension != dataset.dimension:
        raise ValueError(
            f"dimension mismatch: center has d={center.dimension}, "
            f"dataset has d={dataset.dimension}"
        )
    matrix = coord_matrix(dataset)
    dists = row_distances(matrix, np.asarray(center.coords, dtype=np.float64), params.metric)
    hits = np.flatnonzero(dists <= params.eps)
    return {dataset.points[i].id for i in hits}


def label_points(dataset: Dataset, params: Params) -> dict[int, PointLabel]:
    """Label every point core, border, or noise.

    core: eps-neighborhood (counting the point itself) has >= min_pts points.
    border: non-core with at least one core in its eps-neighborhood.
    noise: everything else.
    """
    n = len(dataset)
    if n == 0:
        return {}
    matrix = coord_matrix(dataset)
    neighborhoods = [
        np.flatnonzero(row_distances(matrix, matrix[i], params.metric) <= params.eps)
        for i in range(n)
    ]
    is_core = np.array([len(nb) >= params.min_pts for nb in neighborhoods])
    labels: dict[int, PointLabel] = {}
    for i, p in enumerate(dataset.points):
        if is_core[i]:
            labels[p.id] = PointLabel.CORE
        elif any(is_core[j] for j in neighborhoods[i]):
            labels[p.id] = PointLabel.BORDER
        else:
            labels[p.id] = PointLabel.NOISE
    return labels


_UNLABELED = 0
_NOISE = -1


def dbscan(dataset: Dataset, params: Params) -> ClusterModel:
    """Cluster a dataset with classic DBSCAN.

    Clusters are the connected components of the core graph (cores within eps
    of each other); borders join the first cluster that reaches them during
    expansion. Cluster ids are assigned 1, 2, 3, ... in order of the first
    seed encountered in dataset order, which makes the whole run deterministic
    for a fixed input order.
    """
    n = len(dataset)
    if n == 0:
        return ClusterModel.empty(params)
    matrix = coord_matrix(dataset)
    eps, min_pts, metric = params.eps, params.min_pts, params.metric

    labels = np.full(n, _UNLABELED, dtype=np.int64)
    visited = np.zeros(n, dtype=bool)
    pending = np.zeros(n, dtype=bool)
    cores_by_cluster: dict[int, set[int]] = {}
    cluster_id = 0

    def query(i: int) -> np.ndarray:
        return np.flatnonzero(row_distances(matrix, matrix[i], metric) <= eps)

    for start in range(n):
        if visited[start]:
            continue
        visited[start] = True
        neighborhood = query(start)
        if len(neighborhood) < min_pts:
            labels[start] = _NOISE
            continue
        cluster_id += 1
        labels[start] = cluster_id
        cores = {start}
        queue = deque()
        for j in neighborhood:
            if labels[j] in (_UNLABELED, _NOISE) and not pending[j]:
                pending[j] = True
                queue.append(j)
        while queue:
            j = queue.popleft()
            pending[j] = False
            if labels[j] == _NOISE:
                labels[j] = cluster_id  # border claimed from tentative noise
                continue
            if labels[j] != _UNLABELED:
                continue
            labels[j] = cluster_id
            visited[j] = True
            neighborhood_j = query(j)
            if len(neighborhood_j) >= min_pts:
                cores.add(j)
                for k in neighborhood_j:
                    if labels[k] in (_UNLABELED, _NOISE) and not pending[k]:
                        pending[k] = True
                        queue.append(k)
        cores_by_cluster[cluster_id] = cores

    return _build_model(dataset, params, labels, cores_by_cluster)


def oracle_dbscan(dataset: Dataset, params: Params) -> ClusterModel:
    """Reference DBSCAN for equivalence testing; O(n^2) memory, meant for small n.

    Computes the full pairwise distance matrix with the scalar `distance`
    function, takes the transitive closure of the core adjacency relation,
    numbers components by the dataset-order position of their first core, and
    assigns each border to its lowest eligible cluster id.
    """
    n = len(dataset)
    if n == 0:
        return ClusterModel.empty(params)
    pts = dataset.points
    dist = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(i + 1, n):
            dist[i, j] = dist[j, i] = distance(pts[i], pts[j], params.metric)

    within = dist <= params.eps
    core = within.sum(axis=1) >= params.min_pts

    reach = within & core[:, None] & core[None, :]
    np.fill_diagonal(reach, core)
    closure = reach.copy()
    for k in range(n):
        if core[k]:
            closure |= closure[:, k : k + 1] & closure[k : k + 1, :]

    labels = np.full(n, _NOISE, dtype=np.int64)
    cores_by_cluster: dict[int, set[int]] = {}
    cluster_id = 0
    for i in range(n):
        if core[i] and labels[i] == _NOISE:
            cluster_id += 1
            component = np.flatnonzero(closure[i] & core)
            labels[component] = cluster_id
            cores_by_cluster[cluster_id] = set(int(j) for j in component)
    for i in range(n):
        if not core[i]:
            eligible = labels[np.flatnonzero(within[i] & core)]
            labels[i] = int(eligible.min()) if len(eligible) else _NOISE

    return _build_model(dataset, params, labels, cores_by_cluster)


def _build_model(
    dataset: Dataset,
    params: Params,
    labels: np.ndarray,
    cores_by_cluster: dict[int, set[int]],
) -> ClusterModel:
    pts = dataset.points
    members: dict[int, set[int]] = {cid: set() for cid in cores_by_cluster}
    outliers: set[int] = set()
    for i, p in enumerate(pts):
        cid = int(labels[i])
        if cid > 0:
            members[cid].add(p.id)
        else:
            outliers.add(p.id)
    clusters = {
        cid: Cluster(
            cluster_id=cid,
            members=frozenset(members[cid]),
            cores=frozenset(pts[i].id for i in cores_by_cluster[cid]),
        )
        for cid in sorted(members)
        if members[cid]
    }
    return ClusterModel(
        params=params,
        points={p.id: p for p in pts},
        clusters=clusters,
        outliers=frozenset(outliers),
        next_cluster_id=max(clusters, default=0) + 1,
    )
