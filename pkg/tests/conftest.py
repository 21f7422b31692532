"""Shared fixtures and independent checking helpers for the test suite."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from deltadbscan import (
    Cluster,
    ClusterModel,
    Dataset,
    Params,
    Point,
    dbscan,
    validate_dataset,
)


def points_1d(values):
    """1-D points whose ids equal their (integer) coordinate values."""
    return [Point(id=v, coords=(float(v),)) for v in values]


EXAMPLE1_VALUES = [12, 15, 22, 85, 82, 73, 8, 10, 17, 48, 96, 152]

EXAMPLE2_COORDS = {
    1: (5.0, 2.0),
    2: (12.0, 3.0),
    3: (22.0, 82.0),
    4: (125.0, 110.0),
    5: (32.0, 42.0),
    6: (12.0, 28.0),
    7: (56.0, 48.0),
    8: (68.0, 72.0),
}


@pytest.fixture
def example1_dataset() -> Dataset:
    return validate_dataset(points_1d(EXAMPLE1_VALUES))


@pytest.fixture
def example1_params() -> Params:
    return Params(eps=30.0, min_pts=5, metric="manhattan")


@pytest.fixture
def example1_model(example1_dataset, example1_params) -> ClusterModel:
    """The worked 1-D scenario: two clusters whose designated core objects
    are 15 and 82, one far straggler pooled.

    Hand-built rather than produced by `dbscan`: the scenario fixes the two
    core objects by fiat, and the second cluster needs min_pts members for
    the insertion gate, so the shared border point 48 lives there.
    """
    return ClusterModel(
        params=example1_params,
        points={p.id: p for p in example1_dataset},
        clusters={
            1: Cluster(1, frozenset({8, 10, 12, 15, 17, 22}), frozenset({15})),
            2: Cluster(2, frozenset({48, 73, 82, 85, 96}), frozenset({82})),
        },
        outliers=frozenset({152}),
        next_cluster_id=3,
    )


@pytest.fixture
def example2_points() -> dict[int, Point]:
    return {pid: Point(id=pid, coords=c) for pid, c in EXAMPLE2_COORDS.items()}


@pytest.fixture
def example2_params() -> Params:
    return Params(eps=25.0, min_pts=4, metric="manhattan", outlier_rule="count_only")


@pytest.fixture
def example2_model(example2_points, example2_params) -> ClusterModel:
    """The worked 2-D scenario: cores (12,3) and (32,42), outlier (125,110)."""
    return ClusterModel(
        params=example2_params,
        points=example2_points,
        clusters={
            1: Cluster(1, frozenset({1, 2, 6}), frozenset({2})),
            2: Cluster(2, frozenset({3, 5, 7, 8}), frozenset({5})),
        },
        outliers=frozenset({4}),
        next_cluster_id=3,
    )


@pytest.fixture
def example2_stream() -> list[Point]:
    return [
        Point(id=9, coords=(132.0, 122.0)),
        Point(id=10, coords=(38.0, 58.0)),
        Point(id=11, coords=(162.0, 135.0)),
        Point(id=12, coords=(118.0, 126.0)),
    ]


def check_partition(model: ClusterModel) -> None:
    """Assert the exactly-one-home property from first principles."""
    registered = set(model.points)
    homes: dict[int, object] = {}
    for cid, cluster in model.clusters.items():
        assert cid == cluster.cluster_id
        assert cluster.members, f"cluster {cid} is empty"
        assert cluster.cores <= cluster.members
        assert cid < model.next_cluster_id
        for pid in cluster.members:
            assert pid in registered, f"cluster {cid} references unknown point {pid}"
            assert pid not in homes, f"point {pid} in {homes[pid]} and cluster {cid}"
            homes[pid] = f"cluster {cid}"
    for pid in model.outliers:
        assert pid in registered
        assert pid not in homes, f"point {pid} in {homes[pid]} and outlier pool"
        homes[pid] = "outliers"
    assert set(homes) == registered, "some points have no home"


def canonical_partition(model: ClusterModel):
    """Relabeling-invariant view: member sets as a set, plus the outlier set."""
    return (
        frozenset(frozenset(c.members) for c in model.clusters.values()),
        frozenset(model.outliers),
    )


def brute_force_rand(a: dict, b: dict) -> float:
    """Pair-by-pair Rand index, the oracle for the fast implementation."""
    assert set(a) == set(b)
    ids = sorted(a, key=repr)
    pairs = list(itertools.combinations(ids, 2))
    if not pairs:
        return 1.0
    agree = sum(1 for i, j in pairs if (a[i] == a[j]) == (b[i] == b[j]))
    return agree / len(pairs)


def random_dataset(rng: np.random.Generator, n: int, d: int, kind: str = "uniform") -> Dataset:
    if kind == "uniform":
        coords = rng.uniform(0.0, 10.0, size=(n, d))
    else:  # gaussian blobs
        n_blobs = int(rng.integers(1, 4))
        centers = rng.uniform(0.0, 20.0, size=(n_blobs, d))
        picks = rng.integers(0, n_blobs, size=n)
        coords = centers[picks] + rng.normal(0.0, 1.0, size=(n, d))
    points = [Point(id=i, coords=tuple(float(v) for v in row)) for i, row in enumerate(coords)]
    return validate_dataset(points)


def random_model(rng: np.random.Generator, n: int = 20, d: int = 2) -> ClusterModel:
    """A structurally valid model with arbitrary memberships, for round-trip tests."""
    dataset = random_dataset(rng, n, d)
    params = Params(
        eps=float(rng.uniform(0.1, 5.0)),
        min_pts=int(rng.integers(1, 6)),
        metric=str(rng.choice(["manhattan", "euclidean"])),
        outlier_rule=str(rng.choice(["count_only", "density"])),
    )
    n_clusters = int(rng.integers(0, 4))
    assignment = rng.integers(0, n_clusters + 1, size=n)  # 0 = outlier pool
    members: dict[int, set[int]] = {}
    outliers: set[int] = set()
    for p, a in zip(dataset.points, assignment):
        if a == 0:
            outliers.add(p.id)
        else:
            members.setdefault(int(a), set()).add(p.id)
    clusters = {}
    cid = 0
    for _, mset in sorted(members.items()):
        cid += 1
        n_cores = int(rng.integers(0, len(mset) + 1))
        cores = set(rng.choice(sorted(mset), size=n_cores, replace=False)) if n_cores else set()
        clusters[cid] = Cluster(cid, frozenset(mset), frozenset(int(c) for c in cores))
    return ClusterModel(
        params=params,
        points={p.id: p for p in dataset},
        clusters=clusters,
        outliers=frozenset(outliers),
        next_cluster_id=max(clusters, default=0) + 1,
    )


def two_blob_case(seed: int, eps: float = 1.0, min_pts: int = 4, n_blob: int = 25, n_add: int = 20):
    """Two tight, far-apart blobs plus additions sampled within eps/2 of cores.

    Blob offsets are rejection-sampled to stay within eps/2 of the blob
    center, so every base point is core and the base has no noise; the blob
    centers sit 20*eps apart. Returns (base, params, additions).
    """
    rng = np.random.default_rng(seed)
    centers = np.array([[0.0, 0.0], [20.0 * eps, 0.0]])

    def offsets(count, radius):
        out = []
        while len(out) < count:
            cand = rng.normal(0.0, radius / 3.0, size=2)
            if abs(cand[0]) + abs(cand[1]) <= radius:
                out.append(cand)
        return np.array(out)

    rows = np.vstack([c + offsets(n_blob, eps / 2.0) for c in centers])
    base = validate_dataset(
        [Point(id=i, coords=(float(x), float(y))) for i, (x, y) in enumerate(rows)]
    )
    params = Params(eps=eps, min_pts=min_pts, metric="manhattan", outlier_rule="density")
    model = dbscan(base, params)
    core_coords = [
        model.points[pid].coords
        for cid in sorted(model.clusters)
        for pid in sorted(model.clusters[cid].cores)
    ]
    additions = []
    for k in range(n_add):
        center = core_coords[int(rng.integers(len(core_coords)))]
        off = offsets(1, eps / 2.0)[0]
        additions.append(
            Point(id=len(base) + k, coords=(float(center[0] + off[0]), float(center[1] + off[1])))
        )
    return base, params, additions
