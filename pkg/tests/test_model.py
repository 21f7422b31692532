"""Domain types: distance metrics, dataset validation, model invariants."""

import math

import numpy as np
import pytest

from deltadbscan import Cluster, ClusterModel, Params, Point, distance, validate_dataset

from conftest import points_1d


def pt(pid, *coords):
    return Point(id=pid, coords=tuple(float(c) for c in coords))


class TestDistance:
    def test_manhattan_1d_worked_example(self):
        assert distance(pt(1, 56), pt(2, 82), "manhattan") == 26.0

    def test_manhattan_2d_worked_example(self):
        assert distance(pt(1, 38, 58), pt(2, 32, 42), "manhattan") == 22.0

    @pytest.mark.parametrize("metric", ["manhattan", "euclidean"])
    def test_identity(self, metric):
        assert distance(pt(1, 3.5, -2.0), pt(2, 3.5, -2.0), metric) == 0.0

    def test_euclidean_345(self):
        assert distance(pt(1, 0, 0), pt(2, 3, 4), "euclidean") == 5.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension mismatch"):
            distance(pt(1, 0, 0), pt(2, 1, 2, 3))

    def test_unknown_metric(self):
        with pytest.raises(ValueError, match="metric"):
            distance(pt(1, 0), pt(2, 1), "chebyshev")

    @pytest.mark.parametrize("metric", ["manhattan", "euclidean"])
    def test_metric_axioms_randomized(self, metric):
        rng = np.random.default_rng(7)
        for _ in range(200):
            d = int(rng.integers(1, 6))
            a, b, c = (pt(i, *rng.uniform(-50, 50, size=d)) for i in range(3))
            dab = distance(a, b, metric)
            assert dab >= 0.0
            assert dab == distance(b, a, metric)
            assert distance(a, a, metric) == 0.0
            assert distance(a, c, metric) <= dab + distance(b, c, metric) + 1e-9

    def test_manhattan_dominates_euclidean(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            d = int(rng.integers(1, 6))
            a, b = (pt(i, *rng.uniform(-50, 50, size=d)) for i in range(2))
            assert distance(a, b, "manhattan") >= distance(a, b, "euclidean") - 1e-12

    def test_zero_iff_equal_coords(self):
        assert distance(pt(1, 2.0, 3.0), pt(9, 2.0, 3.0)) == 0.0
        assert distance(pt(1, 2.0, 3.0), pt(9, 2.0, 3.0000001)) > 0.0


class TestPoint:
    def test_rejects_nan_and_inf(self):
        with pytest.raises(ValueError, match="non-finite"):
            pt(1, float("nan"))
        with pytest.raises(ValueError, match="non-finite"):
            pt(1, 1.0, float("inf"))

    def test_rejects_negative_id(self):
        with pytest.raises(ValueError, match="non-negative"):
            pt(-1, 0.0)

    def test_rejects_empty_coords(self):
        with pytest.raises(ValueError, match="dimension"):
            Point(id=1, coords=())

    def test_coords_coerced_to_float_tuple(self):
        p = Point(id=1, coords=(1, 2))
        assert p.coords == (1.0, 2.0)
        assert all(isinstance(c, float) for c in p.coords)


class TestValidateDataset:
    def test_accepts_uniform_points(self):
        ds = validate_dataset([pt(1, 0, 0), pt(2, 1, 1)])
        assert ds.dimension == 2
        assert len(ds) == 2
        assert ds.ids() == (1, 2)

    def test_duplicate_id_names_offender(self):
        with pytest.raises(ValueError, match="duplicate point id 1"):
            validate_dataset([pt(1, 0, 0), pt(1, 1, 1)])

    def test_dimension_error_names_offender(self):
        with pytest.raises(ValueError, match="point 2 has dimension 3"):
            validate_dataset([pt(1, 0, 0), pt(2, 1, 2, 3)])

    def test_empty_dataset(self):
        ds = validate_dataset([])
        assert len(ds) == 0
        assert ds.dimension is None

    def test_preserves_order(self):
        ds = validate_dataset(points_1d([5, 3, 9]))
        assert ds.ids() == (5, 3, 9)


class TestParams:
    def test_defaults(self):
        p = Params(eps=1.0, min_pts=3)
        assert p.metric == "manhattan"
        assert p.outlier_rule == "count_only"

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"eps": -1.0, "min_pts": 3},
            {"eps": float("nan"), "min_pts": 3},
            {"eps": 1.0, "min_pts": 0},
            {"eps": 1.0, "min_pts": 2.5},
            {"eps": 1.0, "min_pts": 3, "metric": "cosine"},
            {"eps": 1.0, "min_pts": 3, "outlier_rule": "never"},
        ],
    )
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(ValueError):
            Params(**kwargs)

    def test_eps_zero_allowed(self):
        assert Params(eps=0.0, min_pts=1).eps == 0.0


class TestCluster:
    def test_cores_must_be_members(self):
        with pytest.raises(ValueError, match="subset"):
            Cluster(1, frozenset({1, 2}), frozenset({3}))

    def test_members_must_be_nonempty(self):
        with pytest.raises(ValueError, match="non-empty"):
            Cluster(1, frozenset(), frozenset())

    def test_cluster_id_must_be_positive(self):
        with pytest.raises(ValueError, match="cluster_id"):
            Cluster(0, frozenset({1}), frozenset())


class TestClusterModel:
    def _points(self, n):
        return {p.id: p for p in points_1d(range(n))}

    def test_partition_enforced_point_in_two_clusters(self):
        with pytest.raises(ValueError, match="appears in clusters"):
            ClusterModel(
                params=Params(eps=1.0, min_pts=1),
                points=self._points(3),
                clusters={
                    1: Cluster(1, frozenset({0, 1}), frozenset()),
                    2: Cluster(2, frozenset({1, 2}), frozenset()),
                },
                outliers=frozenset(),
                next_cluster_id=3,
            )

    def test_partition_enforced_member_and_outlier(self):
        with pytest.raises(ValueError, match="both outlier and member"):
            ClusterModel(
                params=Params(eps=1.0, min_pts=1),
                points=self._points(2),
                clusters={1: Cluster(1, frozenset({0, 1}), frozenset())},
                outliers=frozenset({1}),
                next_cluster_id=2,
            )

    def test_partition_enforced_homeless_point(self):
        with pytest.raises(ValueError, match="no cluster and no outlier"):
            ClusterModel(
                params=Params(eps=1.0, min_pts=1),
                points=self._points(2),
                clusters={1: Cluster(1, frozenset({0}), frozenset())},
                outliers=frozenset(),
                next_cluster_id=2,
            )

    def test_next_cluster_id_must_exceed_existing(self):
        with pytest.raises(ValueError, match="next_cluster_id"):
            ClusterModel(
                params=Params(eps=1.0, min_pts=1),
                points=self._points(1),
                clusters={1: Cluster(1, frozenset({0}), frozenset())},
                outliers=frozenset(),
                next_cluster_id=1,
            )

    def test_unregistered_member_rejected(self):
        with pytest.raises(ValueError, match="unregistered"):
            ClusterModel(
                params=Params(eps=1.0, min_pts=1),
                points=self._points(1),
                clusters={1: Cluster(1, frozenset({0, 7}), frozenset())},
                outliers=frozenset(),
                next_cluster_id=2,
            )

    def test_labels_and_empty_model(self):
        model = ClusterModel.empty(Params(eps=1.0, min_pts=2))
        assert model.labels() == {}
        assert model.dimension is None
        populated = ClusterModel(
            params=Params(eps=1.0, min_pts=1),
            points=self._points(3),
            clusters={1: Cluster(1, frozenset({0, 1}), frozenset({0}))},
            outliers=frozenset({2}),
            next_cluster_id=2,
        )
        assert populated.labels() == {0: 1, 1: 1, 2: -1}
        assert populated.cluster_of(0) == 1
        assert populated.cluster_of(2) is None

    def test_value_equality(self):
        a = ClusterModel(
            params=Params(eps=1.0, min_pts=1),
            points=self._points(2),
            clusters={1: Cluster(1, frozenset({0, 1}), frozenset({1}))},
            outliers=frozenset(),
            next_cluster_id=2,
        )
        b = ClusterModel(
            params=Params(eps=1.0, min_pts=1),
            points=self._points(2),
            clusters={1: Cluster(1, frozenset({1, 0}), frozenset({1}))},
            outliers=frozenset(),
            next_cluster_id=2,
        )
        assert a == b

    def test_mixed_dimension_registry_rejected(self):
        with pytest.raises(ValueError, match="dimensions"):
            ClusterModel(
                params=Params(eps=1.0, min_pts=1),
                points={1: pt(1, 0.0), 2: pt(2, 0.0, 1.0)},
                clusters={},
                outliers=frozenset({1, 2}),
                next_cluster_id=1,
            )

    def test_nan_coordinate_unrepresentable(self):
        # The registry can never hold a non-finite coordinate because Point
        # construction already rejects it.
        with pytest.raises(ValueError, match="non-finite"):
            pt(1, math.inf)
