"""Scikit-learn style estimator wrapping the batch and incremental engines.

The estimator keeps the id-keyed cluster model internal and speaks arrays:
`fit(X)` clusters from scratch, `insert(X)` / `partial_fit(X)` feed rows into
the incremental path, and `labels_` always covers every row seen so far, in
the order it arrived. Unlike most clusterers the cluster labels are stable
across inserts: ids are issued once and never renumbered.
"""

from __future__ import annotations

from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_array

from .batch import dbscan
from .incremental import batch_insert
from .model import ClusterModel, Params, Point, validate_dataset


class IncrementalDBSCAN(ClusterMixin, BaseEstimator):
    """Density-based clustering that can absorb new rows without refitting.

    Parameters
    ----------
    eps : float, default=0.5
        Neighborhood radius; two points are neighbors when their distance is
        at most eps.
    min_pts : int, default=5
        Minimum neighborhood size (the point itself included) for a core
        point, and the pool size that triggers a new cluster from outliers.
    metric : {"manhattan", "euclidean"}, default="manhattan"
    outlier_rule : {"count_only", "density"}, default="count_only"
        How pooled outliers graduate to a cluster during inserts: the whole
        pool at once when it reaches min_pts, or only dense subgroups of it.

    Attributes
    ----------
    model_ : ClusterModel
        The underlying cluster model (points, clusters, outlier pool).
    labels_ : ndarray of shape (n_points_,)
        Cluster id per row in arrival order; -1 marks pooled outliers.
    insert_outcomes_ : list
        Outcomes of the most recent `insert`/`partial_fit` call.
    """

    def __init__(
        self,
        eps: float = 0.5,
        min_pts: int = 5,
        metric: str = "manhattan",
        outlier_rule: str = "count_only",
    ):
        self.eps = eps
        self.min_pts = min_pts
        self.metric = metric
        self.outlier_rule = outlier_rule

    def _params(self) -> Params:
        return Params(
            eps=self.eps,
            min_pts=self.min_pts,
            metric=self.metric,
            outlier_rule=self.outlier_rule,
        )

    def _as_points(self, X, first_id: int) -> list[Point]:
        X = check_array(X, dtype=np.float64)
        if hasattr(self, "n_features_in_") and X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, but this estimator saw {self.n_features_in_}"
            )
        self.n_features_in_ = X.shape[1]
        return [
            Point(id=first_id + i, coords=tuple(float(v) for v in row))
            for i, row in enumerate(X)
        ]

    def _refresh_labels(self) -> None:
        by_id = self.model_.labels()
        self.labels_ = np.array([by_id[i] for i in range(self.n_points_)], dtype=np.int64)

    def fit(self, X, y=None) -> "IncrementalDBSCAN":
        """Cluster X from scratch, discarding any previous state."""
        if hasattr(self, "n_features_in_"):
            del self.n_features_in_
        points = self._as_points(X, first_id=0)
        self.model_ = dbscan(validate_dataset(points), self._params())
        self.n_points_ = len(points)
        self.insert_outcomes_ = []
        self._refresh_labels()
        return self

    def insert(self, X) -> "IncrementalDBSCAN":
        """Feed rows into the incremental path; bootstraps an empty model if unfitted."""
        if not hasattr(self, "model_"):
            self.model_ = ClusterModel.empty(self._params())
            self.n_points_ = 0
        points = self._as_points(X, first_id=self.n_points_)
        self.model_, outcomes = batch_insert(self.model_, points)
        self.n_points_ += len(points)
        self.insert_outcomes_ = outcomes
        self._refresh_labels()
        return self

    def partial_fit(self, X, y=None) -> "IncrementalDBSCAN":
        return self.insert(X)
