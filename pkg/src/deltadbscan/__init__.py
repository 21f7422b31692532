"""Density-based clustering with incremental inserts and a rerun-policy benchmark.

The package offers three surfaces over the same engine:

* `IncrementalDBSCAN` — scikit-learn style estimator (fit / insert / labels_).
* Functional core — `dbscan`, `insert`, `batch_insert`, `rand_index`, ... for
  callers that want the id-keyed `ClusterModel` values directly.
* CLI (`deltadbscan`) — CSV in, model snapshots and benchmark reports out.
"""

from .batch import PointLabel, dbscan, label_points, oracle_dbscan, region_query
from .bench import (
    AdditionStream,
    BenchReport,
    TrialResult,
    format_report,
    generate_additions,
    model_partition,
    partition_agreement,
    rand_index,
    run_trial,
    sweep,
    write_report,
)
from .estimator import IncrementalDBSCAN
from .incremental import (
    Assigned,
    BatchInsertError,
    InsertOutcome,
    NearestCore,
    NewClusterFormed,
    PooledOutlier,
    batch_insert,
    form_cluster_from_pool,
    insert,
    nearest_core,
)
from .model import (
    Cluster,
    ClusterModel,
    Dataset,
    Params,
    Point,
    distance,
    validate_dataset,
)
from .policy import Decision, DeltaStats, RerunPolicy, delta_percent, should_rerun
from .storage import load_csv, load_model, save_csv, save_model

__version__ = "0.1.0"

__all__ = [
    "AdditionStream",
    "Assigned",
    "BatchInsertError",
    "BenchReport",
    "Cluster",
    "ClusterModel",
    "Dataset",
    "Decision",
    "DeltaStats",
    "IncrementalDBSCAN",
    "InsertOutcome",
    "NearestCore",
    "NewClusterFormed",
    "Params",
    "Point",
    "PointLabel",
    "PooledOutlier",
    "RerunPolicy",
    "TrialResult",
    "batch_insert",
    "dbscan",
    "delta_percent",
    "distance",
    "form_cluster_from_pool",
    "format_report",
    "generate_additions",
    "insert",
    "label_points",
    "load_csv",
    "load_model",
    "model_partition",
    "nearest_core",
    "oracle_dbscan",
    "partition_agreement",
    "rand_index",
    "region_query",
    "run_trial",
    "save_csv",
    "save_model",
    "should_rerun",
    "sweep",
    "validate_dataset",
    "write_report",
]
