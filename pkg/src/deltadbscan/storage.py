"""File formats: point CSVs in, versioned model snapshots out.

Snapshots are canonical JSON — fixed key order, sorted id lists — so equal
models serialize to byte-identical files. Writes go through a temp file and
an atomic rename, so a snapshot on disk is always complete.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from .model import Cluster, ClusterModel, Dataset, Params, Point, validate_dataset

FORMAT_VERSION = 1

_TOP_KEYS = ("format_version", "params", "clusters", "outliers", "points")
_PARAM_KEYS = ("eps", "min_pts", "metric", "outlier_rule")
_CLUSTER_KEYS = ("cluster_id", "members", "cores")


def load_csv(path) -> Dataset:
    """Parse `id,c1,...,cd` rows into a validated dataset.

    Blank lines and `#` comments are skipped; LF and CRLF both accepted.
    Parse errors name the offending line number.
    """
    points = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split(",")
            if len(fields) < 2:
                raise ValueError(f"{path}: line {lineno}: expected 'id,c1,...', got {line!r}")
            try:
                pid = int(fields[0])
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: bad point id {fields[0]!r}") from None
            try:
                coords = tuple(float(f) for f in fields[1:])
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: bad coordinate in {line!r}") from None
            try:
                points.append(Point(id=pid, coords=coords))
            except ValueError as exc:
                raise ValueError(f"{path}: line {lineno}: {exc}") from None
    return validate_dataset(points)


def save_csv(dataset: Dataset, path) -> None:
    """Write a dataset back out in the same CSV shape `load_csv` reads."""
    lines = [",".join([str(p.id), *(repr(c) for c in p.coords)]) for p in dataset]
    _atomic_write(path, "\n".join(lines) + ("\n" if lines else ""))


def _snapshot_dict(model: ClusterModel) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "params": {
            "eps": model.params.eps,
            "min_pts": model.params.min_pts,
            "metric": model.params.metric,
            "outlier_rule": model.params.outlier_rule,
        },
        "clusters": [
            {
                "cluster_id": cid,
                "members": sorted(model.clusters[cid].members),
                "cores": sorted(model.clusters[cid].cores),
            }
            for cid in sorted(model.clusters)
        ],
        "outliers": sorted(model.outliers),
        "points": [[pid, list(model.points[pid].coords)] for pid in sorted(model.points)],
    }


def save_model(model: ClusterModel, path) -> None:
    """Serialize a model snapshot; equal models produce byte-identical files."""
    _atomic_write(path, json.dumps(_snapshot_dict(model), indent=2) + "\n")


def load_model(path) -> ClusterModel:
    """Read a snapshot back, rejecting anything structurally off.

    Unknown or missing fields, unsupported versions, and partition violations
    all fail with a reason; `next_cluster_id` is re-derived as one past the
    highest cluster id, which is what the engine always maintains.
    """
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not valid snapshot JSON: {exc}") from None
    try:
        return _model_from_dict(raw)
    except (ValueError, TypeError) as exc:
        raise ValueError(f"{path}: {exc}") from None


def _require_keys(obj: dict, keys: tuple[str, ...], what: str) -> None:
    if not isinstance(obj, dict):
        raise ValueError(f"{what} must be an object, got {type(obj).__name__}")
    missing = [k for k in keys if k not in obj]
    if missing:
        raise ValueError(f"{what} is missing fields {missing}")
    unknown = [k for k in obj if k not in keys]
    if unknown:
        raise ValueError(f"{what} has unknown fields {unknown}")


def _model_from_dict(raw: dict) -> ClusterModel:
    _require_keys(raw, _TOP_KEYS, "snapshot")
    if raw["format_version"] != FORMAT_VERSION:
        raise ValueError(
            f"unsupported format_version {raw['format_version']!r}, expected {FORMAT_VERSION}"
        )
    _require_keys(raw["params"], _PARAM_KEYS, "params")
    params = Params(
        eps=raw["params"]["eps"],
        min_pts=raw["params"]["min_pts"],
        metric=raw["params"]["metric"],
        outlier_rule=raw["params"]["outlier_rule"],
    )
    if not isinstance(raw["points"], list):
        raise ValueError("points must be a list of [id, coords] pairs")
    points: dict[int, Point] = {}
    for entry in raw["points"]:
        if not isinstance(entry, list) or len(entry) != 2:
            raise ValueError(f"bad points entry {entry!r}, expected [id, coords]")
        pid, coords = entry
        if not isinstance(pid, int) or not isinstance(coords, list):
            raise ValueError(f"bad points entry {entry!r}, expected [id, coords]")
        if pid in points:
            raise ValueError(f"duplicate point id {pid} in points table")
        points[pid] = Point(id=pid, coords=tuple(coords))
    if not isinstance(raw["clusters"], list):
        raise ValueError("clusters must be a list")
    clusters: dict[int, Cluster] = {}
    for entry in raw["clusters"]:
        _require_keys(entry, _CLUSTER_KEYS, "cluster entry")
        cid = entry["cluster_id"]
        cluster = Cluster(
            cluster_id=cid,
            members=frozenset(entry["members"]),
            cores=frozenset(entry["cores"]),
        )
        if cid in clusters:
            raise ValueError(f"duplicate cluster id {cid}")
        clusters[cid] = cluster
    if not isinstance(raw["outliers"], list):
        raise ValueError("outliers must be a list of point ids")
    return ClusterModel(
        params=params,
        points=points,
        clusters=clusters,
        outliers=frozenset(raw["outliers"]),
        next_cluster_id=max(clusters, default=0) + 1,
    )


def _atomic_write(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
