"""Command-line surface: cluster, insert, bench, delta subcommands."""

from __future__ import annotations

import argparse
import dataclasses
import sys
from typing import Optional, Sequence

from .batch import dbscan
from .bench import AdditionStream, sweep, write_report
from .incremental import (
    Assigned,
    BatchInsertError,
    InsertOutcome,
    NewClusterFormed,
    batch_insert,
)
from .model import METRICS, OUTLIER_RULES, Params
from .policy import DeltaStats, RerunPolicy, should_rerun
from .storage import load_csv, load_model, save_model


def format_outcome(point_id: int, outcome: InsertOutcome) -> str:
    if isinstance(outcome, Assigned):
        return (
            f"{point_id} assigned Cluster{outcome.cluster_id} "
            f"core={outcome.nearest_core_id} distance={outcome.distance!r}"
        )
    if isinstance(outcome, NewClusterFormed):
        members = ",".join(str(m) for m in sorted(outcome.member_ids))
        return f"{point_id} new_cluster_formed Cluster{outcome.cluster_id} members={members}"
    return f"{point_id} pooled_outlier"


def _cmd_cluster(args) -> int:
    dataset = load_csv(args.input)
    if len(dataset) == 0:
        raise ValueError(f"{args.input}: input contains no points")
    params = Params(eps=args.eps, min_pts=args.minpts, metric=args.metric)
    model = dbscan(dataset, params)
    save_model(model, args.out)
    print(f"clusters={len(model.clusters)} outliers={len(model.outliers)}")
    return 0


def _cmd_insert(args) -> int:
    model = load_model(args.model)
    if args.outlier_rule is not None and args.outlier_rule != model.params.outlier_rule:
        params = dataclasses.replace(model.params, outlier_rule=args.outlier_rule)
        model = dataclasses.replace(model, params=params)
    dataset = load_csv(args.input)
    try:
        updated, outcomes = batch_insert(model, dataset.points)
    except BatchInsertError as exc:
        for p, outcome in zip(dataset.points, exc.outcomes):
            print(format_outcome(p.id, outcome))
        raise
    for p, outcome in zip(dataset.points, outcomes):
        print(format_outcome(p.id, outcome))
    save_model(updated, args.out)
    return 0


def _cmd_bench(args) -> int:
    base = load_csv(args.base)
    try:
        deltas = [float(v) / 100.0 for v in args.deltas.split(",") if v.strip()]
    except ValueError:
        raise ValueError(f"bad --deltas value {args.deltas!r}, expected e.g. 1,2,5") from None
    # The benchmark compares partitions, so it runs the principled pool rule.
    params = Params(eps=args.eps, min_pts=args.minpts, outlier_rule="density")
    report = sweep(
        base,
        AdditionStream(seed=args.seed),
        params,
        deltas,
        repeats=args.repeats,
    )
    write_report(report, args.report)
    crossover = (
        "none" if report.crossover_percent is None else repr(report.crossover_percent)
    )
    recommended = (
        "none" if report.recommended_percent is None else repr(report.recommended_percent)
    )
    print(f"crossover_percent={crossover}")
    print(f"recommended_percent={recommended}")
    return 0


def _cmd_delta(args) -> int:
    stats = DeltaStats.from_counts(args.old, args.added)
    print(f"delta_percent={stats.delta_percent!r}")
    if args.threshold is not None:
        decision = should_rerun(stats, RerunPolicy(threshold_x=args.threshold))
        print(f"decision={decision.value}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deltadbscan",
        description="Density-based clustering with incremental updates and a rerun benchmark.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="run batch clustering on a point CSV")
    p.add_argument("--input", required=True, help="point CSV: id,c1,...,cd")
    p.add_argument("--eps", required=True, type=float, help="neighborhood radius")
    p.add_argument("--minpts", required=True, type=int, help="min neighborhood size for a core")
    p.add_argument("--metric", choices=METRICS, default="manhattan")
    p.add_argument("--out", required=True, help="model snapshot to write")
    p.set_defaults(func=_cmd_cluster)

    p = sub.add_parser("insert", help="insert new points into a stored model")
    p.add_argument("--model", required=True, help="model snapshot to update")
    p.add_argument("--input", required=True, help="point CSV of new points")
    p.add_argument("--outlier-rule", choices=OUTLIER_RULES, default=None,
                   help="override the stored pool-formation rule")
    p.add_argument("--out", required=True, help="updated snapshot to write")
    p.set_defaults(func=_cmd_insert)

    p = sub.add_parser("bench", help="compare full reruns against incremental updates")
    p.add_argument("--base", required=True, help="base point CSV")
    p.add_argument("--deltas", required=True, help="growth percents, e.g. 1,2,5,10,20,50")
    p.add_argument("--eps", required=True, type=float)
    p.add_argument("--minpts", required=True, type=int)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", required=True, help="report CSV to write")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("delta", help="compute growth percent and the rerun decision")
    p.add_argument("--old", required=True, type=int, help="original database size")
    p.add_argument("--added", required=True, type=int, help="number of inserted points")
    p.add_argument("--threshold", type=float, default=None, help="threshold percent x")
    p.set_defaults(func=_cmd_delta)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
