"""Command-line entry point: ``hkens <command> [options]``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import invariants
from .errors import DataError, HKError
from .ingest import load_config, load_dataset, write_csv
from .orclus import orclus
from .pipeline import (
    STREAM_ORCLUS,
    RunReport,
    _describe_dataset,
    _describe_partition,
    read_partition,
    run_baseline,
    run_members,
    run_pipeline,
    stage_rngs,
    write_partition,
    write_report,
    write_timings,
)
from .synth import gaussian_blobs


def _data_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--input", required=True, help="delimited data file")
    p.add_argument("--label-col", default=None, help="label column, by index or header name")
    p.add_argument("--no-header", action="store_true", help="first line is data")
    return p


def _run_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", default=None, help="key = value config file")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--threshold", type=int, default=None)
    p.add_argument("--ensemble-size", type=int, default=None)
    p.add_argument("--consensus", choices=["min-sse", "co-association"], default=None)
    p.add_argument("--standardize", action="store_true", default=None, help="z-score features after imputation")
    p.add_argument("--debug", action="store_true", help="enable runtime invariant checks")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hkens", description="H-K ensemble clustering for high-dimensional data")
    sub = parser.add_subparsers(dest="command", required=True)
    data, run = _data_parent(), _run_parent()

    p = sub.add_parser("run", parents=[data, run], help="full five-stage pipeline")
    p.add_argument("--write-members", action="store_true", help="also write each ensemble member's partition")
    sub.add_parser("kmeans-baseline", parents=[data, run], help="plain K-means with random seeds")
    sub.add_parser("orclus-only", parents=[data, run], help="projected clustering stage only")
    sub.add_parser("members", parents=[data, run], help="stages 1-3, writing every ensemble member")

    p = sub.add_parser("metrics", parents=[data], help="score a partition file against labels")
    p.add_argument("--partition", required=True)

    p = sub.add_parser("gen-synth", help="write a labelled Gaussian-blob dataset")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--n", type=int, default=300)
    p.add_argument("--centers", type=int, default=4)
    p.add_argument("--informative", type=int, default=5)
    p.add_argument("--noise", type=int, default=10)
    p.add_argument("--noise-scale", type=float, default=3.0)
    p.add_argument("--cluster-std", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _load(args, standardize=False):
    label = args.label_col
    if label is not None and label.lstrip("-").isdigit():
        label = int(label)
    return load_dataset(args.input, label, not args.no_header, bool(standardize))


def _config(args):
    return load_config(args.config, seed=args.seed, k=args.k, d=args.d, threshold=args.threshold,
                       ensemble_size=args.ensemble_size, consensus=args.consensus,
                       standardize=args.standardize)


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_run(args) -> int:
    config = _config(args)
    dataset = _load(args, config.standardize)
    result = run_pipeline(dataset, config)
    out = _outdir(args)
    write_partition(out / "partition.txt", result.final)
    write_report(out / "report.txt", result.report)
    write_timings(out / "timings.txt", result.report)
    if args.write_members:
        mdir = out / "members"
        mdir.mkdir(exist_ok=True)
        for o in result.outcomes:
            write_partition(mdir / f"member_{o.member.id}.txt", o.member.partition)
            write_partition(mdir / f"member_{o.member.id}_merged.txt", o.final)
    print(f"final k={result.final.k} objective={result.report.get('final.objective')}")
    return 0


def cmd_baseline(args) -> int:
    config = _config(args)
    dataset = _load(args, config.standardize)
    partition, report = run_baseline(dataset, config)
    out = _outdir(args)
    write_partition(out / "partition.txt", partition)
    write_report(out / "report.txt", report)
    write_timings(out / "timings.txt", report)
    print(f"kmeans k={partition.k} objective={report.get('final.objective')}")
    return 0


def cmd_orclus(args) -> int:
    config = _config(args)
    dataset = _load(args, config.standardize)
    config = config.resolve(dataset)
    pc = orclus(dataset, config.k, config.d, config.k0, config.alpha, config.beta,
                stage_rngs(config.seed)[STREAM_ORCLUS], config.max_iters)
    report = RunReport()
    report.add("report.kind", "orclus")
    _describe_dataset(report, dataset)
    for key in ("k", "d", "k0", "alpha", "beta", "seed"):
        report.add(f"config.{key}", getattr(config, key))
    report.add("orclus.history", ";".join(f"{k}x{l}" for k, l in pc.history))
    partition = pc.partition.canonical()
    _describe_partition(report, "final", partition, dataset)
    out = _outdir(args)
    write_partition(out / "partition.txt", partition)
    write_report(out / "report.txt", report)
    np.savetxt(out / "subspaces.txt", np.hstack([b.vectors for b in pc.subspaces]), fmt="%.17g")
    return 0


def cmd_members(args) -> int:
    config = _config(args)
    dataset = _load(args, config.standardize)
    config = config.resolve(dataset)
    report = RunReport()
    report.add("report.kind", "members")
    _describe_dataset(report, dataset)
    _, members = run_members(dataset, config, report)
    out = _outdir(args)
    for m in members:
        write_partition(out / f"member_{m.id}.txt", m.partition)
        _describe_partition(report, f"member.{m.id}", m.partition, dataset)
    write_report(out / "report.txt", report)
    return 0


def cmd_metrics(args) -> int:
    dataset = _load(args)
    partition = read_partition(args.partition, dataset.X)
    if partition.n_points != dataset.n:
        raise DataError(f"partition has {partition.n_points} points, data has {dataset.n}")
    report = RunReport()
    _describe_partition(report, "partition", partition, dataset)
    sys.stdout.write(report.to_text())
    return 0


def cmd_gen_synth(args) -> int:
    X, labels = gaussian_blobs(args.n, args.centers, args.informative, args.noise, args.cluster_std,
                               args.noise_scale, seed=args.seed)
    header = [f"x{i}" for i in range(X.shape[1])]
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    write_csv(args.out, X, header, labels)
    return 0


COMMANDS = {
    "run": cmd_run,
    "kmeans-baseline": cmd_baseline,
    "orclus-only": cmd_orclus,
    "members": cmd_members,
    "metrics": cmd_metrics,
    "gen-synth": cmd_gen_synth,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "debug", False):
        invariants.set_enabled(True)
    try:
        return COMMANDS[args.command](args)
    except HKError as exc:
        print(f"hkens: error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
