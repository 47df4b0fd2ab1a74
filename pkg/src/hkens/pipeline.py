"""Five-stage orchestration and on-disk formats (partition files, reports)."""
from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import invariants
from .core import Cluster, Dataset, Partition, partition_objective
from .errors import DataError
from .evaluate import purity, rand_index
from .hk import generate_members
from .ingest import PipelineConfig
from .kmeans import kmeans, seed_random
from .orclus import orclus
from .split_merge import consensus_select, merge_state, split_pass

# fixed stream offsets for stage-local generators
STREAM_ORCLUS, STREAM_MEMBERS, STREAM_BASELINE = 0, 1, 2


def stage_rngs(seed: int) -> list:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(3)]


def worker_count() -> int:
    try:
        return max(0, int(os.environ.get("HKENS_THREADS", "0")))
    except ValueError:
        return 0


def _map(fn, items):
    workers = worker_count()
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if value is None:
        return "none"
    return str(value)


@dataclass
class RunReport:
    """Ordered key/value report. Timings live in ``timings`` and are written separately."""

    entries: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    def add(self, key: str, value) -> None:
        self.entries.append((key, fmt(value)))

    def get(self, key: str) -> str:
        for k, v in self.entries:
            if k == key:
                return v
        raise KeyError(key)

    def to_text(self) -> str:
        return "".join(f"{k}={v}\n" for k, v in self.entries)

    @staticmethod
    def parse(text: str) -> dict:
        out = {}
        for line in text.splitlines():
            if line and not line.startswith("#"):
                k, v = line.split("=", 1)
                out[k] = v
        return out


@dataclass
class MemberOutcome:
    member: object
    tree: object
    state: object
    final: Partition


@dataclass
class RunResult:
    config: PipelineConfig
    dataset: Dataset
    projected: object
    members: list
    outcomes: list
    final: Partition
    report: RunReport


def _describe_dataset(report: RunReport, dataset: Dataset) -> None:
    report.add("dataset.name", dataset.name)
    report.add("dataset.N", dataset.n)
    report.add("dataset.D", dataset.dim)
    report.add("dataset.labelled", dataset.labels is not None)


def _describe_partition(report: RunReport, prefix: str, partition: Partition, dataset: Dataset) -> None:
    report.add(f"{prefix}.k", partition.k)
    report.add(f"{prefix}.objective", partition_objective(partition, dataset))
    if dataset.labels is not None:
        report.add(f"{prefix}.purity", purity(partition, dataset.labels))
        report.add(f"{prefix}.rand_index", rand_index(partition, dataset.labels))


def run_members(dataset: Dataset, config: PipelineConfig, report: RunReport = None):
    """Stages 2 and 3: projected clustering, then the sampled divisive chain."""
    report = RunReport() if report is None else report
    rngs = stage_rngs(config.seed)
    t0 = time.perf_counter()
    projected = orclus(dataset, config.k, config.d, config.k0, config.alpha, config.beta,
                       rngs[STREAM_ORCLUS], config.max_iters)
    t1 = time.perf_counter()
    members = generate_members(projected, dataset, config.k, config.ensemble_size, rngs[STREAM_MEMBERS],
                               config.split_rule, config.max_iters, config.tol)
    t2 = time.perf_counter()
    report.timings["orclus"] = t1 - t0
    report.timings["hk"] = t2 - t1
    return projected, members


def run_pipeline(dataset: Dataset, config: PipelineConfig) -> RunResult:
    """All five stages on an already-preprocessed dataset."""
    config = config.resolve(dataset)
    report = RunReport()
    report.add("report.kind", "hk-ensemble")
    _describe_dataset(report, dataset)
    for key, value in config.as_dict().items():
        report.add(f"config.{key}", value)

    projected, members = run_members(dataset, config, report)
    report.add("orclus.k", projected.partition.k)
    report.add("orclus.dim", projected.current_dim)
    report.add("orclus.history", ";".join(f"{k}x{l}" for k, l in projected.history))
    report.add("orclus.objective", partition_objective(projected.partition, dataset))

    def refine(member):
        tree = split_pass(member, dataset, config.threshold, config.max_iters, config.tol)
        state = merge_state(tree, dataset, config.merge_spread)
        return MemberOutcome(member, tree, state, state.partition(dataset.n))

    t0 = time.perf_counter()
    outcomes = _map(refine, members)
    t1 = time.perf_counter()
    final = consensus_select([o.final for o in outcomes], dataset, config.consensus).canonical()
    t2 = time.perf_counter()
    report.timings["split_merge"] = t1 - t0
    report.timings["consensus"] = t2 - t1

    report.add("members.count", len(members))
    for o in outcomes:
        m = o.member
        p = f"member.{m.id}"
        leaves = o.tree.leaf_partition(dataset.X)
        report.add(f"{p}.k_value", m.k_value)
        report.add(f"{p}.objective_member", m.objective)
        report.add(f"{p}.objective_split", partition_objective(leaves, dataset))
        report.add(f"{p}.objective_merged", partition_objective(o.final, dataset))
        report.add(f"{p}.cluster_trace", f"{m.partition.k}>{leaves.k}>{o.final.k}")
        report.add(f"{p}.merges_accepted", len(o.state.merged_log))
        report.add(f"{p}.merges_rejected", o.state.rejected)
        report.add(f"{p}.oversize_leaves", len(o.tree.oversize))
    if config.consensus == "min-sse":
        objectives = [partition_objective(o.final, dataset) for o in outcomes]
        report.add("final.source", f"member.{outcomes[int(np.argmin(objectives))].member.id}")
    else:
        report.add("final.source", "co-association")
    _describe_partition(report, "final", final, dataset)
    if invariants.enabled():
        invariants.check_cover(final, dataset.n, "pipeline.final")
    return RunResult(config, dataset, projected, members, outcomes, final, report)


def run_baseline(dataset: Dataset, config: PipelineConfig):
    """Plain K-means from k random data points, using the baseline RNG stream."""
    config = config.resolve(dataset)
    rng = stage_rngs(config.seed)[STREAM_BASELINE]
    t0 = time.perf_counter()
    result = kmeans(dataset, seed_random(dataset, config.k, rng), config.max_iters, config.tol)
    report = RunReport()
    report.add("report.kind", "kmeans-baseline")
    _describe_dataset(report, dataset)
    report.add("config.k", config.k)
    report.add("config.seed", config.seed)
    report.add("kmeans.iterations", result.iterations)
    report.add("kmeans.converged", result.converged)
    partition = result.partition.canonical()
    _describe_partition(report, "final", partition, dataset)
    report.timings["kmeans"] = time.perf_counter() - t0
    return partition, report


def write_partition(path, partition: Partition) -> None:
    labels = partition.canonical().labels()
    lines = [f"# k={partition.k} N={partition.n_points}\n"]
    lines.extend(f"{i},{c}\n" for i, c in enumerate(labels))
    Path(path).write_text("".join(lines))


def read_partition(path, X=None) -> Partition:
    """Reload a partition file; centroids come from ``X`` when given, else zeros."""
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].startswith("#"):
        raise DataError(f"{path}: missing header line")
    head = dict(tok.split("=") for tok in lines[0][1:].split())
    k, n = int(head["k"]), int(head["N"])
    labels = np.full(n, -1, dtype=np.int64)
    for line in lines[1:]:
        i, c = (int(t) for t in line.split(","))
        if not 0 <= i < n or labels[i] != -1:
            raise DataError(f"{path}: bad or repeated point index {i}")
        labels[i] = c
    if np.any(labels < 0):
        raise DataError(f"{path}: not every point is assigned")
    if len(np.unique(labels)) != k:
        raise DataError(f"{path}: header says k={k}, found {len(np.unique(labels))} clusters")
    if X is not None:
        return Partition.from_labels(labels, np.asarray(X))
    return Partition(tuple(Cluster(np.flatnonzero(labels == c), np.zeros(1)) for c in np.unique(labels)), n)


def write_report(path, report: RunReport) -> None:
    Path(path).write_text(report.to_text())


def write_timings(path, report: RunReport) -> None:
    Path(path).write_text("".join(f"{k}={v:.6f}\n" for k, v in report.timings.items()))
