"""Divisive hierarchical K-means and ensemble member generation."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.spatial.distance import pdist

from . import invariants
from .core import Dataset, Partition, partition_objective, sse
from .errors import UnsplittableError
from .kmeans import DEFAULT_MAX_ITERS, DEFAULT_TOL, kmeans

SPLIT_RULES = ("sse", "size")


@dataclass(frozen=True, eq=False)
class EnsembleMember:
    id: int
    k_value: int
    partition: Partition
    objective: float


def furthest_pair(points: np.ndarray):
    """Indices (i, j), i < j, of the two mutually furthest points; first such pair wins."""
    n = len(points)
    if n < 2:
        raise ValueError("need at least two points")
    flat = int(np.argmax(pdist(points, "sqeuclidean")))
    rows, cols = np.triu_indices(n, 1)
    return int(rows[flat]), int(cols[flat])


def thirds_seeds(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Two seeds cutting the segment p-q into three equal parts."""
    step = (q - p) / 3.0
    return np.vstack([p + step, p + 2.0 * step])


def two_means_split(X: np.ndarray, ids: np.ndarray, max_iters: int = DEFAULT_MAX_ITERS,
                    tol: float = DEFAULT_TOL):
    """Split the points ``X[ids]`` in two with 2-means seeded at the furthest-pair thirds.

    Returns the two child index arrays, or None if the points are all identical.
    """
    pts = X[ids]
    if np.all(pts == pts[0]):
        return None
    i, j = furthest_pair(pts)
    result = kmeans(pts, thirds_seeds(pts[i], pts[j]), max_iters, tol)
    a, b = (ids[c.member_ids] for c in result.partition.clusters)
    return np.sort(a), np.sort(b)


def _splittable(X: np.ndarray, ids: np.ndarray) -> bool:
    pts = X[ids]
    return len(ids) >= 2 and not np.all(pts == pts[0])


def divisive_step(partition: Partition, dataset: Dataset, split_rule: str = "sse",
                  max_iters: int = DEFAULT_MAX_ITERS, tol: float = DEFAULT_TOL) -> Partition:
    """Grow the partition by one cluster.

    The loosest splittable cluster (largest SSE, or largest size under
    ``split_rule="size"``) is cut by 2-means from the furthest-pair thirds
    seeds; global K-means then polishes all k+1 centroids.
    """
    if split_rule not in SPLIT_RULES:
        raise ValueError(f"unknown split rule {split_rule!r}")
    X = dataset.X
    candidates = [j for j, c in enumerate(partition.clusters) if _splittable(X, c.member_ids)]
    if not candidates:
        raise UnsplittableError(f"no cluster of the {partition.k}-partition can be split")
    if split_rule == "sse":
        score = [sse(X[partition.clusters[j].member_ids], partition.clusters[j].centroid) for j in candidates]
    else:
        score = [partition.clusters[j].size for j in candidates]
    target = candidates[int(np.argmax(score))]

    a, b = two_means_split(X, partition.clusters[target].member_ids, max_iters, tol)
    centers = [c.centroid for c in partition.clusters]
    centers[target] = X[a].mean(axis=0)
    centers.append(X[b].mean(axis=0))
    before = partition_objective(partition, dataset)
    result = kmeans(dataset, np.vstack(centers), max_iters, tol)
    invariants.not_increasing(before, result.final_objective, "hk.divisive_step")
    return result.partition


def initial_split(dataset: Dataset, anchors: Optional[np.ndarray] = None,
                  max_iters: int = DEFAULT_MAX_ITERS, tol: float = DEFAULT_TOL) -> Partition:
    """First 2-cluster split of the whole dataset.

    ``anchors`` (e.g. projected-clustering centroids) stand in for the data
    when locating the furthest pair; without them the data points are used.
    """
    X = dataset.X
    if not _splittable(X, np.arange(dataset.n)):
        raise UnsplittableError("all points are identical")
    ref = X if anchors is None or len(anchors) < 2 else np.asarray(anchors, dtype=np.float64)
    i, j = furthest_pair(ref)
    if np.array_equal(ref[i], ref[j]):
        i, j = furthest_pair(X)
        ref = X
    return kmeans(dataset, thirds_seeds(ref[i], ref[j]), max_iters, tol).partition


def divisive_chain(dataset: Dataset, k_max: int, anchors: Optional[np.ndarray] = None,
                   split_rule: str = "sse", max_iters: int = DEFAULT_MAX_ITERS,
                   tol: float = DEFAULT_TOL) -> dict:
    """Partitions for k' = 2, 3, ... up to ``k_max`` or until nothing can be split."""
    chain = {}
    try:
        current = initial_split(dataset, anchors, max_iters, tol)
    except UnsplittableError:
        return chain
    chain[2] = current
    for kp in range(3, k_max + 1):
        try:
            current = divisive_step(current, dataset, split_rule, max_iters, tol)
        except UnsplittableError:
            break
        chain[kp] = current
    if invariants.enabled():
        for kp, part in chain.items():
            invariants.check_cover(part, dataset.n, "hk.chain")
            invariants.require(part.k == kp, "hk.chain_count", f"{part.k} != {kp}")
    return chain


def generate_members(base, dataset: Dataset, k: int, L: int, rng: np.random.Generator,
                     split_rule: str = "sse", max_iters: int = DEFAULT_MAX_ITERS,
                     tol: float = DEFAULT_TOL) -> list:
    """Sample L members H(1)..H(L) from the divisive chain over k' in [2, k+10].

    ``base`` is the projected clustering whose centroids seed the first
    split; pass None to seed from the data alone.
    """
    k_max = k + 10
    if L < 1 or L > k_max - 1:
        raise ValueError(f"ensemble size must lie in 1..{k_max - 1}, got {L}")
    anchors = None if base is None else base.partition.centers()
    chain = divisive_chain(dataset, k_max, anchors, split_rule, max_iters, tol)
    if len(chain) < L:
        raise UnsplittableError(f"only {len(chain)} chain partitions achievable, need {L}")
    ks = np.array(sorted(chain))
    picked = rng.choice(ks, size=L, replace=False)
    return [EnsembleMember(i + 1, int(kp), chain[int(kp)], partition_objective(chain[int(kp)], dataset))
            for i, kp in enumerate(picked)]
