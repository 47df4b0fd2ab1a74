"""Domain types and the geometric primitives shared by every stage.

Points are 1-D float64 arrays; a dataset stores its points as an ``(N, D)``
array. Objects here are treated as immutable once built.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DataError

ATOL = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Dataset:
    X: np.ndarray
    labels: Optional[np.ndarray] = None
    name: str = "dataset"

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.float64)
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise DataError(f"dataset must be a non-empty 2-D array, got shape {X.shape}")
        if not np.all(np.isfinite(X)):
            raise DataError("dataset contains non-finite values")
        object.__setattr__(self, "X", _frozen(X))
        if self.labels is not None:
            labels = np.asarray(self.labels)
            if labels.shape != (X.shape[0],):
                raise DataError(f"expected {X.shape[0]} labels, got {labels.shape[0]}")
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def dim(self) -> int:
        return self.X.shape[1]

    def subset(self, ids) -> "Dataset":
        ids = np.asarray(ids, dtype=np.int64)
        labels = None if self.labels is None else self.labels[ids]
        return Dataset(self.X[ids], labels, self.name)


@dataclass(frozen=True, eq=False)
class Cluster:
    member_ids: np.ndarray
    centroid: np.ndarray

    def __post_init__(self):
        ids = np.unique(np.asarray(self.member_ids, dtype=np.int64))
        if ids.size == 0:
            raise ValueError("cluster must have at least one member")
        ids.setflags(write=False)
        object.__setattr__(self, "member_ids", ids)
        object.__setattr__(self, "centroid", _frozen(self.centroid))

    @classmethod
    def from_members(cls, ids, X: np.ndarray) -> "Cluster":
        ids = np.unique(np.asarray(ids, dtype=np.int64))
        return cls(ids, centroid(X[ids]))

    @property
    def size(self) -> int:
        return int(self.member_ids.size)


@dataclass(frozen=True, eq=False)
class Partition:
    clusters: tuple
    n_points: int

    def __post_init__(self):
        clusters = tuple(self.clusters)
        if not clusters:
            raise ValueError("partition needs at least one cluster")
        object.__setattr__(self, "clusters", clusters)
        labels = np.full(self.n_points, -1, dtype=np.int64)
        for j, c in enumerate(clusters):
            ids = c.member_ids
            if ids.min() < 0 or ids.max() >= self.n_points:
                raise ValueError(f"cluster {j} has a member index outside 0..{self.n_points - 1}")
            if np.any(labels[ids] != -1):
                raise ValueError("clusters overlap")
            labels[ids] = j
        if np.any(labels == -1):
            raise ValueError("clusters do not cover every point")
        labels.setflags(write=False)
        object.__setattr__(self, "_labels", labels)

    @classmethod
    def from_labels(cls, labels, X: np.ndarray, centers: Optional[np.ndarray] = None) -> "Partition":
        """Build a partition from a label vector; empty label values are dropped."""
        labels = np.asarray(labels, dtype=np.int64)
        clusters = []
        for j in np.unique(labels):
            ids = np.flatnonzero(labels == j)
            c = centroid(X[ids]) if centers is None else centers[j]
            clusters.append(Cluster(ids, c))
        return cls(tuple(clusters), len(labels))

    @property
    def k(self) -> int:
        return len(self.clusters)

    def labels(self) -> np.ndarray:
        return self._labels

    def sizes(self) -> list:
        return [c.size for c in self.clusters]

    def centers(self) -> np.ndarray:
        return np.vstack([c.centroid for c in self.clusters])

    def canonical(self) -> "Partition":
        """Same clusters, ordered by smallest member index."""
        order = sorted(range(self.k), key=lambda j: int(self.clusters[j].member_ids[0]))
        return Partition(tuple(self.clusters[j] for j in order), self.n_points)

    def refit(self, X: np.ndarray) -> "Partition":
        """Recompute every centroid as the mean of its members."""
        return Partition(tuple(Cluster.from_members(c.member_ids, X) for c in self.clusters), self.n_points)


def _check_same_dim(a: np.ndarray, b: np.ndarray):
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")


def euclidean_distance(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_same_dim(a, b)
    return float(np.sqrt(np.sum((a - b) ** 2)))


def centroid(points) -> np.ndarray:
    """Coordinate-wise mean of a non-empty set of points."""
    P = np.asarray(points, dtype=np.float64)
    if P.ndim != 2 or P.shape[0] == 0:
        raise ValueError("centroid of an empty point set")
    return P.mean(axis=0)


def squared_distances(X: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """(N, k) squared Euclidean distances, computed by direct differencing so ties are exact."""
    diff = X[:, None, :] - centers[None, :, :]
    return np.einsum("nkd,nkd->nk", diff, diff)


def sse(points: np.ndarray, center: np.ndarray) -> float:
    diff = np.asarray(points) - np.asarray(center)
    return float(np.sum(diff * diff))


def cluster_sse(cluster: Cluster, dataset: Dataset, center=None) -> float:
    """Sum of squared distances from the members to ``center`` (default: stored centroid)."""
    center = cluster.centroid if center is None else np.asarray(center, dtype=np.float64)
    if center.shape != (dataset.dim,):
        raise ValueError(f"center has shape {center.shape}, dataset dim is {dataset.dim}")
    ids = cluster.member_ids
    if ids.max() >= dataset.n:
        raise IndexError(f"member index {ids.max()} out of range for N={dataset.n}")
    return sse(dataset.X[ids], center)


def partition_objective(partition: Partition, dataset: Dataset) -> float:
    """Within-cluster sum of squares at each cluster's stored centroid."""
    if partition.n_points != dataset.n:
        raise ValueError(f"partition covers {partition.n_points} points, dataset has {dataset.n}")
    return float(sum(cluster_sse(c, dataset) for c in partition.clusters))


def mse(cluster: Cluster, dataset: Dataset) -> float:
    """Per-point mean squared distance to the members' mean."""
    pts = dataset.X[cluster.member_ids]
    return sse(pts, pts.mean(axis=0)) / len(pts)


def labels_objective(X: np.ndarray, labels: np.ndarray, centers: np.ndarray) -> float:
    diff = X - centers[labels]
    return float(np.sum(diff * diff))
