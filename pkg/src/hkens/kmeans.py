"""Lloyd K-means, the inner primitive of every other stage."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import invariants
from .core import Dataset, Partition, labels_objective, squared_distances

DEFAULT_MAX_ITERS = 100
DEFAULT_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class KMeansResult:
    partition: Partition
    iterations: int
    final_objective: float
    converged: bool
    trace: list = field(default_factory=list)


def assign_nearest(X: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Nearest-center labels; ties go to the lowest center index."""
    return np.argmin(squared_distances(X, centers), axis=1)


def update_centers(X: np.ndarray, labels: np.ndarray, k: int):
    """Means of each label group, reseeding empty groups.

    An empty group takes the member of the currently largest group that lies
    farthest from that group's mean. Mutates and returns ``labels``.
    """
    counts = np.bincount(labels, minlength=k)
    while np.any(counts == 0):
        empty = int(np.flatnonzero(counts == 0)[0])
        donor = int(np.argmax(counts))
        ids = np.flatnonzero(labels == donor)
        d2 = np.sum((X[ids] - X[ids].mean(axis=0)) ** 2, axis=1)
        labels[ids[int(np.argmax(d2))]] = empty
        counts = np.bincount(labels, minlength=k)
    centers = np.zeros((k, X.shape[1]))
    np.add.at(centers, labels, X)
    centers /= counts[:, None]
    return labels, centers


def kmeans(dataset: Dataset | np.ndarray, initial_centers, max_iters: int = DEFAULT_MAX_ITERS,
           tol: float = DEFAULT_TOL) -> KMeansResult:
    """Lloyd iterations from the given centers.

    Stops when an assignment pass changes no label, when the relative
    objective improvement between successive center updates drops below
    ``tol``, or after ``max_iters`` updates. The returned centroids are
    always the means of the returned clusters.
    """
    X = dataset.X if isinstance(dataset, Dataset) else np.asarray(dataset, dtype=np.float64)
    centers = np.array(initial_centers, dtype=np.float64, ndmin=2)
    if centers.shape[0] == 0 or centers.size == 0:
        raise ValueError("kmeans needs at least one initial center")
    if centers.shape[1] != X.shape[1]:
        raise ValueError(f"centers have dim {centers.shape[1]}, data has {X.shape[1]}")
    k = centers.shape[0]
    if k > X.shape[0]:
        raise ValueError(f"cannot form {k} clusters from {X.shape[0]} points")

    labels = assign_nearest(X, centers)
    trace = [labels_objective(X, labels, centers)]
    prev = np.inf
    converged = False
    it = 0
    for it in range(1, max_iters + 1):
        labels, centers = update_centers(X, labels, k)
        J = labels_objective(X, labels, centers)
        invariants.not_increasing(trace[-1], J, "kmeans.update")
        trace.append(J)
        if np.isfinite(prev) and prev - J <= tol * prev:
            converged = True
            break
        new_labels = assign_nearest(X, centers)
        if np.array_equal(new_labels, labels):
            converged = True
            break
        labels = new_labels
        J_assign = labels_objective(X, labels, centers)
        invariants.not_increasing(J, J_assign, "kmeans.assign")
        trace.append(J_assign)
        prev = J

    partition = Partition.from_labels(labels, X, centers)
    final = labels_objective(X, labels, centers)
    if invariants.enabled():
        invariants.check_cover(partition, X.shape[0], "kmeans.partition")
        invariants.require(partition.k == k, "kmeans.count", f"{partition.k} clusters, expected {k}")
    return KMeansResult(partition, it, final, converged, trace)


def seed_indices(n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    if k > n:
        raise ValueError(f"cannot draw {k} seeds from {n} points")
    if k < 1:
        raise ValueError("k must be positive")
    return rng.choice(n, size=k, replace=False)


def seed_random(dataset: Dataset, k: int, rng: np.random.Generator) -> np.ndarray:
    """k data points drawn without replacement, as a (k, D) array."""
    return dataset.X[seed_indices(dataset.n, k, rng)].copy()
