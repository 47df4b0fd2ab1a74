"""Projected clustering in arbitrarily oriented subspaces (ORCLUS).

Each round assigns points to the nearest seed measured inside that seed's
subspace, recomputes every cluster's least-spread subspace, then merges
clusters down to the next cluster count. The cluster count decays by
``alpha`` and the subspace dimension by ``beta`` until both reach their
targets; a final refinement loop then iterates assignment at the target
dimension until labels stop changing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import invariants
from .core import Cluster, Dataset, Partition
from .kmeans import seed_random, update_centers
from .linalg import Basis, covariance, eig_sym, least_spread_basis, projected_sq_distances


@dataclass(frozen=True, eq=False)
class ProjectedClustering:
    partition: Partition
    subspaces: tuple
    current_k: int
    current_dim: int
    history: list = field(default_factory=list)

    def __post_init__(self):
        object.__setattr__(self, "subspaces", tuple(self.subspaces))
        if len(self.subspaces) != self.partition.k:
            raise ValueError("need exactly one basis per cluster")


def default_k0(k: int, n: int) -> int:
    return max(k, min(5 * k, n // 2))


def coupled_beta(D: int, d: int, k0: int, k: int, alpha: float) -> float:
    """Dimension decay that reaches d in the same number of rounds as k0 reaches k."""
    if k0 <= k or d >= D:
        return alpha
    return math.exp(-math.log(D / d) * math.log(1.0 / alpha) / math.log(k0 / k))


def _decay(current: int, factor: float, floor: int) -> int:
    # strict decrease guards against ceil() stalling for factors near 1
    return max(floor, min(current - 1, math.ceil(factor * current)))


def _basis_for(X: np.ndarray, ids: np.ndarray, dim: int) -> Basis:
    if len(ids) == 1:
        return Basis.canonical(X.shape[1], dim)
    return least_spread_basis(covariance(X[ids]), dim)


def assign_phase(dataset: Dataset, centers, subspaces) -> Partition:
    """Assign each point to the center nearest within that center's subspace.

    Ties go to the lower center index; centroids are recomputed in the full
    space. A center that attracts no points is reseeded as in K-means so the
    cluster count is preserved.
    """
    X = dataset.X
    centers = np.asarray(centers, dtype=np.float64)
    if len(subspaces) != len(centers):
        raise ValueError("need exactly one basis per center")
    for b in subspaces:
        if b.dim_ambient != dataset.dim:
            raise ValueError(f"basis dim {b.dim_ambient} does not match data dim {dataset.dim}")
    dist = np.column_stack([projected_sq_distances(X, c, b) for c, b in zip(centers, subspaces)])
    labels = np.argmin(dist, axis=1)
    labels, means = update_centers(X, labels, len(centers))
    return Partition.from_labels(labels, X, means)


def subspace_determination(partition: Partition, dataset: Dataset, dim: int) -> list:
    """Least-spread basis of dimension ``dim`` for every cluster."""
    if not 1 <= dim <= dataset.dim:
        raise ValueError(f"subspace dimension {dim} outside 1..{dataset.dim}")
    return [_basis_for(dataset.X, c.member_ids, dim) for c in partition.clusters]


def projected_energy(X: np.ndarray, ids: np.ndarray, dim: int) -> float:
    """Mean squared projected distance to the centroid in the least-spread dim-basis."""
    if len(ids) == 1:
        return 0.0
    w = eig_sym(covariance(X[ids])).eigenvalues
    return float(np.sum(w[:dim]))


def merge_phase(clustering: ProjectedClustering, dataset: Dataset, target_k: int, dim: int) -> ProjectedClustering:
    """Greedily merge the pair whose union has the least projected energy."""
    X = dataset.X
    groups = [c.member_ids for c in clustering.partition.clusters]
    if len(groups) <= target_k:
        raise ValueError(f"already at {len(groups)} clusters, cannot merge down to {target_k}")
    m = len(groups)
    energy = np.full((m, m), np.inf)
    for i in range(m):
        for j in range(i + 1, m):
            energy[i, j] = projected_energy(X, np.concatenate([groups[i], groups[j]]), dim)

    while len(groups) > target_k:
        flat = int(np.argmin(energy))
        i, j = divmod(flat, energy.shape[1])
        groups[i] = np.sort(np.concatenate([groups[i], groups[j]]))
        del groups[j]
        energy = np.delete(np.delete(energy, j, axis=0), j, axis=1)
        for other in range(len(groups)):
            if other == i:
                continue
            a, b = min(i, other), max(i, other)
            energy[a, b] = projected_energy(X, np.concatenate([groups[a], groups[b]]), dim)

    partition = Partition(tuple(Cluster.from_members(g, X) for g in groups), dataset.n)
    if invariants.enabled():
        invariants.check_cover(partition, dataset.n, "orclus.merge")
    bases = subspace_determination(partition, dataset, dim)
    return ProjectedClustering(partition, bases, partition.k, dim, list(clustering.history))


def orclus(dataset: Dataset, k: int, d: int, k0: Optional[int] = None, alpha: float = 0.5,
           beta: Optional[float] = None, rng: Optional[np.random.Generator] = None,
           max_iters: int = 100) -> ProjectedClustering:
    N, D = dataset.n, dataset.dim
    k0 = default_k0(k, N) if k0 is None else k0
    if not 1 <= k <= k0 <= N:
        raise ValueError(f"need 1 <= k <= k0 <= N, got k={k}, k0={k0}, N={N}")
    if not 1 <= d <= D:
        raise ValueError(f"need 1 <= d <= D, got d={d}, D={D}")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if beta is None:
        beta = coupled_beta(D, d, k0, k, alpha)
    if not 0.0 < beta < 1.0:
        raise ValueError(f"beta must lie in (0, 1), got {beta}")
    rng = np.random.default_rng() if rng is None else rng

    seeds = seed_random(dataset, k0, rng)
    bases = [Basis.canonical(D, D) for _ in range(k0)]
    kc, lc = k0, D
    history = [(kc, lc)]
    while kc > k or lc > d:
        partition = assign_phase(dataset, seeds, bases)
        bases = subspace_determination(partition, dataset, lc)
        k_new, l_new = _decay(kc, alpha, k), _decay(lc, beta, d)
        current = ProjectedClustering(partition, bases, kc, lc, history)
        if k_new < kc:
            current = merge_phase(current, dataset, k_new, l_new)
            bases = list(current.subspaces)
        else:
            bases = subspace_determination(partition, dataset, l_new)
        seeds = current.partition.centers()
        kc, lc = k_new, l_new
        history.append((kc, lc))

    labels = None
    for _ in range(max(1, max_iters)):
        partition = assign_phase(dataset, seeds, bases)
        bases = subspace_determination(partition, dataset, d)
        seeds = partition.centers()
        new_labels = partition.labels()
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels

    if invariants.enabled():
        invariants.check_cover(partition, N, "orclus.final")
        invariants.require(partition.k == k, "orclus.count", f"{partition.k} != {k}")
        ks = [h[0] for h in history]
        ls = [h[1] for h in history]
        invariants.require(all(a >= b for a, b in zip(ks, ks[1:])), "orclus.k_sequence", str(ks))
        invariants.require(all(a >= b for a, b in zip(ls, ls[1:])), "orclus.dim_sequence", str(ls))
    return ProjectedClustering(partition, bases, k, d, history)
