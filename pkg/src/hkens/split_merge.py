"""Threshold split into a cluster hierarchy, MSE-checked merge, and consensus.

Merge rule
----------
A proposed pair (A, B) is merged only if both hold:

* the union is no looser than the pair's reference cluster, i.e. the
  lowest common ancestor in the split hierarchy (the all-data root for
  pairs from different member clusters): ``mse(A | B) <= mse(reference)``;
* along the axis joining the two centroids, the union's variance is at
  most ``spread`` times the pooled variance of A and B. For two equal
  halves this bounds the centroid separation by ``2 * sqrt(spread - 1)``
  pooled standard deviations (4 for the default of 5).

The first condition alone is vacuous for siblings, whose union is their
parent, so the second condition is what decides whether a split is undone.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.sparse.csgraph import connected_components

from . import invariants
from .core import Cluster, Dataset, Partition, partition_objective, sse
from .hk import EnsembleMember, two_means_split
from .kmeans import DEFAULT_MAX_ITERS, DEFAULT_TOL

CONSENSUS_MODES = ("min-sse", "co-association")
DEFAULT_SPREAD = 5.0


@dataclass(eq=False)
class TreeNode:
    id: int
    member_ids: np.ndarray
    parent: Optional[int]
    children: tuple = ()
    depth: int = 0


@dataclass(eq=False)
class ClusterTree:
    """Split hierarchy under a synthetic all-data root (node 0)."""

    nodes: list
    roots: tuple
    leaves: tuple
    oversize: tuple = ()

    @classmethod
    def from_partition(cls, partition: Partition) -> "ClusterTree":
        nodes = [TreeNode(0, np.arange(partition.n_points), None)]
        for c in partition.clusters:
            nodes.append(TreeNode(len(nodes), c.member_ids, 0, (), 1))
        ids = tuple(range(1, len(nodes)))
        nodes[0].children = ids
        return cls(nodes, ids, ids)

    @property
    def n_points(self) -> int:
        return len(self.nodes[0].member_ids)

    def add_children(self, node_id: int, a: np.ndarray, b: np.ndarray) -> tuple:
        parent = self.nodes[node_id]
        kids = []
        for ids in (a, b):
            kids.append(len(self.nodes))
            self.nodes.append(TreeNode(len(self.nodes), ids, node_id, (), parent.depth + 1))
        parent.children = tuple(kids)
        return tuple(kids)

    def path_to_root(self, node_id: int) -> list:
        path = [node_id]
        while self.nodes[path[-1]].parent is not None:
            path.append(self.nodes[path[-1]].parent)
        return path

    def lca(self, a: int, b: int) -> int:
        up = set(self.path_to_root(a))
        for n in self.path_to_root(b):
            if n in up:
                return n
        raise ValueError("nodes share no ancestor")

    def leaf_partition(self, X: np.ndarray) -> Partition:
        return Partition(tuple(Cluster.from_members(self.nodes[i].member_ids, X) for i in self.leaves),
                         self.n_points)


def split_pass(member, dataset: Dataset, T: int, max_iters: int = DEFAULT_MAX_ITERS,
               tol: float = DEFAULT_TOL) -> ClusterTree:
    """Recursively halve every cluster larger than T points.

    Clusters of more than T identical points cannot be split; they stay as
    oversize leaves and are listed in ``tree.oversize``.
    """
    if T < 2:
        raise ValueError(f"threshold must be at least 2, got {T}")
    partition = member.partition if isinstance(member, EnsembleMember) else member
    X = dataset.X
    tree = ClusterTree.from_partition(partition)
    leaves, oversize = [], []
    stack = list(reversed(tree.roots))
    while stack:
        node_id = stack.pop()
        ids = tree.nodes[node_id].member_ids
        if len(ids) <= T:
            leaves.append(node_id)
            continue
        halves = two_means_split(X, ids, max_iters, tol)
        if halves is None:
            leaves.append(node_id)
            oversize.append(node_id)
            continue
        a, b = tree.add_children(node_id, *halves)
        if invariants.enabled():
            parent_sse = sse(X[ids], X[ids].mean(axis=0))
            child_sse = sum(sse(X[tree.nodes[c].member_ids], X[tree.nodes[c].member_ids].mean(axis=0))
                            for c in (a, b))
            invariants.not_increasing(parent_sse, child_sse, "split.sse")
        stack.extend([b, a])
    tree.leaves = tuple(leaves)
    tree.oversize = tuple(oversize)
    if invariants.enabled():
        leaf_part = tree.leaf_partition(X)
        invariants.check_cover(leaf_part, dataset.n, "split.leaves")
        for n in tree.nodes:
            if n.children:
                union = np.sort(np.concatenate([tree.nodes[c].member_ids for c in n.children]))
                invariants.require(np.array_equal(union, n.member_ids), "split.node_union", f"node {n.id}")
        invariants.not_increasing(partition_objective(partition.refit(X), dataset),
                                  partition_objective(leaf_part, dataset), "split.objective")
    return tree


@dataclass(frozen=True)
class MergeCheck:
    union_mse: float
    reference_mse: float
    axis_ratio: float
    spread: float

    @property
    def accepted(self) -> bool:
        slack = invariants.REL_SLACK * max(1.0, self.reference_mse)
        return self.union_mse <= self.reference_mse + slack and self.axis_ratio <= self.spread


def _mse(points: np.ndarray) -> float:
    return sse(points, points.mean(axis=0)) / len(points)


def axis_ratio(A: np.ndarray, B: np.ndarray) -> float:
    """Union variance over pooled within-pair variance, along the centroid axis.

    Both are unbiased estimates (n - 1 and n - 2 degrees of freedom). Two
    singletons carry no spread information and give 1.0.
    """
    n = len(A) + len(B)
    axis = A.mean(axis=0) - B.mean(axis=0)
    norm = np.sqrt(np.sum(axis * axis))
    if norm == 0.0 or n <= 2:
        return 1.0
    pa, pb = A @ (axis / norm), B @ (axis / norm)
    within = (np.sum((pa - pa.mean()) ** 2) + np.sum((pb - pb.mean()) ** 2)) / (n - 2)
    pu = np.concatenate([pa, pb])
    union = np.sum((pu - pu.mean()) ** 2) / (n - 1)
    if within == 0.0:
        return np.inf
    return float(union / within)


def merge_check(X: np.ndarray, a_ids, b_ids, reference_mse: float, spread: float = DEFAULT_SPREAD) -> MergeCheck:
    A, B = X[np.asarray(a_ids)], X[np.asarray(b_ids)]
    union = np.concatenate([A, B])
    return MergeCheck(_mse(union), float(reference_mse), axis_ratio(A, B), float(spread))


@dataclass
class _Active:
    key: int
    member_ids: np.ndarray
    anchor: int
    centroid: np.ndarray


@dataclass(eq=False)
class MergeState:
    active: list
    merged_log: list = field(default_factory=list)
    blocked: set = field(default_factory=set)
    rejected: int = 0

    def partition(self, n_points: int) -> Partition:
        return Partition(tuple(Cluster(a.member_ids, a.centroid) for a in self.active), n_points).canonical()


def merge_state(tree: ClusterTree, dataset: Dataset, spread: float = DEFAULT_SPREAD) -> MergeState:
    """Greedy closest-pair merging over the leaves of ``tree``.

    A rejected pair stays blocked until one of its sides changes through
    another merge; the loop ends when every remaining pair is blocked.
    """
    X = dataset.X
    ref_cache = {}

    def node_mse(node_id):
        if node_id not in ref_cache:
            ref_cache[node_id] = _mse(X[tree.nodes[node_id].member_ids])
        return ref_cache[node_id]

    state = MergeState([_Active(i, tree.nodes[leaf].member_ids, leaf, X[tree.nodes[leaf].member_ids].mean(axis=0))
                        for i, leaf in enumerate(tree.leaves)])
    next_key = len(state.active)
    while len(state.active) > 1:
        C = np.vstack([a.centroid for a in state.active])
        dist = np.sqrt(np.maximum(0.0, np.sum((C[:, None, :] - C[None, :, :]) ** 2, axis=2)))
        m = len(state.active)
        dist[np.tril_indices(m)] = np.inf
        for i in range(m):
            for j in range(i + 1, m):
                if (state.active[i].key, state.active[j].key) in state.blocked:
                    dist[i, j] = np.inf
        if not np.isfinite(dist).any():
            break
        i, j = divmod(int(np.argmin(dist)), m)
        a, b = state.active[i], state.active[j]
        ref = tree.lca(a.anchor, b.anchor)
        check = merge_check(X, a.member_ids, b.member_ids, node_mse(ref), spread)
        if check.accepted:
            ids = np.sort(np.concatenate([a.member_ids, b.member_ids]))
            merged = _Active(next_key, ids, ref, X[ids].mean(axis=0))
            next_key += 1
            state.active[i] = merged
            del state.active[j]
            state.merged_log.append((a.key, b.key, merged.key, check))
            if invariants.enabled():
                u, r = X[ids], X[tree.nodes[ref].member_ids]
                u_mse = np.mean(np.sum((u - u.mean(axis=0)) ** 2, axis=1))
                r_mse = np.mean(np.sum((r - r.mean(axis=0)) ** 2, axis=1))
                invariants.require(u_mse <= r_mse * (1 + 1e-8) + 1e-12 and check.axis_ratio <= spread,
                                   "merge.mse_rule", repr(check))
                invariants.check_cover(state.partition(dataset.n), dataset.n, "merge.active")
        else:
            state.blocked.add((a.key, b.key))
            state.rejected += 1
    return state


def merge_pass(tree: ClusterTree, dataset: Dataset, spread: float = DEFAULT_SPREAD) -> Partition:
    return merge_state(tree, dataset, spread).partition(dataset.n)


def co_association(finals, n_points: int) -> np.ndarray:
    """Fraction of partitions placing each point pair in the same cluster."""
    M = np.zeros((n_points, n_points))
    for p in finals:
        lab = p.labels()
        M += lab[:, None] == lab[None, :]
    return M / len(finals)


def consensus_select(finals, dataset: Dataset, mode: str = "min-sse") -> Partition:
    finals = list(finals)
    if not finals:
        raise ValueError("consensus needs at least one partition")
    if mode == "min-sse":
        objectives = [partition_objective(p, dataset) for p in finals]
        return finals[int(np.argmin(objectives))]
    if mode == "co-association":
        linked = co_association(finals, dataset.n) > 0.5
        _, labels = connected_components(linked, directed=False)
        return Partition.from_labels(labels, dataset.X).canonical()
    raise ValueError(f"unknown consensus mode {mode!r}; expected one of {CONSENSUS_MODES}")
