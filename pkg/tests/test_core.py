import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from hkens.core import (Cluster, Dataset, Partition, centroid, cluster_sse, euclidean_distance, mse,
                        partition_objective)
from hkens.errors import DataError

from conftest import ds

finite = st.floats(-1e3, 1e3, allow_nan=False)


def test_distance_345():
    assert euclidean_distance([0, 0], [3, 4]) == 5.0


def test_distance_identity():
    p = np.array([1.5, -2.0, 7.0])
    assert euclidean_distance(p, p) == 0.0


def test_distance_matches_per_coordinate_sum(rng):
    a, b = rng.normal(size=9), rng.normal(size=9)
    total = 0.0
    for x, y in zip(a, b):
        total += (x - y) * (x - y)
    assert euclidean_distance(a, b) == pytest.approx(math.sqrt(total), rel=1e-14)


def test_distance_dim_mismatch():
    with pytest.raises(ValueError):
        euclidean_distance([0, 0], [0, 0, 0])


@given(arrays(float, (3, 4), elements=finite))
def test_triangle_inequality(P):
    a, b, c = P
    assert euclidean_distance(a, c) <= euclidean_distance(a, b) + euclidean_distance(b, c) + 1e-12


def test_centroid_cases(rng):
    assert np.array_equal(centroid([[2.0, 3.0]]), [2.0, 3.0])
    assert np.array_equal(centroid([[0, 0], [2, 2]]), [1.0, 1.0])
    P = rng.normal(size=(5, 3))
    acc = [0.0, 0.0, 0.0]
    for row in P:
        for j in range(3):
            acc[j] += row[j]
    assert np.allclose(centroid(P), [a / 5 for a in acc], rtol=1e-14)
    with pytest.raises(ValueError):
        centroid(np.zeros((0, 3)))


def test_cluster_sse_examples():
    d = ds([[0, 0], [2, 0]])
    assert cluster_sse(Cluster([0], [0, 0]), d) == 0.0
    assert cluster_sse(Cluster([0, 1], [1, 0]), d) == 2.0
    with pytest.raises(IndexError):
        cluster_sse(Cluster([0, 5], [1, 0]), d)


def test_mean_minimises_sse(rng):
    for _ in range(10):
        d = Dataset(rng.normal(size=(12, 4)))
        c = Cluster.from_members(np.arange(12), d.X)
        best = cluster_sse(c, d)
        for _ in range(100):
            assert cluster_sse(c, d, rng.normal(size=4) + c.centroid) >= best


def test_partition_objective():
    d = ds([[0, 0], [2, 0], [5, 5]])
    singles = Partition.from_labels([0, 1, 2], d.X)
    assert partition_objective(singles, d) == 0.0
    one = Partition((Cluster([0, 1], [1, 0]), Cluster([2], [5, 5])), 3)
    assert partition_objective(one, d) == 2.0
    swapped = Partition(tuple(reversed(one.clusters)), 3)
    assert partition_objective(swapped, d) == partition_objective(one, d)


def test_partition_objective_is_sum_of_sse(rng):
    d = Dataset(rng.normal(size=(30, 3)))
    p = Partition.from_labels(rng.integers(0, 4, 30), d.X)
    total = sum(cluster_sse(c, d) for c in p.clusters)
    assert partition_objective(p, d) == pytest.approx(total, rel=1e-9)


def test_mse_examples():
    d = ds([[0, 0], [2, 0], [3, 3], [3, 3]])
    assert mse(Cluster([0], [0, 0]), d) == 0.0
    assert mse(Cluster([0, 1], [1, 0]), d) == 1.0
    assert mse(Cluster([2, 3], [3, 3]), d) == 0.0


def test_partition_rejects_overlap_and_gaps():
    with pytest.raises(ValueError):
        Partition((Cluster([0, 1], [0.0]), Cluster([1, 2], [0.0])), 3)
    with pytest.raises(ValueError):
        Partition((Cluster([0], [0.0]),), 2)


@given(st.lists(st.integers(0, 5), min_size=1, max_size=40))
def test_from_labels_is_disjoint_cover(labels):
    X = np.arange(len(labels), dtype=float)[:, None]
    p = Partition.from_labels(labels, X)
    seen = np.concatenate([c.member_ids for c in p.clusters])
    assert sorted(seen) == list(range(len(labels)))
    assert sum(p.sizes()) == len(labels)
    for c in p.clusters:
        assert np.allclose(c.centroid, X[c.member_ids].mean(axis=0), atol=1e-9)


def test_dataset_invariants():
    with pytest.raises(DataError):
        Dataset(np.array([[1.0, np.nan]]))
    with pytest.raises(DataError):
        Dataset(np.zeros((3, 2)), labels=["a", "b"])
    assert Dataset(np.zeros((3, 2))).dim == 2
