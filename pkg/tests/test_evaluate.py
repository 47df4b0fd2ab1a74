from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hkens.core import Partition
from hkens.evaluate import purity, rand_index


def part(labels):
    return Partition.from_labels(labels, np.zeros((len(labels), 1)))


def brute_rand(a, b):
    agree = total = 0
    for i, j in combinations(range(len(a)), 2):
        agree += (a[i] == a[j]) == (b[i] == b[j])
        total += 1
    return agree / total


def brute_purity(a, b):
    total = 0
    for c in set(a):
        members = [b[i] for i in range(len(a)) if a[i] == c]
        total += max(members.count(x) for x in set(members))
    return total / len(a)


def test_purity_examples(rng):
    labels = np.array(list("aabbbc"))
    assert purity(part([0, 0, 1, 1, 1, 2]), labels) == 1.0
    assert purity(part([0] * 6), labels) == pytest.approx(3 / 6)
    a = rng.integers(0, 3, 12)
    b = rng.integers(0, 4, 12)
    assert purity(part(a), b) == pytest.approx(brute_purity(list(a), list(b)))
    with pytest.raises(ValueError):
        purity(part([0, 1]), None)


def test_rand_examples(rng):
    assert rand_index(part([0, 0, 1]), ["x", "x", "y"]) == 1.0
    assert rand_index(part([0, 1]), [5, 5]) == 0.0
    a, b = rng.integers(0, 3, 10), rng.integers(0, 3, 10)
    assert rand_index(part(a), b) == pytest.approx(brute_rand(list(a), list(b)), abs=1e-12)
    with pytest.raises(ValueError):
        rand_index(part([0, 1]), None)


labels_st = st.lists(st.integers(0, 4), min_size=2, max_size=25)


@given(labels_st, st.data())
def test_metric_properties(a, data):
    b = data.draw(st.lists(st.integers(0, 4), min_size=len(a), max_size=len(a)))
    assert rand_index(part(a), b) == pytest.approx(rand_index(part(b), a), abs=1e-12)
    assert purity(part(list(range(len(a)))), b) == 1.0
    majority = max(b.count(x) for x in set(b)) / len(b)
    assert purity(part(a), b) >= majority - 1e-12
    assert 0.0 <= rand_index(part(a), b) <= 1.0
