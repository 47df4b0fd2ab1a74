"""External validity metrics against ground-truth labels."""
from __future__ import annotations

import numpy as np

from .core import Partition


def _as_labels(x) -> np.ndarray:
    if isinstance(x, Partition):
        return x.labels()
    if x is None:
        raise ValueError("ground-truth labels are required")
    return np.asarray(x)


def contingency(a, b) -> np.ndarray:
    _, ai = np.unique(_as_labels(a), return_inverse=True)
    _, bi = np.unique(_as_labels(b), return_inverse=True)
    if len(ai) != len(bi):
        raise ValueError(f"length mismatch: {len(ai)} vs {len(bi)}")
    table = np.zeros((ai.max() + 1, bi.max() + 1), dtype=np.int64)
    np.add.at(table, (ai, bi), 1)
    return table


def purity(partition, labels) -> float:
    """Fraction of points belonging to the majority class of their cluster."""
    table = contingency(partition, labels)
    return float(table.max(axis=1).sum() / table.sum())


def rand_index(partition, labels) -> float:
    """Fraction of point pairs on which the two groupings agree."""
    table = contingency(partition, labels)
    n = table.sum()
    if n < 2:
        return 1.0
    pairs = n * (n - 1) / 2

    def comb2(x):
        return float(np.sum(x * (x - 1) / 2))

    same_both = comb2(table)
    same_a = comb2(table.sum(axis=1))
    same_b = comb2(table.sum(axis=0))
    agree = pairs + 2 * same_both - same_a - same_b
    return float(agree / pairs)
