"""Opt-in runtime invariant checks.

Checks are off by default and cost nothing when disabled. Enable them with
``HKENS_DEBUG=1`` or the :func:`debug_checks` context manager, which also
counts how many checks ran.
"""
from __future__ import annotations

import os
from collections import Counter
from contextlib import contextmanager

import numpy as np

from .errors import InvariantError

_enabled = os.environ.get("HKENS_DEBUG", "0") not in ("", "0")
counts: Counter = Counter()

# relative slack for float comparisons of objectives
REL_SLACK = 1e-9


def enabled() -> bool:
    return _enabled


def set_enabled(flag: bool) -> None:
    global _enabled
    _enabled = bool(flag)


@contextmanager
def debug_checks():
    """Enable checks inside the block and yield a fresh counter of checks run."""
    global _enabled
    previous = _enabled
    _enabled = True
    counts.clear()
    try:
        yield counts
    finally:
        _enabled = previous


def require(cond: bool, kind: str, message: str) -> None:
    counts[kind] += 1
    if not cond:
        raise InvariantError(f"{kind}: {message}")


def not_increasing(before: float, after: float, kind: str) -> None:
    if _enabled:
        slack = REL_SLACK * max(1.0, abs(before))
        require(after <= before + slack, kind, f"{after!r} > {before!r}")


def check_cover(labels_or_partition, n_points: int, kind: str = "partition") -> None:
    """Disjoint-cover check: every index 0..n-1 appears in exactly one cluster."""
    if not _enabled:
        return
    clusters = getattr(labels_or_partition, "clusters", None)
    if clusters is None:
        raise TypeError("expected a Partition")
    seen = np.zeros(n_points, dtype=np.int64)
    for c in clusters:
        require(len(c.member_ids) > 0, kind, "empty cluster")
        ids = np.asarray(c.member_ids)
        require(ids.min() >= 0 and ids.max() < n_points, kind, "member index out of range")
        np.add.at(seen, ids, 1)
    require(bool(np.all(seen == 1)), kind, "clusters are not a disjoint cover")
