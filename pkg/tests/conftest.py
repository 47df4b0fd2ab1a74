import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from hkens import invariants
from hkens.core import Dataset

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def debug():
    with invariants.debug_checks() as counts:
        yield counts


def ds(points, labels=None):
    return Dataset(np.asarray(points, dtype=float).reshape(len(points), -1), labels)
