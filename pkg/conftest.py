import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from pfgr.instances import OVInstance  # noqa: E402

settings.register_profile(
    "pfgr",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("pfgr")


def _random_ov(seed: int, max_n: int, max_d: int) -> OVInstance:
    """Seeded instance with independent sizes for A and B, planted on odd seeds."""
    rng = np.random.default_rng(seed)
    n_a, n_b = (int(x) for x in rng.integers(1, max_n + 1, size=2))
    d = int(rng.integers(1, max_d + 1))
    set_a = rng.integers(0, 2, size=(n_a, d))
    set_b = rng.integers(0, 2, size=(n_b, d))
    if seed % 2:
        i, j = int(rng.integers(0, n_a)), int(rng.integers(0, n_b))
        set_b[j] &= 1 - set_a[i]
    return OVInstance(d, tuple(map(tuple, set_a.tolist())), tuple(map(tuple, set_b.tolist())))


@pytest.fixture
def random_ov():
    return _random_ov
