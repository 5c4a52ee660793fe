import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from hypisoptic.figures import PRESETS

settings.register_profile(
    "default", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

# the thirteen distinct conics of the figure presets
FIGURE_CONICS = list(dict.fromkeys(p.conic for p in PRESETS.values()))


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


def close(a, b, tol=1e-12):
    return math.isclose(a, b, rel_tol=tol, abs_tol=tol)
