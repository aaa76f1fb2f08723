import numpy as np
import pytest
from hypothesis import HealthCheck, settings

import qdetnoise as q

settings.register_profile(
    "suite",
    max_examples=50,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


def draw_cavity(rng: np.random.Generator) -> q.CavityParams:
    """One random, well-scaled cavity parameter set."""
    gamma = float(np.exp(rng.uniform(np.log(0.05), np.log(5.0))))
    delta = float(rng.uniform(-3.0, 3.0))
    gbar = float(np.exp(rng.uniform(np.log(0.1), np.log(3.0))))
    theta = float(rng.uniform(-np.pi / 2, np.pi / 2))
    return q.CavityParams(gamma=gamma, delta=delta, gbar=gbar, theta=theta)


@pytest.fixture
def canonical_params() -> q.CavityParams:
    """The worked reference point: gamma=2, delta=0, gbar=1, theta=pi/2."""
    return q.CavityParams(gamma=2.0, delta=0.0, gbar=1.0, theta=np.pi / 2)


@pytest.fixture
def generic_params() -> q.CavityParams:
    """A point with nothing special about it, for frozen-value checks."""
    return q.CavityParams(gamma=2.0, delta=0.5, gbar=1.3, theta=0.4)


@pytest.fixture
def grid129() -> q.FrequencyGrid:
    return q.make_symmetric_grid(4.0, 64)
