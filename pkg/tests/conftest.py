import numpy as np
import pytest

import bmo
from bmo import kernel


@pytest.fixture(params=sorted(kernel.available_lanes()))
def lane(request):
    """Run the test once per available kernel lane."""
    return request.param


@pytest.fixture
def three_peak_field():
    return bmo.default_three_peak_field()


@pytest.fixture
def single_source_field():
    return bmo.point_source_field(
        [bmo.SourceSpec(intensity=1.0, position=(0.0, 0.0), kappa=0.5)],
        bounds=[(-4.0, 4.0), (-4.0, 4.0)],
    )


def random_state(rng: np.random.Generator, n: int, dim: int = 2, box: float = 5.0):
    """A generic SwarmState with distinct fitness values."""
    positions = rng.uniform(-box, box, size=(n, dim))
    uv = rng.uniform(0.0, 3.0, size=n)
    fitness = rng.uniform(0.0, 2.0, size=n)
    state = bmo.SwarmState.initial(positions)
    state.uv = uv
    state.fitness = fitness
    return state
