import numpy as np
import pytest


@pytest.fixture
def np_rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def random_image(np_rng):
    return np_rng.uniform(0.0, 1.0, size=(16, 16, 3))
