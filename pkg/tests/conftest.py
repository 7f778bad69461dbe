import numpy as np
import pytest

from volterra import Grid


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def unit_grid():
    return Grid(0.0, 1.0, 100)
