import math

import numpy as np
import pytest

from hartley_conv.grid import ClosedForm, Grid, make_grid, sample

SQRT_HALF_PI = math.sqrt(math.pi / 2)


@pytest.fixture(scope="session")
def grid():
    return make_grid()


@pytest.fixture(scope="session")
def small_grid():
    return Grid(12.0, 512)


@pytest.fixture(scope="session")
def exp_kernel(grid):
    """sqrt(pi/2) exp(-|x|), transform 1/(1+y^2) under H1, H2 and F."""
    return sample(ClosedForm.of("exp_abs", a=SQRT_HALF_PI, c=1.0), grid)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
