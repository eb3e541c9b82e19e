import numpy as np
import pytest

from fnlslab.lattice import LatticeField, make_grid


@pytest.fixture
def rng():
    return np.random.default_rng(20240613)


def random_field(grid, rng):
    vals = rng.standard_normal((grid.n, grid.n)) + 1j * rng.standard_normal(
        (grid.n, grid.n)
    )
    return LatticeField(grid=grid, values=vals)


@pytest.fixture
def grid16():
    return make_grid(h=0.5, n=16)
