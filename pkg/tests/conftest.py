import numpy as np
import pytest

from gn2d.fields import Params, band_limited_field, depth, make_bathymetry
from gn2d.grid import Grid, field, vector


@pytest.fixture
def grid32():
    return Grid(32, 32, 2.0 * np.pi, 2.0 * np.pi)


@pytest.fixture
def grid48():
    return Grid(48, 48, 2.0 * np.pi, 2.0 * np.pi)


@pytest.fixture
def params():
    return Params(epsilon=0.3, mu=0.1, beta=0.3)


def random_state_pieces(grid, params, seed=0, kcap=3, bath_kind="gaussian_bump"):
    """Seeded smooth zeta, depth, bathymetry, and two test vector fields."""
    rng = np.random.default_rng(seed)
    zeta = field(grid, band_limited_field(grid, rng, kcap, 0.5))
    if bath_kind == "flat":
        bath = make_bathymetry("flat", grid)
    else:
        bath = make_bathymetry(bath_kind, grid, amplitude=0.4, width=grid.Lx / 10)
    h = depth(zeta, bath, params)
    v = vector(grid, band_limited_field(grid, rng, kcap),
               band_limited_field(grid, rng, kcap))
    w = vector(grid, band_limited_field(grid, rng, kcap),
               band_limited_field(grid, rng, kcap))
    return zeta, h, bath, v, w
