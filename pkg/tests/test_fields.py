"""Physical parameters, bathymetry and initial-data generators."""

import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gn2d.errors import DepthViolation
from gn2d.fields import (
    Params,
    Scenario,
    band_limited_field,
    depth,
    make_bathymetry,
    make_initial,
    solitary_wave_profile,
)
from gn2d.grid import Grid, curl, field, l2_norm


def test_params_range_validation():
    Params(epsilon=0.5, mu=0.5)  # fine
    Params(epsilon=1.0, mu=1.0, beta=1.0)  # closed upper ends
    for bad in [dict(epsilon=1.5, mu=0.1), dict(epsilon=-0.1, mu=0.1),
                dict(epsilon=0.1, mu=1.5), dict(epsilon=0.1, mu=-0.1),
                dict(epsilon=0.1, mu=0.1, beta=2.0),
                dict(epsilon=0.1, mu=0.1, h_min_guard=0.0)]:
        with pytest.raises(ValueError):
            Params(**bad)


def test_params_mu_zero_allowed():
    p = Params(epsilon=0.1, mu=0.0)
    assert p.mu == 0.0


def test_depth_guard(grid32, params):
    flat = make_bathymetry("flat", grid32)
    deep = field(grid32, np.full(grid32.shape, -0.5))
    h = depth(deep, flat, params)
    assert np.allclose(h.values, 1.0 - 0.5 * params.epsilon)
    # push depth below the guard
    shallow = field(grid32, np.full(grid32.shape, -(1.0 - 0.01) / params.epsilon))
    with pytest.raises(DepthViolation):
        depth(shallow, flat, params)


def test_flat_bathymetry_is_flat(grid32):
    bath = make_bathymetry("flat", grid32)
    assert bath.is_flat
    assert np.all(bath.b.values == 0.0)
    assert np.all(bath.grad_b.arrays() == 0.0)


def test_gaussian_bump_periodicity_and_caches(grid32):
    g = grid32
    bath = make_bathymetry("gaussian_bump", g, amplitude=0.4, width=g.Lx / 10)
    assert not bath.is_flat
    assert abs(bath.b.values.max() - 0.4) < 1e-6
    # gradient cache matches a spectral derivative of the stored field
    from gn2d.grid import grad
    gb = grad(bath.b)
    assert np.allclose(bath.grad_b.v1.values, gb.v1.values, atol=1e-12)
    assert np.allclose(bath.grad_b.v2.values, gb.v2.values, atol=1e-12)


def test_ridge_is_y_invariant(grid32):
    bath = make_bathymetry("ridge", grid32, amplitude=0.3, width=grid32.Lx / 10)
    b = bath.b.values
    assert np.allclose(b, b[:, :1])
    assert np.abs(bath.grad_b.v2.values).max() < 1e-12


def test_band_limited_field_resolution_independent():
    # same seed, different grids: values agree at the shared physical points
    g1 = Grid(32, 32, 2 * np.pi, 2 * np.pi)
    g2 = Grid(64, 64, 2 * np.pi, 2 * np.pi)
    a1 = band_limited_field(g1, np.random.default_rng(9), kcap=3, amplitude=0.7)
    a2 = band_limited_field(g2, np.random.default_rng(9), kcap=3, amplitude=0.7)
    assert np.allclose(a1, a2[::2, ::2], atol=1e-13)
    assert np.abs(a1).max() <= 0.7 + 1e-12


@settings(max_examples=15, deadline=None)
@given(a=st.floats(0.05, 0.5), eps=st.floats(0.05, 0.9), mu=st.floats(0.02, 0.9))
def test_solitary_wave_closed_form(a, eps, mu):
    p = Params(epsilon=eps, mu=mu)
    x = np.linspace(0, 40, 257)
    zeta, v1, c = solitary_wave_profile(x, p, a, 20.0)
    assert abs(c - np.sqrt(1 + eps * a)) < 1e-14
    assert abs(zeta.max() - a) < 1e-12
    # mass flux h v1 = c zeta pointwise
    h = 1 + eps * zeta
    assert np.allclose(h * v1, c * zeta, atol=1e-13)


def test_solitary_wave_needs_dispersion():
    with pytest.raises(ValueError):
        solitary_wave_profile(np.linspace(0, 1, 8), Params(epsilon=0.1, mu=0.0), 0.1, 0.5)


def test_make_initial_irrotational_has_zero_curl(grid32, params):
    st0 = make_initial("random_irrotational", grid32, params, seed=11, kcap=3,
                       amplitude=0.3)
    assert l2_norm(curl(st0.v)) < 1e-11
    assert st0.t == 0.0


def test_make_initial_rotational_has_curl(grid32, params):
    st0 = make_initial("random_rotational", grid32, params, seed=11, kcap=3,
                       amplitude=0.3, curl_amplitude=0.4)
    assert l2_norm(curl(st0.v)) > 0.1


def test_make_initial_depth_checked(grid32, params):
    with pytest.raises(DepthViolation):
        make_initial("gaussian_hump", grid32, params, amplitude=-1.2 / params.epsilon)
    with pytest.raises(ValueError):
        make_initial("nope", grid32, params)


def test_scenario_helpers_roundtrip():
    sc = Scenario(nx=32, ny=32, params=Params(epsilon=0.1, mu=0.1),
                  initial_kind="gaussian_hump", initial_opts={"amplitude": 0.4},
                  t_end=0.5)
    g = sc.make_grid()
    bath = sc.make_bathymetry(g)
    st0 = sc.make_initial(g, bath)
    assert st0.zeta.values.shape == (32, 32)
    sc2 = dataclasses.replace(sc, nx=64)
    assert sc2.make_grid().nx == 64
