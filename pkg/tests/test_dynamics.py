"""Semi-discrete right-hand sides, RK4 stepping, and the guarded runner."""

import dataclasses

import numpy as np
import pytest

from gn2d.diagnostics import mass
from gn2d.dynamics import auto_dt, rhs, rk4_step, run
from gn2d.errors import StepRejected
from gn2d.fields import (
    Bathymetry,
    Params,
    Scenario,
    make_bathymetry,
    make_initial,
    State,
)
from gn2d.grid import Grid, field, inner, vector


def rest_state(grid):
    return State(zeta=field(grid, np.zeros(grid.shape)),
                 v=vector(grid, np.zeros(grid.shape), np.zeros(grid.shape)))


def test_rhs_rest_state_is_equilibrium(grid32, params):
    bath = make_bathymetry("flat", grid32)
    out = rhs(rest_state(grid32), bath, params, "new_gn")
    assert np.abs(out.d_zeta.values).max() == 0.0
    assert np.abs(out.d_v.arrays()).max() == 0.0


def test_rhs_lake_at_rest_over_bump(grid32, params):
    bath = make_bathymetry("gaussian_bump", grid32, amplitude=0.4,
                           width=grid32.Lx / 10)
    out = rhs(rest_state(grid32), bath, params, "new_gn")
    assert np.abs(out.d_zeta.values).max() < 1e-14
    assert np.abs(out.d_v.arrays()).max() < 1e-12


def test_rhs_linear_velocity_response():
    # near the rest state the velocity tendency solves
    # (1 + mu k^2/3) vhat = -grad zeta-hat per longitudinal mode
    g = Grid(64, 64, 2 * np.pi, 2 * np.pi)
    p = Params(epsilon=1e-6, mu=0.2)
    bath = make_bathymetry("flat", g)
    k = 3.0
    st = State(zeta=field(g, np.cos(k * g.X)),
               v=vector(g, np.zeros(g.shape), np.zeros(g.shape)))
    out = rhs(st, bath, p, "new_gn")
    want = k * np.sin(k * g.X) / (1 + p.mu * k ** 2 / 3)
    assert np.abs(out.d_v.v1.values - want).max() < 1e-5
    assert np.abs(out.d_v.v2.values).max() < 1e-8


def test_linear_dispersion_relation():
    # evolve the near-linear standing wave and fit the oscillation frequency
    g = Grid(64, 64, 2 * np.pi, 2 * np.pi)
    p = Params(epsilon=1e-6, mu=0.2)
    bath = make_bathymetry("flat", g)
    k = 2.0
    mode = np.cos(k * g.X)
    st = State(zeta=field(g, mode), v=vector(g, np.zeros(g.shape), np.zeros(g.shape)))
    dt = 0.01
    st1 = rk4_step(st, bath, p, "new_gn", dt)
    norm = inner(field(g, mode), field(g, mode))
    a1 = inner(st1.zeta, field(g, mode)) / norm
    omega = np.arccos(a1) / dt
    omega_exact = np.sqrt(k ** 2 / (1 + p.mu * k ** 2 / 3))
    assert abs(omega - omega_exact) / omega_exact < 1e-4


def test_standard_and_new_models_differ_only_by_curl_term(grid32, params):
    st = make_initial("random_rotational", grid32, params, seed=31, kcap=3,
                      amplitude=0.3)
    bath = make_bathymetry("flat", grid32)
    a = rhs(st, bath, params, "new_gn")
    b = rhs(st, bath, params, "standard_gn")
    assert np.abs(a.d_zeta.values - b.d_zeta.values).max() < 1e-15
    assert np.abs(a.d_v.arrays() - b.d_v.arrays()).max() > 1e-6


def test_rhs_rejects_unknown_model(grid32, params):
    bath = make_bathymetry("flat", grid32)
    with pytest.raises(ValueError):
        rhs(rest_state(grid32), bath, params, "nope")


def test_rk4_rest_state_unchanged(grid32, params):
    bath = make_bathymetry("flat", grid32)
    out = rk4_step(rest_state(grid32), bath, params, "new_gn", 0.05)
    assert np.abs(out.zeta.values).max() == 0.0
    assert out.t == 0.05


def test_rk4_conserves_mass_per_step(grid32, params):
    st = make_initial("random_irrotational", grid32, params, seed=32, kcap=3,
                      amplitude=0.3)
    bath = make_bathymetry("gaussian_bump", grid32, amplitude=0.3,
                           width=grid32.Lx / 10)
    m0 = mass(st.zeta)
    out = rk4_step(st, bath, params, "new_gn", 0.02)
    assert abs(mass(out.zeta) - m0) < 1e-13 * (1 + abs(m0))


def test_rk4_temporal_order_is_four():
    # Richardson self-convergence over a fixed interval
    g = Grid(48, 48, 2 * np.pi, 2 * np.pi)
    p = Params(epsilon=0.2, mu=0.1)
    bath = make_bathymetry("flat", g)
    st = make_initial("random_irrotational", g, p, seed=33, kcap=2, amplitude=0.3)
    t_span, dt0 = 0.4, 0.1

    def advance(dt):
        s = st
        for _ in range(round(t_span / dt)):
            s = rk4_step(s, bath, p, "new_gn", dt, cg_tol=1e-13)
        return s.zeta.values

    z1, z2, z4 = advance(dt0), advance(dt0 / 2), advance(dt0 / 4)
    e1 = np.abs(z1 - z2).max()
    e2 = np.abs(z2 - z4).max()
    order = np.log2(e1 / e2)
    assert 3.7 <= order <= 4.3


def test_rk4_reversibility():
    g = Grid(32, 32, 2 * np.pi, 2 * np.pi)
    p = Params(epsilon=0.2, mu=0.1)
    bath = make_bathymetry("flat", g)
    st = make_initial("random_irrotational", g, p, seed=34, kcap=2, amplitude=0.3)
    dt = 0.02
    fwd = rk4_step(st, bath, p, "new_gn", dt, cg_tol=1e-13)
    back = rk4_step(fwd, bath, p, "new_gn", -dt, cg_tol=1e-13)
    assert np.abs(back.zeta.values - st.zeta.values).max() < 1e-10
    assert np.abs(back.v.arrays() - st.v.arrays()).max() < 1e-10


def test_rk4_step_rejected_on_mid_stage_depth_failure():
    g = Grid(32, 32, 2 * np.pi, 2 * np.pi)
    p = Params(epsilon=0.9, mu=0.05, h_min_guard=0.3)
    bath = make_bathymetry("flat", g)
    # trough just above the guard; a large step drives a stage below it
    zeta0 = -0.75 * (1 + np.cos(g.X - np.pi)) / 2
    st = State(zeta=field(g, zeta0),
               v=vector(g, np.full(g.shape, 2.0) * np.sin(g.X), np.zeros(g.shape)))
    with pytest.raises((StepRejected, Exception)):
        for _ in range(200):
            st = rk4_step(st, bath, p, "new_gn", 0.2)


def test_auto_dt_rest_state():
    g = Grid(128, 128, 2 * np.pi, 2 * np.pi)
    p = Params(epsilon=0.1, mu=0.1)
    bath = make_bathymetry("flat", g)
    dt = auto_dt(rest_state(g), bath, p, cfl=0.5)
    assert abs(dt - 0.5 * g.dx) < 1e-15


def test_auto_dt_scaling_properties():
    p = Params(epsilon=0.5, mu=0.1)
    g1 = Grid(64, 64, 2 * np.pi, 2 * np.pi)
    g2 = Grid(128, 128, 2 * np.pi, 2 * np.pi)
    bath1, bath2 = make_bathymetry("flat", g1), make_bathymetry("flat", g2)
    assert abs(auto_dt(rest_state(g1), bath1, p) / auto_dt(rest_state(g2), bath2, p)
               - 2.0) < 1e-12
    # dt decreases monotonically as the advection speed grows
    dts = []
    for speed in (0.0, 0.5, 1.0, 2.0):
        st = State(zeta=field(g1, np.zeros(g1.shape)),
                   v=vector(g1, np.full(g1.shape, speed), np.zeros(g1.shape)))
        dts.append(auto_dt(st, bath1, p))
    assert all(a > b for a, b in zip(dts, dts[1:]))


def base_scenario(**kw):
    defaults = dict(nx=32, ny=32, params=Params(epsilon=0.1, mu=0.1),
                    initial_kind="gaussian_hump",
                    initial_opts={"amplitude": 0.3, "width": 0.5}, t_end=0.5)
    defaults.update(kw)
    return Scenario(**defaults)


def test_run_t_end_zero_returns_initial():
    res = run(base_scenario(t_end=0.0))
    assert res.termination == "completed"
    assert len(res.records) == 1
    assert res.state.t == 0.0


def test_run_rest_state_stays_at_rest():
    res = run(base_scenario(initial_opts={"amplitude": 0.0, "width": 0.5},
                            t_end=2.0))
    assert res.termination == "completed"
    assert np.abs(res.state.zeta.values).max() < 1e-12
    assert np.abs(res.state.v.arrays()).max() < 1e-12


def test_run_mass_conserved_end_to_end():
    res = run(base_scenario(t_end=2.0))
    assert res.termination == "completed"
    m = [r.mass for r in res.records]
    assert max(abs(x - m[0]) for x in m) < 1e-11 * (1 + abs(m[0]))
    assert len(res.records) > 20


def test_run_norm_blowup_guard_terminates_cleanly():
    sc = base_scenario(t_end=5.0, xs_ceiling=1e-3)
    res = run(sc)
    assert res.termination == "norm_blowup"
    assert np.isfinite(res.state.zeta.values).all()


def test_run_depth_guard_terminates_cleanly():
    p = Params(epsilon=0.9, mu=0.01)
    sc = base_scenario(nx=64, ny=64, params=p, t_end=5.0, xs_ceiling=100.0,
                       initial_opts={"amplitude": -1.05, "width": 0.5})
    res = run(sc)
    assert res.termination in ("depth_violation", "norm_blowup")
    assert np.isfinite(res.state.zeta.values).all()


def test_run_deterministic():
    sc = base_scenario(initial_kind="random_irrotational",
                       initial_opts={"amplitude": 0.2, "kcap": 2}, seed=5,
                       t_end=0.5)
    a = run(sc)
    b = run(sc)
    assert np.array_equal(a.state.zeta.values, b.state.zeta.values)
    assert np.array_equal(a.state.v.arrays(), b.state.v.arrays())
    assert [r.t for r in a.records] == [r.t for r in b.records]
    assert [r.xs_norm for r in a.records] == [r.xs_norm for r in b.records]


def test_run_snapshot_writer_called_on_stride():
    seen = []
    sc = base_scenario(t_end=0.3, snapshot_stride=3)

    def writer(state, idx):
        seen.append((idx, state.t))

    res = run(sc, snapshot_writer=writer)
    assert res.termination == "completed"
    assert seen[0][0] == 0
    assert all(b[0] - a[0] in (1, 2, 3) for a, b in zip(seen, seen[1:]))
    # final state always captured
    assert abs(seen[-1][1] - res.state.t) < 1e-12
