"""Semi-discrete tendencies, RK4 stepping, and the guarded simulation runner."""

from __future__ import annotations

from dataclasses import dataclass, field as dfield

import numpy as np

from .diagnostics import DiagnosticsRecord, curl_hs, energy_Es, mass, xs_norm
from .elliptic import invert_frak_T_arrays
from .errors import DepthViolation, NoConvergence, NonFiniteField, StepRejected
from .fields import Bathymetry, Params, Scenario, State, depth
from .grid import ScalarField, VectorField, field, vector
from .operators import OperatorContext, apply_R1, compute_r2


@dataclass
class Tendency:
    d_zeta: ScalarField
    d_v: VectorField


@dataclass
class SolverWorkspace:
    """Warm start and iteration bookkeeping shared across RK stages."""

    warm: np.ndarray | None = None
    cg_iterations: int = 0


def rhs(state: State, bath: Bathymetry, p: Params, model: str,
        cg_tol: float = 1e-10, cg_max_iter: int = 500,
        workspace: SolverWorkspace | None = None) -> Tendency:
    """Tendency of the condensed evolution form.

    The zeta equation is integrated in conservative form -div(h v), which
    conserves the grid integral of zeta exactly.  The momentum tendency is
    -eps (v.grad)v - frak_T^{-1}(h grad zeta + eps mu (R1[U]v + r2(U))).
    """
    if model not in ("new_gn", "standard_gn"):
        raise ValueError(f"unknown model {model!r}")
    g = state.grid
    h = depth(state.zeta, bath, p)
    v = state.v
    ha = h.values
    v1, v2 = v.v1.values, v.v2.values
    eps, mu = p.epsilon, p.mu

    d_zeta_arr = -(g.ddx_arr(g.dealias_arr(ha * v1)) + g.ddy_arr(g.dealias_arr(ha * v2)))

    d1v1 = g.ddx_arr(v1)
    d2v1 = g.ddy_arr(v1)
    d1v2 = g.ddx_arr(v2)
    d2v2 = g.ddy_arr(v2)
    adv1 = g.dealias_arr(v1 * d1v1 + v2 * d2v1)
    adv2 = g.dealias_arr(v1 * d1v2 + v2 * d2v2)

    gz1 = g.ddx_arr(state.zeta.values)
    gz2 = g.ddy_arr(state.zeta.values)
    f1 = g.dealias_arr(ha * gz1)
    f2 = g.dealias_arr(ha * gz2)

    ctx = OperatorContext(h, bath, p, include_curl=(model == "new_gn"))
    if mu > 0.0:
        r1 = apply_R1(ctx, v, v)
        f1 = f1 + eps * mu * r1.v1.values
        f2 = f2 + eps * mu * r1.v2.values
        if not ctx.flat:
            r2v = compute_r2(ctx, v)
            f1 = f1 + eps * mu * r2v.v1.values
            f2 = f2 + eps * mu * r2v.v2.values

    warm = workspace.warm if workspace is not None else None
    u, report = invert_frak_T_arrays(ctx, np.stack([f1, f2]), tol=cg_tol,
                                     max_iter=cg_max_iter, x0=warm)
    if workspace is not None:
        workspace.warm = u
        workspace.cg_iterations += report.iterations

    dv1 = -eps * adv1 - u[0]
    dv2 = -eps * adv2 - u[1]
    if not (np.all(np.isfinite(d_zeta_arr)) and np.all(np.isfinite(dv1))
            and np.all(np.isfinite(dv2))):
        raise NonFiniteField(f"non-finite tendency at t={state.t:.6g}")
    return Tendency(d_zeta=field(g, d_zeta_arr), d_v=vector(g, dv1, dv2))


def rk4_step(state: State, bath: Bathymetry, p: Params, model: str, dt: float,
             cg_tol: float = 1e-10, cg_max_iter: int = 500,
             workspace: SolverWorkspace | None = None) -> State:
    """Classical four-stage Runge-Kutta step."""
    if dt == 0.0:
        raise ValueError("dt must be nonzero")
    g = state.grid

    def shifted(c_z, c_v1, c_v2, t):
        return State(zeta=field(g, c_z), v=vector(g, c_v1, c_v2), t=t)

    z0, u1, u2 = state.zeta.values, state.v.v1.values, state.v.v2.values
    k1 = rhs(state, bath, p, model, cg_tol, cg_max_iter, workspace)
    try:
        k2 = rhs(shifted(z0 + 0.5 * dt * k1.d_zeta.values,
                         u1 + 0.5 * dt * k1.d_v.v1.values,
                         u2 + 0.5 * dt * k1.d_v.v2.values,
                         state.t + 0.5 * dt), bath, p, model, cg_tol, cg_max_iter, workspace)
        k3 = rhs(shifted(z0 + 0.5 * dt * k2.d_zeta.values,
                         u1 + 0.5 * dt * k2.d_v.v1.values,
                         u2 + 0.5 * dt * k2.d_v.v2.values,
                         state.t + 0.5 * dt), bath, p, model, cg_tol, cg_max_iter, workspace)
        k4 = rhs(shifted(z0 + dt * k3.d_zeta.values,
                         u1 + dt * k3.d_v.v1.values,
                         u2 + dt * k3.d_v.v2.values,
                         state.t + dt), bath, p, model, cg_tol, cg_max_iter, workspace)
    except DepthViolation as exc:
        raise StepRejected(f"depth guard failed mid-stage at t={state.t:.6g}: {exc}") from exc
    sixth = dt / 6.0
    new = shifted(
        z0 + sixth * (k1.d_zeta.values + 2 * k2.d_zeta.values + 2 * k3.d_zeta.values + k4.d_zeta.values),
        u1 + sixth * (k1.d_v.v1.values + 2 * k2.d_v.v1.values + 2 * k3.d_v.v1.values + k4.d_v.v1.values),
        u2 + sixth * (k1.d_v.v2.values + 2 * k2.d_v.v2.values + 2 * k3.d_v.v2.values + k4.d_v.v2.values),
        state.t + dt,
    )
    depth(new.zeta, bath, p)  # output must pass the guard
    return new


def auto_dt(state: State, bath: Bathymetry, p: Params, cfl: float = 0.5) -> float:
    """CFL step from the gravity-wave speed plus advection: c = sqrt(h) + eps |v|."""
    g = state.grid
    h = depth(state.zeta, bath, p)
    speed = np.sqrt(h.values) + p.epsilon * np.hypot(state.v.v1.values, state.v.v2.values)
    return float(cfl * min(g.dx, g.dy) / speed.max())


@dataclass
class RunResult:
    state: State
    records: list
    termination: str
    snapshots: list = dfield(default_factory=list)


def run(scenario: Scenario, snapshot_writer=None) -> RunResult:
    """Advance the scenario to t_end or to a typed early termination.

    snapshot_writer(state, index) is invoked at the snapshot stride (and at
    t=0 and the final state) when the stride is positive.
    """
    grid = scenario.make_grid()
    bath = scenario.make_bathymetry(grid)
    p = scenario.params
    state = scenario.make_initial(grid, bath)
    model = scenario.model

    if scenario.dt == "auto":
        dt = auto_dt(state, bath, p, scenario.cfl)
    else:
        dt = float(scenario.dt)

    ws = SolverWorkspace()
    records: list[DiagnosticsRecord] = []
    snapshots: list[int] = []

    def record(st: State):
        h = depth(st.zeta, bath, p)
        records.append(DiagnosticsRecord(
            t=st.t,
            mass=mass(st.zeta),
            energy_Es=energy_Es(st, bath, p, p.s_diag, include_curl=(model == "new_gn")),
            xs_norm=xs_norm(st, p, p.s_diag),
            curl_hs=curl_hs(st.v, p.s_diag),
            min_h=float(h.values.min()),
            cg_iterations=ws.cg_iterations,
        ))

    def snap(st: State, idx: int):
        if snapshot_writer is not None:
            snapshot_writer(st, idx)
            snapshots.append(idx)

    record(state)
    if scenario.snapshot_stride > 0:
        snap(state, 0)
    if scenario.t_end == 0.0:
        return RunResult(state, records, "completed", snapshots)

    termination = "completed"
    step = 0
    while state.t < scenario.t_end - 1e-14:
        step_dt = min(dt, scenario.t_end - state.t)
        ws.cg_iterations = 0
        try:
            state = rk4_step(state, bath, p, model, step_dt,
                             scenario.cg_tol, scenario.cg_max_iter, ws)
        except (DepthViolation, StepRejected):
            termination = "depth_violation"
            break
        except NoConvergence:
            termination = "no_convergence"
            break
        except NonFiniteField:
            termination = "non_finite"
            break
        step += 1
        if xs_norm(state, p, p.s_diag) > scenario.xs_ceiling:
            record(state)
            termination = "norm_blowup"
            break
        if scenario.diagnostics_stride > 0 and step % scenario.diagnostics_stride == 0:
            record(state)
        if scenario.snapshot_stride > 0 and step % scenario.snapshot_stride == 0:
            snap(state, step)

    if termination == "completed":
        if not records or records[-1].t != state.t:
            record(state)
        if scenario.snapshot_stride > 0 and (not snapshots or snapshots[-1] != step):
            snap(state, step)
    return RunResult(state, records, termination, snapshots)
