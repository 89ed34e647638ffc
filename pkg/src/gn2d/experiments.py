"""Verification experiments: operator identity suite and scaling studies."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .diagnostics import xs_norm
from .dynamics import run
from .elliptic import invert_frak_T
from .fields import (
    Params,
    Scenario,
    State,
    band_limited_field,
    depth,
    make_bathymetry,
)
from .grid import (
    Grid,
    curl,
    div,
    field,
    grad,
    inner_vec,
    l2_norm,
    l2_norm_vec,
    vector,
)
from .operators import (
    OperatorContext,
    apply_R1,
    apply_frak_T,
    coercive_form,
    compute_Q,
    compute_R_topo,
    compute_r2,
)


def fit_loglog_slope(xs, ys) -> float:
    """Ordinary least squares slope on (log x, log y).

    The plotting component uses the identical formula; agreement between the
    two is itself a cross-component test.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.size < 2:
        raise ValueError("slope fit needs at least two points")
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


# -- operator identity suite ---------------------------------------------------


@dataclass
class CheckResult:
    name: str
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.value < self.tolerance


def run_operator_checks(seed: int = 0, n: int = 48, corrupt: str | None = None) -> list[CheckResult]:
    """Self-adjointness, coercivity, decomposition, identity (25), inversion
    round-trip, and the quadratic-source decomposition, on seeded random
    smooth inputs.  `corrupt` is a test hook that perturbs one check."""
    g = Grid(n, n, 2.0 * np.pi, 2.0 * np.pi)
    rng = np.random.default_rng(seed)
    p = Params(epsilon=0.3, mu=0.1, beta=0.3)
    zeta = field(g, band_limited_field(g, rng, 3, 0.5))
    bath = make_bathymetry("gaussian_bump", g, amplitude=0.4, width=g.Lx / 10)
    h = depth(zeta, bath, p)
    v = vector(g, band_limited_field(g, rng, 3), band_limited_field(g, rng, 3))
    w = vector(g, band_limited_field(g, rng, 3), band_limited_field(g, rng, 3))

    def bump(name, x):
        return x + 1.0 if corrupt == name else x

    results = []

    worst = 0.0
    for include_curl in (True, False):
        ctx = OperatorContext(h, bath, p, include_curl)
        a = inner_vec(apply_frak_T(ctx, v), w)
        b = inner_vec(v, apply_frak_T(ctx, w))
        worst = max(worst, abs(a - b) / (l2_norm_vec(v) * l2_norm_vec(w)))
    results.append(CheckResult("self_adjointness", bump("self_adjointness", worst), 1e-11))

    ctx = OperatorContext(h, bath, p, include_curl=True)
    quad = inner_vec(apply_frak_T(ctx, v), v)
    hmin = float(h.values.min())
    slack = quad - hmin * l2_norm_vec(v) ** 2
    results.append(CheckResult("coercivity", bump("coercivity", max(0.0, -slack)), 1e-10))

    cf = coercive_form(ctx, v)
    results.append(CheckResult("coercive_decomposition",
                               bump("coercive_decomposition", abs(quad - cf) / abs(quad)), 1e-10))

    lhs = l2_norm_vec(grad(v.v1)) ** 2 + l2_norm_vec(grad(v.v2)) ** 2
    rhs = l2_norm(div(v)) ** 2 + l2_norm(curl(v)) ** 2
    results.append(CheckResult("grad_splitting_identity", bump("grad_splitting_identity", abs(lhs - rhs) / lhs), 1e-11))

    lhsf = apply_R1(ctx, v, v).arrays() + compute_r2(ctx, v).arrays()
    rhsf = -(2.0 / 3.0) * grad(compute_Q(ctx, v)).arrays() + compute_R_topo(ctx, v).arrays()
    scale = np.abs(rhsf).max()
    results.append(CheckResult("r1_r2_decomposition",
                               bump("r1_r2_decomposition", float(np.abs(lhsf - rhsf).max() / scale)),
                               1e-10))

    u, _ = invert_frak_T(ctx, v, tol=1e-12, max_iter=500)
    back = apply_frak_T(ctx, u)
    err = l2_norm_vec(vector(g, back.v1.values - v.v1.values,
                             back.v2.values - v.v2.values)) / l2_norm_vec(v)
    results.append(CheckResult("inversion_round_trip", bump("inversion_round_trip", err), 1e-9))
    return results


def format_check_table(results: list[CheckResult]) -> str:
    lines = [f"{'check':<26}{'value':>14}{'tolerance':>12}  status"]
    for r in results:
        lines.append(f"{r.name:<26}{r.value:>14.3e}{r.tolerance:>12.0e}  "
                     + ("pass" if r.passed else "FAIL"))
    return "\n".join(lines)


# -- scaling experiments --------------------------------------------------------


def curl_scaling_experiment(base: Scenario, mu_values) -> tuple[list[tuple[float, float]], float]:
    """Max-over-time Hs curl norm for each mu; returns ((mu, value) rows, slope)."""
    if len(mu_values) < 2:
        raise ValueError("curl scaling sweep needs at least two mu values")
    rows = []
    for mu in mu_values:
        sc = dataclasses.replace(base, params=dataclasses.replace(base.params, mu=mu))
        res = run(sc)
        if res.termination != "completed":
            raise RuntimeError(f"sweep member mu={mu} terminated early: {res.termination}")
        rows.append((mu, max(r.curl_hs for r in res.records)))
    slope = fit_loglog_slope([r[0] for r in rows], [r[1] for r in rows])
    return rows, slope


def compare_models_experiment(base: Scenario, mu_values) -> tuple[list[tuple[float, float]], float]:
    """X0-norm difference between the curl-augmented and standard trajectories
    at t_end, for each mu; returns ((mu, diff) rows, slope)."""
    if len(mu_values) < 2:
        raise ValueError("model comparison sweep needs at least two mu values")
    rows = []
    for mu in mu_values:
        finals = {}
        for model in ("new_gn", "standard_gn"):
            sc = dataclasses.replace(base, model=model,
                                     params=dataclasses.replace(base.params, mu=mu))
            res = run(sc)
            if res.termination != "completed":
                raise RuntimeError(f"sweep member mu={mu} model={model} "
                                   f"terminated early: {res.termination}")
            finals[model] = res.state
        a, b = finals["new_gn"], finals["standard_gn"]
        g = a.grid
        diff = State(field(g, a.zeta.values - b.zeta.values),
                     vector(g, a.v.v1.values - b.v.v1.values,
                            a.v.v2.values - b.v.v2.values))
        rows.append((mu, xs_norm(diff, dataclasses.replace(base.params, mu=mu), 0.0)))
    slope = fit_loglog_slope([r[0] for r in rows], [r[1] for r in rows])
    return rows, slope


# -- convergence studies ---------------------------------------------------------


ERROR_FLOOR = 1e-13


def temporal_convergence(base: Scenario, dt0: float | None = None) -> dict:
    """Richardson self-convergence of the RK4 step: runs with dt, dt/2, dt/4
    and fits the observed order from consecutive differences."""
    grid = base.make_grid()
    bath = base.make_bathymetry(grid)
    state0 = base.make_initial(grid, bath)
    if dt0 is None:
        from .dynamics import auto_dt
        dt0 = auto_dt(state0, bath, base.params, base.cfl)
    finals = []
    for k in range(3):
        sc = dataclasses.replace(base, dt=dt0 / 2 ** k, diagnostics_stride=0,
                                 snapshot_stride=0)
        res = run(sc)
        if res.termination != "completed":
            raise RuntimeError(f"temporal study member dt={dt0 / 2 ** k} "
                               f"terminated early: {res.termination}")
        finals.append(res.state)
    def gap(a, b):
        return float(np.abs(a.zeta.values - b.zeta.values).max())
    e1 = gap(finals[0], finals[1])
    e2 = gap(finals[1], finals[2])
    if e1 < ERROR_FLOOR and e2 < ERROR_FLOOR:
        return {"degenerate": True, "dt0": dt0, "errors": [e1, e2], "order": None}
    order = float(np.log2(e1 / e2))
    return {"degenerate": False, "dt0": dt0, "errors": [e1, e2], "order": order}


def spatial_convergence(base: Scenario, resolutions=(64, 128, 256)) -> dict:
    """Spectral-accuracy check: error against the finest grid, restricted to
    the coarsest grid's points (grids nest when resolutions double)."""
    n_coarse, n_mid, n_ref = resolutions
    finals = {}
    for n in resolutions:
        sc = dataclasses.replace(base, nx=n, ny=n, diagnostics_stride=0,
                                 snapshot_stride=0)
        res = run(sc)
        if res.termination != "completed":
            raise RuntimeError(f"spatial study member n={n} terminated early: "
                               f"{res.termination}")
        finals[n] = res.state.zeta.values

    def restrict(arr, n_from, n_to):
        step = n_from // n_to
        return arr[::step, ::step]

    ref_c = restrict(finals[n_ref], n_ref, n_coarse)
    e_coarse = float(np.abs(finals[n_coarse] - ref_c).max())
    e_mid = float(np.abs(restrict(finals[n_mid], n_mid, n_coarse) - ref_c).max())
    if e_coarse < ERROR_FLOOR and e_mid < ERROR_FLOOR:
        return {"degenerate": True, "errors": [e_coarse, e_mid], "ratio": None}
    ratio = e_coarse / max(e_mid, 1e-300)
    return {"degenerate": False, "errors": [e_coarse, e_mid], "ratio": float(ratio)}
