"""Scalar functionals of the state: mass, energy, norms, and reconstructions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import Bathymetry, Params, State, depth
from .grid import (
    ScalarField,
    VectorField,
    curl,
    div,
    hs_norm,
    inner_vec,
    lambda_s,
    vector,
)
from .operators import OperatorContext, _apply_T_arrays, apply_frak_T


@dataclass
class DiagnosticsRecord:
    t: float
    mass: float
    energy_Es: float
    xs_norm: float
    curl_hs: float
    min_h: float
    cg_iterations: int


def mass(zeta: ScalarField) -> float:
    """Grid integral of the surface elevation (exactly conserved in time)."""
    return zeta.grid.integrate(zeta.values)


def _lambda_s_vec(v: VectorField, s: float) -> VectorField:
    g = v.grid
    return vector(g, g.lambda_s_arr(v.v1.values, s), g.lambda_s_arr(v.v2.values, s))


def energy_Es(state: State, bath: Bathymetry, p: Params, s: float,
              include_curl: bool = True) -> float:
    """sqrt(|zeta|_Hs^2 + (Lambda^s v, frak_T Lambda^s v)) at the state's own depth."""
    h = depth(state.zeta, bath, p)
    ctx = OperatorContext(h, bath, p, include_curl=include_curl)
    lv = _lambda_s_vec(state.v, s)
    quad = inner_vec(lv, apply_frak_T(ctx, lv))
    return float(np.sqrt(hs_norm(state.zeta, s) ** 2 + max(quad, 0.0)))


def xs_norm(state: State, p: Params, s: float) -> float:
    """Energy norm: Hs norms of zeta and v plus mu-weighted div and curl terms."""
    v = state.v
    total = (hs_norm(state.zeta, s) ** 2
             + hs_norm(v.v1, s) ** 2 + hs_norm(v.v2, s) ** 2)
    if p.mu > 0.0:
        total += p.mu * hs_norm(div(v), s) ** 2
        total += p.mu * hs_norm(curl(v), s) ** 2
    return float(np.sqrt(total))


def curl_hs(v: VectorField, s: float) -> float:
    return hs_norm(curl(v), s)


def curl_tendency_residual(state: State, bath: Bathymetry, p: Params, model: str = "new_gn") -> float:
    """|curl d_v|_2 of the instantaneous tendency.

    Scales like mu for nearly irrotational states; O(1) for rotational ones.
    """
    from .dynamics import rhs  # local import to avoid a module cycle

    tend = rhs(state, bath, p, model)
    return hs_norm(curl(tend.d_v), 0.0)


def reconstruct_grad_psi(state: State, bath: Bathymetry, p: Params,
                         iterations: int = 1) -> VectorField:
    """Surface potential gradient via Picard iterates of
    grad psi = v + (mu/h) T[h, beta b] grad psi, truncated at `iterations`."""
    h = depth(state.zeta, bath, p)
    ctx = OperatorContext(h, bath, p, include_curl=False)
    g = state.grid
    gp = state.v.arrays()
    v_arr = state.v.arrays()
    for _ in range(iterations):
        t1, t2 = _apply_T_arrays(ctx, gp[0], gp[1])
        gp = np.stack([v_arr[0] + p.mu * t1 / h.values,
                       v_arr[1] + p.mu * t2 / h.values])
    return vector(g, gp[0], gp[1])
