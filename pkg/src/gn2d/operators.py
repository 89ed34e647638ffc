"""Matrix-free application of the dispersive operators.

The centerpiece is the curl-augmented operator

    frak_T v = h v + mu (T[h, beta b] v - perp_grad(curl v)),

applied pseudo-spectrally.  Nonlinear products are formed pointwise with
2/3-rule truncation; the truncation projection is arranged symmetrically
(on the divergence and slope factors entering each product) so that the
operator stays exactly self-adjoint on the grid and the coercive quadratic
form below reproduces (frak_T v, v) to round-off.
"""

from __future__ import annotations

import numpy as np

from .errors import DepthViolation
from .fields import Bathymetry, Params
from .grid import (
    Grid,
    ScalarField,
    VectorField,
    curl,
    field,
    grad,
    inner_vec,
    l2_norm,
    vector,
)

_rfft2 = np.fft.rfft2
_irfft2 = np.fft.irfft2

SQRT3 = np.sqrt(3.0)


class OperatorContext:
    """Frozen coefficients (h, bathymetry, parameters) for one operator state."""

    def __init__(self, h: ScalarField, bath: Bathymetry, p: Params, include_curl: bool):
        if not h.grid.compatible(bath.grid):
            raise ValueError("h and bathymetry are not conformable")
        hmin = float(h.values.min())
        if hmin < p.h_min_guard:
            raise DepthViolation(f"min depth {hmin:.6g} < guard {p.h_min_guard:.6g}")
        self.grid: Grid = h.grid
        self.h = h
        self.bath = bath
        self.p = p
        self.include_curl = bool(include_curl)
        self.h_arr = h.values
        self.h2 = h.values ** 2
        self.h3 = h.values ** 3
        self.h_mean = float(h.values.mean())
        self.flat = bath.is_flat
        self.gb1 = bath.grad_b.v1.values
        self.gb2 = bath.grad_b.v2.values


def _em_factors(ctx: OperatorContext, w1: np.ndarray, w2: np.ndarray,
                w1h=None, w2h=None):
    """Dealiased divergence e = P(div w) and slope factor m = P(grad b . w)."""
    g = ctx.grid
    if w1h is None:
        w1h = _rfft2(w1)
    if w2h is None:
        w2h = _rfft2(w2)
    eh = g.dealias_hat(1j * g.KXd * w1h + 1j * g.KYd * w2h)
    e = _irfft2(eh, s=g.shape)
    if ctx.flat:
        m = None
    else:
        m = ctx.gb1 * w1 + ctx.gb2 * w2
        if g.dealias:
            m = _irfft2(g.dealias_hat(_rfft2(m)), s=g.shape)
    return e, m


def _apply_T_arrays(ctx: OperatorContext, w1: np.ndarray, w2: np.ndarray):
    """T[h, beta b] acting on raw component arrays."""
    g = ctx.grid
    beta = ctx.p.beta
    e, m = _em_factors(ctx, w1, w2)
    pfield = ctx.h3 * e / 3.0
    if m is not None:
        pfield = pfield - 0.5 * beta * ctx.h2 * m
    ph = g.dealias_hat(_rfft2(pfield))
    out1 = _irfft2(-1j * g.KXd * ph, s=g.shape)
    out2 = _irfft2(-1j * g.KYd * ph, s=g.shape)
    if m is not None:
        q = -0.5 * beta * ctx.h2 * e + beta ** 2 * ctx.h_arr * m
        if g.dealias:
            q = _irfft2(g.dealias_hat(_rfft2(q)), s=g.shape)
        out1 += ctx.gb1 * q
        out2 += ctx.gb2 * q
    return out1, out2


def apply_T(ctx: OperatorContext, W: VectorField) -> VectorField:
    """Dispersive operator of the momentum equation (without the mu factor)."""
    o1, o2 = _apply_T_arrays(ctx, W.v1.values, W.v2.values)
    return vector(ctx.grid, o1, o2)


def apply_curl_correction(W: VectorField) -> VectorField:
    """perp_grad(curl W); vanishes on gradient fields."""
    g = W.grid
    w1h = _rfft2(W.v1.values)
    w2h = _rfft2(W.v2.values)
    ch = 1j * g.KXd * w2h - 1j * g.KYd * w1h
    return vector(g, _irfft2(-1j * g.KYd * ch, s=g.shape), _irfft2(1j * g.KXd * ch, s=g.shape))


def apply_frak_T_arrays(ctx: OperatorContext, w: np.ndarray) -> np.ndarray:
    """Fused application of frak_T to a stacked (2, nx, ny) array.

    This is the conjugate-gradient hot path: transforms of the input are
    shared between the dispersive and curl pieces.
    """
    g = ctx.grid
    mu = ctx.p.mu
    w1, w2 = w[0], w[1]
    if mu == 0.0:
        return np.stack([ctx.h_arr * w1, ctx.h_arr * w2])
    beta = ctx.p.beta
    w1h = _rfft2(w1)
    w2h = _rfft2(w2)
    e, m = _em_factors(ctx, w1, w2, w1h, w2h)
    pfield = ctx.h3 * e / 3.0
    if m is not None:
        pfield = pfield - 0.5 * beta * ctx.h2 * m
    ph = g.dealias_hat(_rfft2(pfield))
    out1h = -1j * mu * g.KXd * ph
    out2h = -1j * mu * g.KYd * ph
    if ctx.include_curl:
        ch = 1j * g.KXd * w2h - 1j * g.KYd * w1h
        out1h += 1j * mu * g.KYd * ch
        out2h += -1j * mu * g.KXd * ch
    out1 = _irfft2(out1h, s=g.shape) + ctx.h_arr * w1
    out2 = _irfft2(out2h, s=g.shape) + ctx.h_arr * w2
    if m is not None:
        q = -0.5 * beta * ctx.h2 * e + beta ** 2 * ctx.h_arr * m
        if g.dealias:
            q = _irfft2(g.dealias_hat(_rfft2(q)), s=g.shape)
        out1 += mu * ctx.gb1 * q
        out2 += mu * ctx.gb2 * q
    return np.stack([out1, out2])


def apply_frak_T(ctx: OperatorContext, v: VectorField) -> VectorField:
    out = apply_frak_T_arrays(ctx, v.arrays())
    return vector(ctx.grid, out[0], out[1])


def coercive_form(ctx: OperatorContext, v: VectorField) -> float:
    """Exact quadratic decomposition of (frak_T v, v).

    (h v, v) + mu (h (h/sqrt3 div v - beta sqrt3/2 grad_b.v), same)
             + mu beta^2 / 4 (h grad_b.v, grad_b.v) + mu |curl v|_2^2.
    """
    g = ctx.grid
    mu = ctx.p.mu
    beta = ctx.p.beta
    w1, w2 = v.v1.values, v.v2.values
    total = g.integrate(ctx.h_arr * (w1 ** 2 + w2 ** 2))
    if mu > 0.0:
        e, m = _em_factors(ctx, w1, w2)
        d = ctx.h_arr * e / SQRT3
        if m is not None:
            d = d - 0.5 * SQRT3 * beta * m
        total += mu * g.integrate(ctx.h_arr * d ** 2)
        if m is not None:
            total += 0.25 * mu * beta ** 2 * g.integrate(ctx.h_arr * m ** 2)
        if ctx.include_curl:
            total += mu * l2_norm(curl(v)) ** 2
    return float(total)


# -- quadratic source terms of the condensed evolution form -------------------


def _qprod(ctx: OperatorContext, v: VectorField, f: VectorField) -> np.ndarray:
    """Dealiased  -d1 v . d2 f_perp - (div v)(div f)  as a raw array."""
    g = ctx.grid
    d1v1 = g.ddx_arr(v.v1.values)
    d1v2 = g.ddx_arr(v.v2.values)
    d2v1 = g.ddy_arr(v.v1.values)
    d2v2 = g.ddy_arr(v.v2.values)
    if f is v:
        d1f1, d1f2, d2f1, d2f2 = d1v1, d1v2, d2v1, d2v2
    else:
        d1f1 = g.ddx_arr(f.v1.values)
        d1f2 = g.ddx_arr(f.v2.values)
        d2f1 = g.ddy_arr(f.v1.values)
        d2f2 = g.ddy_arr(f.v2.values)
    # -d1 v . d2 f_perp = d1V1 d2F2 - d1V2 d2F1
    prod = d1v1 * d2f2 - d1v2 * d2f1 - (d1v1 + d2v2) * (d1f1 + d2f2)
    return g.dealias_arr(prod)


def _bcurv(ctx: OperatorContext, v: VectorField, f: VectorField) -> np.ndarray:
    """Dealiased bottom-curvature form V1 F1 b11 + 2 V1 F2 b12 + V2 F2 b22."""
    g = ctx.grid
    out = (v.v1.values * f.v1.values * ctx.bath.b11.values
           + 2.0 * v.v1.values * f.v2.values * ctx.bath.b12.values
           + v.v2.values * f.v2.values * ctx.bath.b22.values)
    return g.dealias_arr(out)


def compute_Q(ctx: OperatorContext, v: VectorField) -> ScalarField:
    """Q = h^3 (-d1 v . d2 v_perp - (div v)^2), dealiased."""
    g = ctx.grid
    return field(g, g.dealias_arr(ctx.h3 * _qprod(ctx, v, v)))


def apply_R1(ctx: OperatorContext, v_ref: VectorField, f: VectorField) -> VectorField:
    """Linear-in-f part of the quadratic source, frozen at reference velocity v_ref."""
    g = ctx.grid
    beta = ctx.p.beta
    qp = _qprod(ctx, v_ref, f)
    quf = g.dealias_arr(ctx.h3 * qp)
    out = grad(field(g, quf))
    o1 = -(2.0 / 3.0) * out.v1.values
    o2 = -(2.0 / 3.0) * out.v2.values
    if not ctx.flat:
        gAM = g.dealias_arr(ctx.h2 * _bcurv(ctx, v_ref, f))
        gterm = grad(field(g, gAM))
        o1 += 0.5 * beta * gterm.v1.values
        o2 += 0.5 * beta * gterm.v2.values
        hq = g.dealias_arr(ctx.h2 * qp)
        o1 -= beta * ctx.gb1 * hq
        o2 -= beta * ctx.gb2 * hq
    return vector(g, o1, o2)


def compute_r2(ctx: OperatorContext, v: VectorField) -> VectorField:
    """Residual quadratic source; identically zero over a flat bottom."""
    g = ctx.grid
    if ctx.flat:
        z = np.zeros(g.shape)
        return vector(g, z, z)
    beta = ctx.p.beta
    hg = g.dealias_arr(ctx.h_arr * _bcurv(ctx, v, v))
    return vector(g, beta ** 2 * ctx.gb1 * hg, beta ** 2 * ctx.gb2 * hg)


def compute_R_topo(ctx: OperatorContext, v: VectorField) -> VectorField:
    """Purely topographic source of the momentum equation."""
    g = ctx.grid
    if ctx.flat:
        z = np.zeros(g.shape)
        return vector(g, z, z)
    beta = ctx.p.beta
    qp = _qprod(ctx, v, v)          # equals -(d1 v . d2 v_perp + (div v)^2)
    bc = _bcurv(ctx, v, v)
    gterm = grad(field(g, g.dealias_arr(ctx.h2 * bc)))
    hq = g.dealias_arr(ctx.h2 * qp)
    hg = g.dealias_arr(ctx.h_arr * bc)
    o1 = 0.5 * beta * gterm.v1.values - beta * ctx.gb1 * hq + beta ** 2 * ctx.gb1 * hg
    o2 = 0.5 * beta * gterm.v2.values - beta * ctx.gb2 * hq + beta ** 2 * ctx.gb2 * hg
    return vector(g, o1, o2)


def frak_T_quadratic(ctx: OperatorContext, v: VectorField, w: VectorField) -> float:
    """(frak_T v, w) through the operator, for adjointness checks."""
    return inner_vec(apply_frak_T(ctx, v), w)
