"""Matrix-free preconditioned conjugate gradients for the dispersive operator.

The operator is self-adjoint and coercive (its quadratic form is bounded
below by h_min |v|^2), so plain CG applies.  The preconditioner is the
exact inverse of the constant-coefficient surrogate

    M = h_bar I + mu ((h_bar^3 / 3)(-grad div) + (-perp_grad curl)),

which diagonalizes per wavevector on the longitudinal/transverse split and
absorbs the mu-stiffness of the high modes.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield

import numpy as np

from .errors import NoConvergence
from .fields import Params
from .grid import Grid, VectorField, vector
from .operators import OperatorContext, apply_frak_T_arrays

_rfft2 = np.fft.rfft2
_irfft2 = np.fft.irfft2


@dataclass
class SolveReport:
    iterations: int
    final_residual: float
    converged: bool
    residual_history: list = dfield(default_factory=list)


def precondition_arrays(grid: Grid, p: Params, h_bar: float, f: np.ndarray) -> np.ndarray:
    """Apply M^{-1} to a stacked (2, nx, ny) array."""
    mu = p.mu
    f1h = _rfft2(f[0])
    f2h = _rfft2(f[1])
    if mu == 0.0:
        return f / h_bar
    kx, ky = grid.KXd, grid.KYd
    k2 = kx ** 2 + ky ** 2
    k2safe = np.where(k2 > 0.0, k2, 1.0)
    dot = kx * f1h + ky * f2h
    l1 = kx * dot / k2safe
    l2 = ky * dot / k2safe
    a_lon = h_bar + mu * h_bar ** 3 * k2 / 3.0
    a_trn = h_bar + mu * k2
    u1h = l1 / a_lon + (f1h - l1) / a_trn
    u2h = l2 / a_lon + (f2h - l2) / a_trn
    return np.stack([_irfft2(u1h, s=grid.shape), _irfft2(u2h, s=grid.shape)])


def precondition(grid: Grid, p: Params, h_bar: float, f: VectorField) -> VectorField:
    out = precondition_arrays(grid, p, h_bar, f.arrays())
    return vector(grid, out[0], out[1])


def invert_frak_T_arrays(ctx: OperatorContext, b: np.ndarray, tol: float = 1e-10,
                         max_iter: int = 500, x0: np.ndarray | None = None
                         ) -> tuple[np.ndarray, SolveReport]:
    """Solve frak_T u = b with preconditioned CG on stacked arrays."""
    g = ctx.grid
    cell = g.dx * g.dy

    def nrm(a):
        return float(np.sqrt(cell * np.sum(a * a)))

    bnorm = nrm(b)
    if bnorm == 0.0:
        return np.zeros_like(b), SolveReport(0, 0.0, True)
    if ctx.p.mu == 0.0:
        # frak_T degenerates to pointwise multiplication by h.
        u = b / ctx.h_arr
        res = nrm(apply_frak_T_arrays(ctx, u) - b) / bnorm
        return u, SolveReport(0, res, True)

    if x0 is None:
        x = np.zeros_like(b)
        r = b.copy()
    else:
        x = x0.copy()
        r = b - apply_frak_T_arrays(ctx, x)
    z = precondition_arrays(g, ctx.p, ctx.h_mean, r)
    d = z.copy()
    rz = float(np.sum(r * z))
    history = [nrm(r) / bnorm]
    if history[-1] <= tol:
        return x, SolveReport(0, history[-1], True, history)
    for it in range(1, max_iter + 1):
        ad = apply_frak_T_arrays(ctx, d)
        alpha = rz / float(np.sum(d * ad))
        x += alpha * d
        r -= alpha * ad
        rel = nrm(r) / bnorm
        history.append(rel)
        if rel <= tol:
            return x, SolveReport(it, rel, True, history)
        z = precondition_arrays(g, ctx.p, ctx.h_mean, r)
        rz_new = float(np.sum(r * z))
        d = z + (rz_new / rz) * d
        rz = rz_new
    report = SolveReport(max_iter, history[-1], False, history)
    raise NoConvergence(f"CG stalled at relative residual {history[-1]:.3e} "
                        f"after {max_iter} iterations", report=report)


def invert_frak_T(ctx: OperatorContext, f: VectorField, tol: float = 1e-10,
                  max_iter: int = 500, x0: VectorField | None = None
                  ) -> tuple[VectorField, SolveReport]:
    b = f.arrays()
    guess = x0.arrays() if x0 is not None else None
    u, report = invert_frak_T_arrays(ctx, b, tol, max_iter, guess)
    return vector(ctx.grid, u[0], u[1]), report
