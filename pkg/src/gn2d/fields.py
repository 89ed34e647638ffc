"""Physical state, bathymetry, parameter bundle, and initial-data generators."""

from __future__ import annotations

from dataclasses import dataclass, field as dfield

import numpy as np

from .errors import DepthViolation
from .grid import (
    Grid,
    ScalarField,
    VectorField,
    field,
    grad,
    perp_grad,
    vector,
    zeros,
)


@dataclass(frozen=True)
class Params:
    """Dimensionless parameter triple plus diagnostic knobs.

    epsilon: nonlinearity (wave amplitude / depth), in (0, 1]
    mu:      shallowness (depth^2 / wavelength^2), in (0, 1]
    beta:    bottom amplitude / depth, in [0, 1]
    s_diag:  Sobolev index used by the diagnostic norms
    h_min_guard: runtime threshold for the non-vanishing depth condition
    """

    epsilon: float
    mu: float
    beta: float = 0.0
    s_diag: float = 3.0
    h_min_guard: float = 0.05

    def __post_init__(self):
        if not (0.0 < self.epsilon <= 1.0):
            raise ValueError(f"epsilon must be in (0, 1], got {self.epsilon}")
        if not (0.0 <= self.mu <= 1.0):
            raise ValueError(f"mu must be in [0, 1], got {self.mu}")
        if not (0.0 <= self.beta <= 1.0):
            raise ValueError(f"beta must be in [0, 1], got {self.beta}")
        if self.s_diag < 0:
            raise ValueError("s_diag must be >= 0")
        if self.h_min_guard <= 0:
            raise ValueError("h_min_guard must be positive")


@dataclass(frozen=True, eq=False)
class Bathymetry:
    """Bottom profile b with cached spectral derivatives.

    The derivative fields are caches, always recomputable from b alone.
    """

    b: ScalarField
    grad_b: VectorField
    b11: ScalarField
    b12: ScalarField
    b22: ScalarField

    @property
    def grid(self) -> Grid:
        return self.b.grid

    @property
    def is_flat(self) -> bool:
        return not np.any(self.b.values)

    @classmethod
    def from_field(cls, b: ScalarField) -> "Bathymetry":
        g = b.grid
        gb = grad(b)
        b1 = gb.v1
        return cls(
            b=b,
            grad_b=gb,
            b11=field(g, g.ddx_arr(b1.values)),
            b12=field(g, g.ddy_arr(b1.values)),
            b22=field(g, g.ddy_arr(gb.v2.values)),
        )


@dataclass(eq=False)
class State:
    """Evolving unknown (zeta, v) at time t."""

    zeta: ScalarField
    v: VectorField
    t: float = 0.0

    @property
    def grid(self) -> Grid:
        return self.zeta.grid


def depth(zeta: ScalarField, bath: Bathymetry, p: Params) -> ScalarField:
    """Total depth h = 1 + eps*zeta - beta*b; raises when the guard is hit."""
    if not zeta.grid.compatible(bath.grid):
        raise ValueError("zeta and bathymetry are not conformable")
    h = 1.0 + p.epsilon * zeta.values - p.beta * bath.b.values
    hmin = float(h.min())
    if hmin < p.h_min_guard:
        raise DepthViolation(f"min depth {hmin:.6g} < guard {p.h_min_guard:.6g}")
    return ScalarField(h, zeta.grid)


# -- bathymetry generators ---------------------------------------------------


def periodized_gaussian(grid: Grid, amplitude: float, width: float,
                        x0: float | None = None, y0: float | None = None) -> np.ndarray:
    """Gaussian bump summed over the 3x3 nearest periodic images.

    Width is capped at Lx/8 so the truncated image tail stays below 1e-12.
    """
    if width <= 0:
        raise ValueError("width must be positive")
    if width > grid.Lx / 8 or width > grid.Ly / 8:
        raise ValueError("gaussian width must be <= L/8 for negligible periodization tail")
    x0 = grid.Lx / 2 if x0 is None else x0
    y0 = grid.Ly / 2 if y0 is None else y0
    out = np.zeros(grid.shape)
    for i in (-1, 0, 1):
        for j in (-1, 0, 1):
            dx = grid.X - x0 - i * grid.Lx
            dy = grid.Y - y0 - j * grid.Ly
            out += np.exp(-(dx ** 2 + dy ** 2) / (2.0 * width ** 2))
    return amplitude * out


def periodized_ridge(grid: Grid, amplitude: float, width: float,
                     x0: float | None = None) -> np.ndarray:
    """y-independent Gaussian ridge in x, periodized the same way."""
    if width <= 0:
        raise ValueError("width must be positive")
    if width > grid.Lx / 8:
        raise ValueError("ridge width must be <= Lx/8")
    x0 = grid.Lx / 2 if x0 is None else x0
    out = np.zeros(grid.nx)
    for i in (-1, 0, 1):
        dx = grid.x - x0 - i * grid.Lx
        out += np.exp(-dx ** 2 / (2.0 * width ** 2))
    return amplitude * np.broadcast_to(out[:, None], grid.shape).copy()


def make_bathymetry(kind: str, grid: Grid, *, amplitude: float = 0.5,
                    width: float | None = None, x0: float | None = None,
                    y0: float | None = None) -> Bathymetry:
    if kind == "flat":
        return Bathymetry.from_field(zeros(grid))
    width = grid.Lx / 12 if width is None else width
    if kind == "gaussian_bump":
        return Bathymetry.from_field(field(grid, periodized_gaussian(grid, amplitude, width, x0, y0)))
    if kind == "ridge":
        return Bathymetry.from_field(field(grid, periodized_ridge(grid, amplitude, width, x0)))
    raise ValueError(f"unknown bathymetry kind {kind!r}")


# -- initial-data generators --------------------------------------------------


def band_limited_field(grid: Grid, rng: np.random.Generator, kcap: int = 4,
                       amplitude: float = 1.0) -> np.ndarray:
    """Random zero-mean field built from explicit low modes.

    Synthesized by direct evaluation of cosines so that the same seed gives
    the same physical field on any resolution (needed by the convergence
    studies).  Modes run over |mx|, my <= kcap.  The peak normalization is
    measured on a fixed 128x128 reference sampling, not on the target grid,
    so the scale factor is resolution independent too.
    """
    modes = []
    two_pi = 2.0 * np.pi
    for mx in range(-kcap, kcap + 1):
        for my in range(0, kcap + 1):
            if my == 0 and mx <= 0:
                continue
            modes.append((mx, my, rng.standard_normal(), rng.uniform(0.0, two_pi)))

    def synth(X, Y):
        out = np.zeros(X.shape)
        for mx, my, amp, phase in modes:
            out += amp * np.cos(two_pi * mx * X / grid.Lx
                                + two_pi * my * Y / grid.Ly + phase)
        return out

    nref = 128
    xr = np.arange(nref) * (grid.Lx / nref)
    yr = np.arange(nref) * (grid.Ly / nref)
    Xr, Yr = np.meshgrid(xr, yr, indexing="ij")
    scale = np.abs(synth(Xr, Yr)).max()
    out = synth(grid.X, grid.Y)
    if scale > 0:
        out *= amplitude / scale
    return out


def solitary_wave_profile(x: np.ndarray, p: Params, amplitude: float,
                          x0: float) -> tuple[np.ndarray, np.ndarray, float]:
    """Classical line solitary wave of the flat-bottom system.

    zeta = a sech^2(kappa (x - x0)), c = sqrt(1 + eps a),
    kappa = sqrt(3 eps a / (4 mu (1 + eps a))), v1 = c zeta / (1 + eps zeta),
    so the mass flux h*v1 equals c*zeta exactly.
    """
    a = amplitude
    eps = p.epsilon
    if p.mu <= 0:
        raise ValueError("solitary wave requires mu > 0")
    c = np.sqrt(1.0 + eps * a)
    kappa = np.sqrt(3.0 * eps * a / (4.0 * p.mu * (1.0 + eps * a)))
    zeta = a / np.cosh(kappa * (x - x0)) ** 2
    v1 = c * zeta / (1.0 + eps * zeta)
    return zeta, v1, float(c)


def make_initial(kind: str, grid: Grid, p: Params, seed: int = 0, *,
                 amplitude: float = 0.5, width: float | None = None,
                 x0: float | None = None, y0: float | None = None,
                 kcap: int = 4, zeta_amplitude: float | None = None,
                 curl_amplitude: float = 0.5,
                 bath: Bathymetry | None = None) -> State:
    """Build an initial State and verify the depth condition on it.

    When `bath` is given the depth guard accounts for the bottom.
    """
    g = grid
    if kind == "gaussian_hump":
        w = g.Lx / 12 if width is None else width
        zeta = field(g, periodized_gaussian(g, amplitude, w, x0, y0))
        v = vector(g, np.zeros(g.shape), np.zeros(g.shape))
    elif kind == "solitary_line_wave":
        xc = g.Lx / 2 if x0 is None else x0
        zx, vx, _ = solitary_wave_profile(g.x, p, amplitude, xc)
        zeta = field(g, np.broadcast_to(zx[:, None], g.shape).copy())
        v = vector(g, np.broadcast_to(vx[:, None], g.shape).copy(), np.zeros(g.shape))
    elif kind in ("random_irrotational", "random_rotational"):
        rng = np.random.default_rng(seed)
        za = amplitude if zeta_amplitude is None else zeta_amplitude
        zeta = field(g, band_limited_field(g, rng, kcap, za))
        psi = field(g, band_limited_field(g, rng, kcap, amplitude))
        v = grad(psi)
        if kind == "random_rotational":
            chi = field(g, band_limited_field(g, rng, kcap, curl_amplitude))
            rot = perp_grad(chi)
            v = vector(g, v.v1.values + rot.v1.values, v.v2.values + rot.v2.values)
    else:
        raise ValueError(f"unknown initial kind {kind!r}")

    bathy = bath if bath is not None else Bathymetry.from_field(zeros(g))
    depth(zeta, bathy, p)  # raises DepthViolation on bad data
    return State(zeta=zeta, v=v, t=0.0)


# -- scenario ------------------------------------------------------------------


@dataclass
class Scenario:
    """Fully resolved run configuration."""

    nx: int = 128
    ny: int = 128
    Lx: float = 2.0 * np.pi
    Ly: float = 2.0 * np.pi
    dealias: bool = True
    params: Params = dfield(default_factory=lambda: Params(epsilon=0.1, mu=0.1))
    bathymetry_kind: str = "flat"
    bathymetry_opts: dict = dfield(default_factory=dict)
    initial_kind: str = "gaussian_hump"
    initial_opts: dict = dfield(default_factory=dict)
    seed: int = 0
    model: str = "new_gn"
    dt: float | str = "auto"
    cfl: float = 0.5
    t_end: float = 1.0
    snapshot_stride: int = 0
    diagnostics_stride: int = 1
    output_dir: str = "out"
    xs_ceiling: float = 1e6
    cg_tol: float = 1e-10
    cg_max_iter: int = 500

    def __post_init__(self):
        if self.model not in ("new_gn", "standard_gn"):
            raise ValueError(f"unknown model {self.model!r}")
        if self.t_end < 0:
            raise ValueError("t_end must be >= 0")
        if isinstance(self.dt, str):
            if self.dt != "auto":
                raise ValueError("dt must be a positive number or 'auto'")
        elif self.dt <= 0:
            raise ValueError("dt must be positive")

    def make_grid(self) -> Grid:
        return Grid(self.nx, self.ny, self.Lx, self.Ly, self.dealias)

    def make_bathymetry(self, grid: Grid) -> Bathymetry:
        return make_bathymetry(self.bathymetry_kind, grid, **self.bathymetry_opts)

    def make_initial(self, grid: Grid, bath: Bathymetry) -> State:
        return make_initial(self.initial_kind, grid, self.params, self.seed,
                            bath=bath, **self.initial_opts)
