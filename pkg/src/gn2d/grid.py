"""Doubly-periodic rectangular grid with spectral calculus.

Fields are nx-by-ny float64 arrays, row-major, with axis 0 along x and
axis 1 along y.  Derivatives are exact Fourier-symbol derivatives with the
Nyquist mode of the multiplier zeroed, which keeps derivatives of real
fields real and makes discrete integration by parts exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonFiniteField

_rfft2 = np.fft.rfft2
_irfft2 = np.fft.irfft2


class Grid:
    """Uniform periodic grid plus cached Fourier machinery.

    nx, ny must be even and >= 8 (real-to-complex transform symmetry).
    `dealias` enables 2/3-rule truncation of nonlinear products.
    """

    def __init__(self, nx: int, ny: int, Lx: float, Ly: float, dealias: bool = True):
        if nx < 8 or ny < 8 or nx % 2 or ny % 2:
            raise ValueError("nx and ny must be even integers >= 8")
        if Lx <= 0 or Ly <= 0:
            raise ValueError("Lx and Ly must be positive")
        self.nx = int(nx)
        self.ny = int(ny)
        self.Lx = float(Lx)
        self.Ly = float(Ly)
        self.dealias = bool(dealias)
        self.dx = self.Lx / self.nx
        self.dy = self.Ly / self.ny
        self.shape = (self.nx, self.ny)

        self.x = self.dx * np.arange(self.nx)
        self.y = self.dy * np.arange(self.ny)
        self.X, self.Y = np.meshgrid(self.x, self.y, indexing="ij")

        kx = 2.0 * np.pi * np.fft.fftfreq(self.nx, d=self.dx)
        ky = 2.0 * np.pi * np.fft.rfftfreq(self.ny, d=self.dy)
        # Full wavenumbers (Nyquist included) for Fourier multipliers.
        self.KX = kx[:, None]
        self.KY = ky[None, :]
        self.K2 = self.KX ** 2 + self.KY ** 2
        # Derivative wavenumbers: Nyquist zeroed for real, skew-symmetric d/dx.
        kxd = kx.copy()
        kxd[self.nx // 2] = 0.0
        kyd = ky.copy()
        kyd[-1] = 0.0
        self.KXd = kxd[:, None]
        self.KYd = kyd[None, :]

        kx_cut = (2.0 / 3.0) * np.pi * self.nx / self.Lx
        ky_cut = (2.0 / 3.0) * np.pi * self.ny / self.Ly
        eps = 1.0 + 1e-12
        self.mask23 = (np.abs(self.KX) <= kx_cut * eps) & (np.abs(self.KY) <= ky_cut * eps)

    # -- identity / conformability ------------------------------------------

    def spec(self):
        return (self.nx, self.ny, self.Lx, self.Ly, self.dealias)

    def compatible(self, other: "Grid") -> bool:
        return self is other or self.spec() == other.spec()

    def __repr__(self):
        return f"Grid(nx={self.nx}, ny={self.ny}, Lx={self.Lx}, Ly={self.Ly}, dealias={self.dealias})"

    # -- array-level spectral primitives (hot paths work on raw arrays) -----

    def ddx_arr(self, a: np.ndarray) -> np.ndarray:
        return _irfft2(1j * self.KXd * _rfft2(a), s=self.shape)

    def ddy_arr(self, a: np.ndarray) -> np.ndarray:
        return _irfft2(1j * self.KYd * _rfft2(a), s=self.shape)

    def dealias_arr(self, a: np.ndarray) -> np.ndarray:
        if not self.dealias:
            return a
        return _irfft2(self.mask23 * _rfft2(a), s=self.shape)

    def dealias_hat(self, ah: np.ndarray) -> np.ndarray:
        if not self.dealias:
            return ah
        return self.mask23 * ah

    def lambda_s_arr(self, a: np.ndarray, s: float) -> np.ndarray:
        if s == 0:
            return a.copy()
        mult = (1.0 + self.K2) ** (0.5 * s)
        return _irfft2(mult * _rfft2(a), s=self.shape)

    def integrate(self, a: np.ndarray) -> float:
        return float(self.dx * self.dy * np.sum(a))


def _check_finite(values: np.ndarray):
    if not np.all(np.isfinite(values)):
        raise NonFiniteField("field contains NaN or Inf entries")


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Real field sampled on a Grid."""

    values: np.ndarray
    grid: Grid

    def __post_init__(self):
        if self.values.shape != self.grid.shape:
            raise ValueError(f"field shape {self.values.shape} != grid shape {self.grid.shape}")
        _check_finite(self.values)


@dataclass(frozen=True, eq=False)
class VectorField:
    """Pair of conformable scalar components (V1, V2)."""

    v1: ScalarField
    v2: ScalarField

    def __post_init__(self):
        if not self.v1.grid.compatible(self.v2.grid):
            raise ValueError("vector components live on different grids")

    @property
    def grid(self) -> Grid:
        return self.v1.grid

    def perp(self) -> "VectorField":
        """Rotate by +90 degrees: (V1, V2) -> (-V2, V1)."""
        g = self.grid
        return VectorField(ScalarField(-self.v2.values, g), ScalarField(self.v1.values.copy(), g))

    def arrays(self) -> np.ndarray:
        return np.stack([self.v1.values, self.v2.values])


def field(grid: Grid, values: np.ndarray) -> ScalarField:
    return ScalarField(np.asarray(values, dtype=float), grid)


def vector(grid: Grid, a1: np.ndarray, a2: np.ndarray) -> VectorField:
    return VectorField(field(grid, a1), field(grid, a2))


def zeros(grid: Grid) -> ScalarField:
    return ScalarField(np.zeros(grid.shape), grid)


def _require_conformable(f: ScalarField, g: ScalarField):
    if not f.grid.compatible(g.grid):
        raise ValueError("fields are not conformable")


# -- differential operators --------------------------------------------------


def ddx(f: ScalarField) -> ScalarField:
    return ScalarField(f.grid.ddx_arr(f.values), f.grid)


def ddy(f: ScalarField) -> ScalarField:
    return ScalarField(f.grid.ddy_arr(f.values), f.grid)


def grad(f: ScalarField) -> VectorField:
    return VectorField(ddx(f), ddy(f))


def div(v: VectorField) -> ScalarField:
    g = v.grid
    return ScalarField(g.ddx_arr(v.v1.values) + g.ddy_arr(v.v2.values), g)


def curl(v: VectorField) -> ScalarField:
    g = v.grid
    return ScalarField(g.ddx_arr(v.v2.values) - g.ddy_arr(v.v1.values), g)


def perp_grad(f: ScalarField) -> VectorField:
    """The rotated gradient (-d/dy, d/dx)."""
    return VectorField(ScalarField(-f.grid.ddy_arr(f.values), f.grid), ddx(f))


def laplacian(f: ScalarField) -> ScalarField:
    g = f.grid
    mult = -(g.KXd ** 2 + g.KYd ** 2)
    return ScalarField(_irfft2(mult * _rfft2(f.values), s=g.shape), g)


def lambda_s(f: ScalarField, s: float) -> ScalarField:
    """Bessel-potential multiplier (1 + |k|^2)^(s/2)."""
    return ScalarField(f.grid.lambda_s_arr(f.values, s), f.grid)


def dealias(f: ScalarField) -> ScalarField:
    return ScalarField(f.grid.dealias_arr(f.values), f.grid)


# -- quadrature and norms ----------------------------------------------------


def inner(f: ScalarField, g: ScalarField) -> float:
    _require_conformable(f, g)
    return f.grid.integrate(f.values * g.values)


def l2_norm(f: ScalarField) -> float:
    return float(np.sqrt(max(inner(f, f), 0.0)))


def hs_norm(f: ScalarField, s: float) -> float:
    return l2_norm(lambda_s(f, s))


def inner_vec(u: VectorField, w: VectorField) -> float:
    return inner(u.v1, w.v1) + inner(u.v2, w.v2)


def l2_norm_vec(u: VectorField) -> float:
    return float(np.sqrt(max(inner_vec(u, u), 0.0)))
