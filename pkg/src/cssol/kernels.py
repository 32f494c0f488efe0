"""Singular-kernel integral operators on grid fields.

Implements the logarithmic potential Phi[rho], the perpendicular Riesz-type
vector potential A[rho], and the dotted adjoint-type operator A*[F], all as
the discrete sums

    sum_j  Kbar(x_i - y_j) * field(y_j) * h^2

with Kbar the exact cell average of the kernel near the singularity and the
midpoint kernel value elsewhere (both kernels are harmonic away from 0, so
midpoint = cell average + O(h^4) there). The sums are evaluated by
zero-padded FFT linear convolution, which reproduces the direct blocked
summation exactly up to rounding, without periodic aliasing.

Self-cell rule: log|x| gets its exact analytic cell integral; the components
of the A kernel are odd, so their principal-value self-cell contribution is
exactly zero.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy import integrate as _sint
from scipy.signal import fftconvolve

from .grid import Grid, GridField

# offsets within this Chebyshev radius of the singular cell get exact
# cell-averaged kernel values
_NEAR = 2


@lru_cache(maxsize=None)
def _unit_cell_log(i: int, j: int) -> float:
    """integral of log|x| over the unit cell centered at (i, j), spacing 1."""
    if i == 0 and j == 0:
        # singular cell in polar coordinates: 8 * int_0^{pi/4} int_0^{sec/2}
        # r log r dr dtheta, inner integral in closed form
        def octant(theta):
            R = 0.5 / np.cos(theta)
            return 0.5 * R * R * (np.log(R) - 0.5)

        val, _ = _sint.quad(octant, 0.0, np.pi / 4.0, epsabs=1e-14, epsrel=1e-14)
        return 8.0 * val
    val, _ = _sint.dblquad(
        lambda y, x: 0.5 * np.log(x * x + y * y),
        i - 0.5,
        i + 0.5,
        j - 0.5,
        j + 0.5,
        epsabs=1e-13,
        epsrel=1e-13,
    )
    return val


@lru_cache(maxsize=None)
def _unit_cell_inv(i: int, j: int) -> float:
    """integral of x1/|x|^2 over the unit cell centered at (i, j).

    Odd kernel: the (0,0) cell integral vanishes by symmetry (principal
    value); for i = 0 the cell is symmetric in x1, also zero.
    """
    if i == 0:
        return 0.0
    val, _ = _sint.dblquad(
        lambda y, x: x / (x * x + y * y),
        i - 0.5,
        i + 0.5,
        j - 0.5,
        j + 0.5,
        epsabs=1e-13,
        epsrel=1e-13,
    )
    return val


@lru_cache(maxsize=None)
def _unit_moment_p(i: int, j: int) -> float:
    """integral of (x - i) * x/(x^2+y^2) over the unit cell at (i, j) >= 0."""
    if i == 0 and j == 0:
        # int x^2/|v|^2 over the unit cell = 1/2 by x <-> y symmetry
        return 0.5
    val, _ = _sint.dblquad(
        lambda y, x: (x - i) * x / (x * x + y * y),
        i - 0.5,
        i + 0.5,
        j - 0.5,
        j + 0.5,
        epsabs=1e-13,
        epsrel=1e-13,
    )
    return val


@lru_cache(maxsize=None)
def _unit_moment_q(i: int, j: int) -> float:
    """integral of (y - j) * x/(x^2+y^2) over the unit cell at (i, j) >= 0."""
    if i == 0 or j == 0:
        return 0.0
    val, _ = _sint.dblquad(
        lambda y, x: x * (y - j) / (x * x + y * y),
        i - 0.5,
        i + 0.5,
        j - 0.5,
        j + 0.5,
        epsabs=1e-13,
        epsrel=1e-13,
    )
    return val


@lru_cache(maxsize=None)
def _unit_moment_log(i: int, j: int) -> float:
    """integral of (x - i) * log|v| over the unit cell at (i, j) >= 0."""
    if i == 0:
        return 0.0  # integrand odd in the centered first coordinate
    val, _ = _sint.dblquad(
        lambda y, x: (x - i) * 0.5 * np.log(x * x + y * y),
        i - 0.5,
        i + 0.5,
        j - 0.5,
        j + 0.5,
        epsabs=1e-13,
        epsrel=1e-13,
    )
    return val


@lru_cache(maxsize=1)
def _log_moment_tables():
    """Near-zone centered first moments of the log-kernel cells."""
    n = 2 * _NEAR + 1
    LX = np.zeros((n, n))
    LY = np.zeros((n, n))
    for i in range(-_NEAR, _NEAR + 1):
        for j in range(-_NEAR, _NEAR + 1):
            LX[_NEAR + i, _NEAR + j] = np.sign(i) * _unit_moment_log(abs(i), abs(j))
            LY[_NEAR + i, _NEAR + j] = np.sign(j) * _unit_moment_log(abs(j), abs(i))
    return LX, LY


def _log_moment_correction(values: np.ndarray, grid) -> np.ndarray:
    from scipy.signal import convolve2d

    from .grid import GridField as _GF, deriv as _deriv

    LX, LY = _log_moment_tables()
    f = _GF(grid, values)
    d1 = _deriv(f, 0).values
    d2 = _deriv(f, 1).values
    out = convolve2d(d1, LX, mode="same") + convolve2d(d2, LY, mode="same")
    return -grid.h * grid.h * out


@lru_cache(maxsize=1)
def _moment_tables():
    """Near-zone centered first-moment tables of the kernel cells.

    For K1(v) = -v2/|v|^2 and K2(v) = v1/|v|^2, table Cxk (resp. Cyk) holds
    int_cell(i,j) (v1 - i) K_k(v) dv (resp. (v2 - j)) at unit spacing, for
    offsets in the 5x5 near zone. Beyond it the cell-by-cell first-moment
    term (1/12) grad K . grad F cancels against the equally sized Laplacian
    term of the midpoint-rule error, up to a harmless higher-order remainder
    (measured), so no far-field correction is applied.
    """
    n = 2 * _NEAR + 1
    CX1 = np.zeros((n, n))
    CY1 = np.zeros((n, n))
    CX2 = np.zeros((n, n))
    CY2 = np.zeros((n, n))
    for i in range(-_NEAR, _NEAR + 1):
        for j in range(-_NEAR, _NEAR + 1):
            p = _unit_moment_p(abs(i), abs(j))
            q = np.sign(i) * np.sign(j) * _unit_moment_q(abs(i), abs(j))
            ps = _unit_moment_p(abs(j), abs(i))
            qs = np.sign(i) * np.sign(j) * _unit_moment_q(abs(j), abs(i))
            CX2[_NEAR + i, _NEAR + j] = p
            CY2[_NEAR + i, _NEAR + j] = q
            CX1[_NEAR + i, _NEAR + j] = -qs
            CY1[_NEAR + i, _NEAR + j] = -ps
    return CX1, CY1, CX2, CY2


def _moment_correction(d1F, d2F, which: int, M: int, h: float) -> np.ndarray:
    """First-moment correction for kernel component `which` (1 or 2)."""
    from scipy.signal import convolve2d

    CX1, CY1, CX2, CY2 = _moment_tables()
    CX, CY = (CX1, CY1) if which == 1 else (CX2, CY2)
    out = convolve2d(d1F, CX, mode="same") + convolve2d(d2F, CY, mode="same")
    return -h * h * out


@lru_cache(maxsize=32)
def _offset_grids(M: int):
    d = np.arange(-(M - 1), M, dtype=float)
    DX, DY = np.meshgrid(d, d, indexing="ij")
    return DX, DY


@lru_cache(maxsize=32)
def _log_table(M: int, h: float) -> np.ndarray:
    """(2M-1)^2 table of cell-averaged log|x - y| at offset (i,j)*h.

    Scale split: cell average of log over cell (i,j,h) = log h + unit-cell
    value, and the midpoint value is log h + log|d|.
    """
    DX, DY = _offset_grids(M)
    with np.errstate(divide="ignore"):
        T = 0.5 * np.log(DX * DX + DY * DY)
    c = M - 1
    for i in range(-_NEAR, _NEAR + 1):
        for j in range(-_NEAR, _NEAR + 1):
            T[c + i, c + j] = _unit_cell_log(abs(i), abs(j))
    return T + np.log(h)


@lru_cache(maxsize=32)
def _inv_tables(M: int, h: float):
    """Tables of cell-averaged (x-y)^perp/|x-y|^2 components at grid offsets.

    kernel(v) = (-v2, v1)/|v|^2 is homogeneous of degree -1, so the cell
    average over cell (i,j,h) is unit-cell value / h; midpoint likewise.
    """
    DX, DY = _offset_grids(M)
    R2 = DX * DX + DY * DY
    c = M - 1
    R2[c, c] = 1.0  # placeholder, overwritten below
    K1 = -DY / R2
    K2 = DX / R2
    for i in range(-_NEAR, _NEAR + 1):
        for j in range(-_NEAR, _NEAR + 1):
            # x1/|x|^2 cell constants; K1(v) = -v2/|v|^2 swaps the roles
            K1[c + i, c + j] = -np.sign(j) * _unit_cell_inv(abs(j), abs(i))
            K2[c + i, c + j] = np.sign(i) * _unit_cell_inv(abs(i), abs(j))
    return K1 / h, K2 / h


def _conv(table: np.ndarray, values: np.ndarray, h: float) -> np.ndarray:
    return fftconvolve(table, values, mode="valid") * h * h


def _check_density(rho: GridField) -> np.ndarray:
    v = rho.values.real if rho.is_real else rho.values
    if np.iscomplexobj(v):
        if np.max(np.abs(v.imag)) > 1e-12:
            raise ValueError("density must be real")
        v = v.real
    if v.min() < -1e-12:
        raise ValueError("negative density entries")
    return v


def superpotential(rho: GridField) -> GridField:
    """Phi[rho](x) = int (log|x-y| - log(|y|+1)) rho(y) dy on the grid."""
    v = _check_density(rho)
    g = rho.grid
    conv = _conv(_log_table(g.M, g.h), v, g.h) + _log_moment_correction(v, g)
    X, Y = g.mesh()
    norm = float(np.sum(np.log(np.hypot(X, Y) + 1.0) * v) * g.h * g.h)
    return GridField(g, conv - norm)


def log_convolution(f: GridField) -> GridField:
    """int log|x-y| f(y) dy for a (possibly signed) real field; no
    -log(|y|+1) renormalization."""
    g = f.grid
    v = f.values.real
    return GridField(g, _conv(_log_table(g.M, g.h), v, g.h)
                     + _log_moment_correction(v, g))


def vector_potential(rho: GridField):
    """A[rho](x) = PV int (x-y)^perp/|x-y|^2 rho(y) dy, componentwise.

    The near-zone cells carry first-moment corrections: the cell-averaged
    kernel value times the midpoint density misses the covariance of the
    kernel with the density slope across the cell, which is O(h^2) only
    near the singularity; it is added back from precomputed moment tables.
    """
    from .grid import deriv

    v = _check_density(rho)
    g = rho.grid
    K1, K2 = _inv_tables(g.M, g.h)
    rf = GridField(g, v)
    d1 = deriv(rf, 0).values
    d2 = deriv(rf, 1).values
    return (
        GridField(g, _conv(K1, v, g.h) + _moment_correction(d1, d2, 1, g.M, g.h)),
        GridField(g, _conv(K2, v, g.h) + _moment_correction(d1, d2, 2, g.M, g.h)),
    )


def a_star(F1: GridField, F2: GridField) -> GridField:
    """A*[F](x) = PV int (x-y)^perp/|x-y|^2 . F(y) dy (scalar output).

    Same near-zone first-moment corrections as vector_potential, one per
    kernel component.
    """
    from .grid import deriv

    g = F1.grid
    if F2.grid != g:
        raise ValueError("component grids differ")
    K1, K2 = _inv_tables(g.M, g.h)
    v1 = np.asarray(F1.values, dtype=float)
    v2 = np.asarray(F2.values, dtype=float)
    out = _conv(K1, v1, g.h) + _conv(K2, v2, g.h)
    out += _moment_correction(deriv(F1, 0).values, deriv(F1, 1).values, 1, g.M, g.h)
    out += _moment_correction(deriv(F2, 0).values, deriv(F2, 1).values, 2, g.M, g.h)
    return GridField(g, out)


def newton_check(rho: GridField, radii) -> list[tuple[float, float]]:
    """Angular averages of Phi[rho]/log(r) at the given radii.

    By the point-mass asymptotics these approach the total mass of rho.
    """
    from scipy.interpolate import RegularGridInterpolator

    g = rho.grid
    # the translation-invariant log potential: the -log(|y|+1) renormalization
    # is an x-independent constant that only washes out of Phi/log r in the
    # r -> infinity limit, so it is dropped for finite-radius ratios
    _check_density(rho)
    phi = log_convolution(GridField(g, np.asarray(rho.values).real))
    interp = RegularGridInterpolator((g.axis, g.axis), phi.values)
    out = []
    for r in radii:
        if r > 0.8 * g.L:
            raise ValueError(f"radius {r} is tail-dominated (L = {g.L})")
        theta = np.linspace(0.0, 2.0 * np.pi, 720, endpoint=False)
        pts = np.stack([r * np.cos(theta), r * np.sin(theta)], axis=-1)
        avg = float(np.mean(interp(pts)))
        out.append((float(r), avg / np.log(r)))
    return out
