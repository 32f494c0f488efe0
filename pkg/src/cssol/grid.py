"""Uniform square grids on [-L,L]^2: sampling, finite differences, quadrature,
and flat-binary field I/O."""

from __future__ import annotations

import json
import os

import numpy as np

# central second-derivative stencils by accuracy order
_D2 = {
    2: (np.array([1.0, -2.0, 1.0]), 1),
    4: (np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0, 2),
    6: (np.array([2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0]) / 180.0, 3),
    8: (
        np.array([-9.0, 128.0, -1008.0, 8064.0, -14350.0, 8064.0, -1008.0, 128.0, -9.0])
        / 5040.0,
        4,
    ),
}

# central first-derivative stencils by accuracy order
_D1 = {
    2: (np.array([-0.5, 0.0, 0.5]), 1),
    4: (np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0, 2),
    6: (np.array([-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0]) / 60.0, 3),
    8: (np.array([3.0, -32.0, 168.0, -672.0, 0.0, 672.0, -168.0, 32.0, -3.0]) / 840.0, 4),
}


class Grid:
    """M x M nodes spanning [-L, L]^2, spacing h = 2L/(M-1)."""

    __slots__ = ("L", "M", "h", "_axis")

    def __init__(self, L: float, M: int):
        if M < 16:
            raise ValueError("grid size M must be >= 16")
        if M % 2 != 0:
            raise ValueError("grid size M must be even")
        if L <= 0:
            raise ValueError("extent L must be positive")
        object.__setattr__(self, "L", float(L))
        object.__setattr__(self, "M", int(M))
        object.__setattr__(self, "h", 2.0 * L / (M - 1))
        object.__setattr__(self, "_axis", np.linspace(-L, L, M))

    def __setattr__(self, name, value):
        raise AttributeError("Grid is immutable")

    @property
    def axis(self) -> np.ndarray:
        return self._axis

    def mesh(self):
        """(X, Y) with row index = x, column index = y."""
        return np.meshgrid(self._axis, self._axis, indexing="ij")

    def zmesh(self) -> np.ndarray:
        X, Y = self.mesh()
        return X + 1j * Y

    def sample(self, fn) -> "GridField":
        """Sample a callable of z = x + iy."""
        return GridField(self, fn(self.zmesh()))

    def __eq__(self, other):
        return isinstance(other, Grid) and self.L == other.L and self.M == other.M

    def __hash__(self):
        return hash((self.L, self.M))

    def __repr__(self):
        return f"Grid(L={self.L}, M={self.M})"


class GridField:
    """Samples of a scalar field on a Grid (complex or real)."""

    __slots__ = ("grid", "values")

    def __init__(self, grid: Grid, values):
        v = np.asarray(values)
        if v.shape != (grid.M, grid.M):
            raise ValueError(f"values shape {v.shape} does not match grid {grid}")
        if not np.all(np.isfinite(v)):
            raise ValueError("non-finite field values")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", v)

    def __setattr__(self, name, value):
        raise AttributeError("GridField is immutable")

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.values)

    def map(self, fn) -> "GridField":
        return GridField(self.grid, fn(self.values))

    def __repr__(self):
        return f"GridField({self.grid}, dtype={self.values.dtype})"


# -- finite differences ----------------------------------------------------


def _apply_1d(values: np.ndarray, coeffs: np.ndarray, radius: int, axis: int):
    """Apply a centered stencil along an axis; boundary ring left at zero."""
    out = np.zeros_like(values, dtype=complex if np.iscomplexobj(values) else float)
    v = np.moveaxis(values, axis, 0)
    o = np.moveaxis(out, axis, 0)
    n = v.shape[0]
    for k, ck in enumerate(coeffs):
        s = k - radius
        if ck != 0.0:
            o[radius : n - radius] += ck * v[radius + s : n - radius + s]
    return out


def _one_sided_d1(values: np.ndarray, h: float, axis: int, out: np.ndarray, radius: int):
    """2nd-order one-sided first derivative on the boundary ring."""
    v = np.moveaxis(values, axis, 0)
    o = np.moveaxis(out, axis, 0)
    n = v.shape[0]
    for i in list(range(radius)) + list(range(n - radius, n)):
        if i < radius:
            o[i] = (-1.5 * v[i] + 2.0 * v[i + 1] - 0.5 * v[i + 2]) / h
        else:
            o[i] = (1.5 * v[i] - 2.0 * v[i - 1] + 0.5 * v[i - 2]) / h


def _one_sided_d2(values: np.ndarray, h: float, axis: int, out: np.ndarray, radius: int):
    """2nd-order one-sided second derivative on the boundary ring."""
    v = np.moveaxis(values, axis, 0)
    o = np.moveaxis(out, axis, 0)
    n = v.shape[0]
    for i in list(range(radius)) + list(range(n - radius, n)):
        if i < radius:
            o[i] = (2.0 * v[i] - 5.0 * v[i + 1] + 4.0 * v[i + 2] - v[i + 3]) / h**2
        else:
            o[i] = (2.0 * v[i] - 5.0 * v[i - 1] + 4.0 * v[i - 2] - v[i - 3]) / h**2


def deriv(field: GridField, axis: int, order: int = 4) -> GridField:
    """Partial derivative along axis (0 = x, 1 = y)."""
    coeffs, r = _D1[order]
    out = _apply_1d(field.values, coeffs, r, axis) / field.grid.h
    _one_sided_d1(field.values, field.grid.h, axis, out, r)
    return GridField(field.grid, out)


def gradient(field: GridField, order: int = 4):
    return deriv(field, 0, order), deriv(field, 1, order)


def laplacian(field: GridField, order: int = 4) -> GridField:
    coeffs, r = _D2[order]
    out = _apply_1d(field.values, coeffs, r, 0) + _apply_1d(field.values, coeffs, r, 1)
    out /= field.grid.h ** 2
    # boundary ring: 2nd-order one-sided in each direction
    bx = np.zeros_like(out)
    by = np.zeros_like(out)
    _one_sided_d2(field.values, field.grid.h, 0, bx, r)
    _one_sided_d2(field.values, field.grid.h, 1, by, r)
    ring = np.zeros((field.grid.M, field.grid.M), dtype=bool)
    ring[:r, :] = ring[-r:, :] = ring[:, :r] = ring[:, -r:] = True
    out[ring] = (bx + by)[ring]
    return GridField(field.grid, out)


def curl(F1: GridField, F2: GridField, order: int = 4) -> GridField:
    """Scalar curl of a planar vector field: d1 F2 - d2 F1."""
    return GridField(
        F1.grid, deriv(F2, 0, order).values - deriv(F1, 1, order).values
    )


def divergence(F1: GridField, F2: GridField, order: int = 4) -> GridField:
    return GridField(
        F1.grid, deriv(F1, 0, order).values + deriv(F2, 1, order).values
    )


def interior_mask(grid: Grid, margin: int = 3) -> np.ndarray:
    m = np.zeros((grid.M, grid.M), dtype=bool)
    m[margin:-margin, margin:-margin] = True
    return m


# -- quadrature ------------------------------------------------------------


def _trap_weights(M: int) -> np.ndarray:
    w = np.ones(M)
    w[0] = w[-1] = 0.5
    return w


def integrate(field: GridField) -> complex | float:
    """Composite 2-D trapezoid integral of the raw (signed/complex) values."""
    w = _trap_weights(field.grid.M)
    total = w @ field.values @ w
    total *= field.grid.h ** 2
    return float(total.real) if field.is_real else complex(total)


def quadrature(field: GridField, p: float) -> float:
    """Composite trapezoid of |values|^p."""
    w = _trap_weights(field.grid.M)
    a = np.abs(field.values) ** p
    return float((w @ a @ w) * field.grid.h ** 2)


def integrate_disk(field: GridField, radius: float) -> float:
    """Plain cell-sum integral restricted to |z| <= radius."""
    X, Y = field.grid.mesh()
    mask = X * X + Y * Y <= radius * radius
    return float(np.sum(field.values.real[mask]) * field.grid.h ** 2)


# -- field I/O -------------------------------------------------------------


def save_field(field: GridField, path: str) -> None:
    """Flat little-endian f64 (re, im) pairs, row-major, + JSON sidecar."""
    v = np.ascontiguousarray(field.values, dtype=complex)
    raw = np.empty((field.grid.M, field.grid.M, 2))
    raw[..., 0] = v.real
    raw[..., 1] = v.imag
    raw.astype("<f8").tofile(path)
    kind = "real" if field.is_real else "complex"
    with open(path + ".json", "w") as fh:
        json.dump({"L": field.grid.L, "M": field.grid.M, "kind": kind}, fh)


def load_field(path: str) -> GridField:
    with open(path + ".json") as fh:
        meta = json.load(fh)
    M = int(meta["M"])
    raw = np.fromfile(path, dtype="<f8").reshape(M, M, 2)
    values = raw[..., 0] + 1j * raw[..., 1]
    if meta.get("kind") == "real":
        values = values.real
    return GridField(Grid(float(meta["L"]), M), values)
