"""Energy quantities and identity residuals for self-generated-field
densities: the magnetic energy E_beta and its term decomposition, the
supercurrent, the weighted-square (factorized) form of E_beta -+ 2 pi beta
int |u|^4, the stationarity-operator residual, the Menger-Melnikov curvature,
the Liouville residual, and a battery of inequalities."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import (
    Grid,
    GridField,
    deriv,
    gradient,
    integrate,
    interior_mask,
    laplacian,
    quadrature,
)
from .kernels import a_star, superpotential, vector_potential
from .soliton import LiouvilleSolution
from .wronskian_pairs import WronskianPair

HARDY_CONSTANT = 1.5


@dataclass(frozen=True)
class EnergyReport:
    """Decomposition of E_beta[u] = int |(grad + i beta A[|u|^2]) u|^2.

    quotient is the scale-corrected Rayleigh quotient: the same energy with
    A scaled by 1/mass, times mass, divided by the quartic integral; it is
    invariant under u -> c u and reduces to total/quartic at unit mass.
    """

    beta: float
    kinetic: float
    cross: float
    curvature: float
    quartic: float
    mass: float
    total_E_beta: float
    susy_rhs: float
    bogomolnyi_gap: float
    quotient: float


def current(u: GridField, order: int = 4):
    """Supercurrent J[u] = Im(conj(u) grad u), componentwise; identically
    zero for real-valued fields."""
    g1, g2 = gradient(u, order)
    cu = np.conj(u.values)
    return (
        GridField(u.grid, np.imag(cu * g1.values)),
        GridField(u.grid, np.imag(cu * g2.values)),
    )


def _density(u: GridField) -> GridField:
    return GridField(u.grid, np.abs(u.values) ** 2)


def magnetic_energy(u: GridField, beta: float, order: int = 4) -> EnergyReport:
    """E_beta[u] with its kinetic / cross / curvature decomposition.

    total is the quadrature of the covariant-gradient square; the three
    decomposition terms sum to it identically (pointwise algebra), so the
    decomposition invariant holds to rounding.
    """
    mass = quadrature(u, 2)
    if mass <= 0:
        raise ValueError("zero field has no energy quotient")
    rho = _density(u)
    A1, A2 = vector_potential(rho)
    g1, g2 = gradient(u, order)
    d1 = g1.values + 1j * beta * A1.values * u.values
    d2 = g2.values + 1j * beta * A2.values * u.values
    total = integrate(GridField(u.grid, np.abs(d1) ** 2 + np.abs(d2) ** 2))
    kinetic = integrate(GridField(u.grid, np.abs(g1.values) ** 2 + np.abs(g2.values) ** 2))
    J1 = np.imag(np.conj(u.values) * g1.values)
    J2 = np.imag(np.conj(u.values) * g2.values)
    cross = 2.0 * beta * integrate(
        GridField(u.grid, A1.values * J1 + A2.values * J2)
    )
    curvature = beta**2 * integrate(
        GridField(u.grid, (A1.values**2 + A2.values**2) * rho.values)
    )
    quartic = quadrature(u, 4)
    gap = total - 2.0 * np.pi * beta * quartic
    srhs = susy_rhs(u, beta, -1, order=order)
    quotient = (kinetic + cross / mass + curvature / mass**2) * mass / quartic
    return EnergyReport(
        beta=float(beta),
        kinetic=float(kinetic),
        cross=float(cross),
        curvature=float(curvature),
        quartic=float(quartic),
        mass=float(mass),
        total_E_beta=float(total),
        susy_rhs=float(srhs),
        bogomolnyi_gap=float(gap),
        quotient=float(quotient),
    )


def susy_rhs(u: GridField, beta: float, sign: int, order: int = 4) -> float:
    """Weighted-square form of E_beta[u] +- 2 pi beta int |u|^4:

        int |(d1 +- i d2)(e^{-+ beta Phi} u)|^2 e^{+- 2 beta Phi},

    with Phi = Phi[|u|^2]. The additive normalization of Phi cancels
    exactly between the two weights.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    phi = superpotential(_density(u))
    w = beta * phi.values
    if np.max(np.abs(2.0 * w)) > 700.0:
        raise OverflowError("superpotential weight exponent exceeds 700")
    v = GridField(u.grid, np.exp(-sign * w) * u.values)
    g1, g2 = gradient(v, order)
    integrand = np.abs(g1.values + sign * 1j * g2.values) ** 2 * np.exp(2.0 * sign * w)
    return float(integrate(GridField(u.grid, integrand)))


def el_residual(u: GridField, beta: float, gamma: float, order: int = 4,
                margin: int | None = None):
    """Interior L2 residual of the stationarity equation

        [-(grad + i beta A)^2 - 2 beta^2 Astar[A rho] - 2 beta Astar[J]
         - 2 gamma rho] u = lambda u,

    with lambda = int [-|grad u|^2 + beta^2 |A|^2 rho]. Returns
    (residual_L2, lambda). Requires unit mass.
    """
    mass = quadrature(u, 2)
    if abs(mass - 1.0) > 1e-6:
        raise ValueError(f"field must have unit mass (got {mass:.8f})")
    g = u.grid
    rho = _density(u)
    A1, A2 = vector_potential(rho)
    g1, g2 = gradient(u, order)
    # covariant Laplacian: sum_j (d_j + i beta A_j)(d_j u + i beta A_j u)
    D1 = GridField(g, g1.values + 1j * beta * A1.values * u.values)
    D2 = GridField(g, g2.values + 1j * beta * A2.values * u.values)
    covlap = (
        deriv(D1, 0, order).values
        + deriv(D2, 1, order).values
        + 1j * beta * (A1.values * D1.values + A2.values * D2.values)
    )
    J1 = np.imag(np.conj(u.values) * g1.values)
    J2 = np.imag(np.conj(u.values) * g2.values)
    s1 = a_star(
        GridField(g, A1.values * rho.values), GridField(g, A2.values * rho.values)
    )
    s2 = a_star(GridField(g, J1), GridField(g, J2))
    asq = A1.values**2 + A2.values**2
    gradsq = np.abs(g1.values) ** 2 + np.abs(g2.values) ** 2
    lam = float(integrate(GridField(g, -gradsq + beta**2 * asq * rho.values)))
    lhs = (
        -covlap
        - (2.0 * beta**2 * s1.values + 2.0 * beta * s2.values
           + 2.0 * gamma * rho.values) * u.values
    )
    res = lhs - lam * u.values
    if margin is None:
        # two derivative passes widen the boundary-contaminated ring
        margin = 2 * {2: 1, 4: 2, 6: 3, 8: 4}[order] + 2
    mask = interior_mask(g, margin)
    res_l2 = float(np.sqrt(np.sum(np.abs(res[mask]) ** 2) * g.h**2))
    return res_l2, lam


def menger_melnikov(rho: GridField) -> float:
    """int |A[rho]|^2 rho: equal to the triple integral of the inverse
    squared circumradius against rho x rho x rho / 6."""
    A1, A2 = vector_potential(rho)
    v = rho.values.real
    return float(
        integrate(GridField(rho.grid, (A1.values**2 + A2.values**2) * v))
    )


def liouville_residual(pair: WronskianPair, grid: Grid, order: int = 8) -> float:
    """Interior max of |-Delta_h psi - |f|^2 e^psi| / (1 + |f|^2 e^psi)."""
    sol = LiouvilleSolution(pair)
    psi = grid.sample(sol.psi)
    rhs = grid.sample(sol.rhs).values.real
    lap = laplacian(psi, order).values.real
    mask = interior_mask(grid, max(3, {2: 1, 4: 2, 6: 3, 8: 4}[order]))
    resid = np.abs(-lap - rhs) / (1.0 + rhs)
    return float(np.max(resid[mask]))


@dataclass(frozen=True)
class InequalityEntry:
    name: str
    small_side: float
    large_side: float
    margin_rel: float  # (large - small) / max(1e-300, |large|, |small|)


@dataclass(frozen=True)
class InequalityReport:
    entries: tuple[InequalityEntry, ...]
    hardy_empirical_ratio: float

    def violations(self, tol: float = 1e-6) -> list[InequalityEntry]:
        return [e for e in self.entries if e.margin_rel < -tol]


def _entry(name: str, small: float, large: float) -> InequalityEntry:
    scale = max(1e-300, abs(small), abs(large))
    return InequalityEntry(name, float(small), float(large),
                           float((large - small) / scale))


def inequality_battery(u: GridField, beta: float, c_lgn: float | None = None,
                       order: int = 4) -> InequalityReport:
    """Two-sided evaluation of the standing inequalities.

    diamagnetic:      int |grad|u||^2          <= E_beta[u]
    hardy (C_H=3/2):  int |A[rho]|^2 rho       <= 1.5 mass^2 int |grad|u||^2
    gn4:              C_LGN int |u|^4          <= mass int |grad u|^2
    bogomolnyi:       2 pi beta int |u|^4      <= E_beta[u]          (beta>=0)
    mm_interpolation: pi int|u|^4 + |int A.J|  <= sqrt(kin) sqrt(MM)
    """
    if c_lgn is None:
        from .variational import townes_constant

        c_lgn = townes_constant()
    g = u.grid
    rho = _density(u)
    mass = quadrature(u, 2)
    quartic = quadrature(u, 4)
    A1, A2 = vector_potential(rho)
    g1, g2 = gradient(u, order)
    kinetic = float(integrate(GridField(
        g, np.abs(g1.values) ** 2 + np.abs(g2.values) ** 2)))
    a1, a2 = gradient(GridField(g, np.abs(u.values)), order)
    grad_mod = float(integrate(GridField(g, a1.values**2 + a2.values**2)))
    mm = float(integrate(GridField(
        g, (A1.values**2 + A2.values**2) * rho.values)))
    J1 = np.imag(np.conj(u.values) * g1.values)
    J2 = np.imag(np.conj(u.values) * g2.values)
    aj = float(integrate(GridField(g, A1.values * J1 + A2.values * J2)))
    cross = 2.0 * beta * aj
    curvature = beta**2 * mm
    total = kinetic + cross + curvature

    entries = [
        _entry("diamagnetic", grad_mod, total),
        _entry("hardy", mm, HARDY_CONSTANT * mass**2 * grad_mod),
        _entry("gn4", c_lgn * quartic, mass * kinetic),
        _entry("mm_interpolation",
               np.pi * quartic + abs(aj), np.sqrt(kinetic) * np.sqrt(mm)),
    ]
    if beta >= 0:
        entries.append(
            _entry("bogomolnyi", 2.0 * np.pi * beta * quartic, total))
    ratio = mm / (mass**2 * grad_mod) if grad_mod > 0 else 0.0
    return InequalityReport(tuple(entries), float(ratio))
