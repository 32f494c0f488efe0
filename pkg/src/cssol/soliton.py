"""Closed-form objects built from coprime Wronskian pairs.

psi_{P,Q} = log 8 - 2 log(|P|^2 + |Q|^2) solves -Delta psi = |f|^2 e^psi with
f = W(P,Q); u_{P,Q} = sqrt(2/(pi beta)) conj(W)/(|P|^2+|Q|^2) is the explicit
magnetic-energy minimizer at flux beta = 2 max(deg P, deg Q).
"""

from __future__ import annotations

import numpy as np

from . import poly
from .poly import ComplexPolynomial, PairTransform, act, evaluate, wronskian
from .wronskian_pairs import WronskianPair
from .grid import Grid, GridField


class LiouvilleSolution:
    """psi_{P,Q} for a validated coprime pair; f = W(P,Q)."""

    def __init__(self, pair: WronskianPair):
        self.pair = pair
        self.f = pair.W

    def psi(self, z):
        S = (
            np.abs(evaluate(self.pair.P, z)) ** 2
            + np.abs(evaluate(self.pair.Q, z)) ** 2
        )
        return np.log(8.0) - 2.0 * np.log(S)

    def rhs(self, z):
        """|f|^2 e^psi = 8 |W|^2 / (|P|^2+|Q|^2)^2."""
        S = (
            np.abs(evaluate(self.pair.P, z)) ** 2
            + np.abs(evaluate(self.pair.Q, z)) ** 2
        )
        return 8.0 * np.abs(evaluate(self.f, z)) ** 2 / S**2


def psi_value(s: LiouvilleSolution, z: complex) -> float:
    return float(s.psi(z))


class Soliton:
    """u_{P,Q} at flux beta = 2 max(deg P, deg Q)."""

    def __init__(self, pair: WronskianPair):
        m = max(pair.P.degree or 0, pair.Q.degree or 0)
        if m < 1:
            raise ValueError("soliton needs max degree >= 1")
        self.pair = pair
        self.beta = 2.0 * m
        self.norm_const = float(np.sqrt(2.0 / (np.pi * self.beta)))
        self._psi0 = None

    def u(self, z):
        S = (
            np.abs(evaluate(self.pair.P, z)) ** 2
            + np.abs(evaluate(self.pair.Q, z)) ** 2
        )
        W = evaluate(self.pair.W, z)
        return self.norm_const * np.conj(W) / S

    def density(self, z):
        return np.abs(self.u(z)) ** 2

    def sample(self, grid: Grid) -> GridField:
        return grid.sample(self.u)

    # -- superpotential closed form ---------------------------------------

    def _log_s(self, z):
        return np.log(
            np.abs(evaluate(self.pair.P, z)) ** 2
            + np.abs(evaluate(self.pair.Q, z)) ** 2
        )

    def psi0(self, grid: Grid | None = None) -> float:
        """Additive constant of the closed-form superpotential.

        Pinned by matching the grid-based Phi[|u|^2] at z = 0; the default
        matching grid is wide enough that the truncated density tail shifts
        the constant by well under 1e-3.
        """
        if self._psi0 is None:
            from .kernels import superpotential

            g = grid or Grid(60.0, 1024)
            phi = superpotential(self.sample(g).map(lambda v: np.abs(v) ** 2))
            center = g.M // 2  # grid has even M; average the 4 center nodes
            idx = [center - 1, center]
            phi_at_0 = 0.0
            s_at_0 = 0.0
            for i in idx:
                for j in idx:
                    zij = g.axis[i] + 1j * g.axis[j]
                    phi_at_0 += phi.values[i, j]
                    s_at_0 += self._log_s(zij)
            self._psi0 = float(phi_at_0 - s_at_0 / self.beta) / 4.0
        return self._psi0

    def superpotential_closed(self, z, psi0: float | None = None):
        c = self.psi0() if psi0 is None else psi0
        return self._log_s(z) / self.beta + c


def u_value(s: Soliton, z: complex) -> complex:
    return complex(s.u(z))


def superpotential_closed(s: Soliton, z: complex) -> float:
    return float(s.superpotential_closed(z))


class VortexSpec:
    """Parameters of a vortex ring: P = a(z-z0)^n + c, Q = b."""

    def __init__(self, n: int, a: complex = 1.0, b: float = 1.0, c: complex = 0.0,
                 z0: complex = 0.0):
        if n < 1:
            raise ValueError("vortex degree n must be >= 1")
        if abs(a) == 0:
            raise ValueError("leading coefficient a must be nonzero")
        if not (np.isreal(b) and b > 0):
            raise ValueError("b must be a positive real")
        self.n = int(n)
        self.a = complex(a)
        self.b = float(b)
        self.c = complex(c)
        self.z0 = complex(z0)


def vortex_ring(spec: VortexSpec) -> Soliton:
    """Soliton u_n = sqrt(n/pi) b conj(a(z-z0)^{n-1}) n / (...): the
    single-vortex family at flux beta = 2n."""
    P = poly.from_roots([spec.z0] * spec.n, leading=spec.a) + spec.c
    Q = ComplexPolynomial([spec.b])
    return Soliton(WronskianPair(P, Q))


def radial_ring(n: int, C: complex = 1.0) -> Soliton:
    """Radial ring u_n = conj(C) sqrt(n/pi) zbar^{n-1} / (|z|^{2n} + |C|^2).

    Realized as the pair (z^n, C) up to phase. Its superpotential constant
    reduces to a 1-D radial integral; see radial_ring_psi0.
    """
    P = poly.from_roots([0.0] * n)
    Q = ComplexPolynomial([complex(C)])
    return Soliton(WronskianPair(P, Q))


def radial_ring_psi0(n: int, C: complex = 1.0) -> float:
    """Independent 1-D oracle for psi0 of a radial ring.

    Phi[rho](0) = 2 pi int_0^inf (log r - log(r+1)) rho_n(r) r dr with the
    radial density rho_n = (n/pi) r^{2n-2}/(r^{2n}+|C|^2)^2, minus the
    (1/beta) log S(0) = (1/(2n)) log |C|^2 closed-form part.
    """
    from scipy.integrate import quad

    n = int(n)
    aC = abs(C)

    def integrand(r):
        rho = (n / np.pi) * r ** (2 * n - 2) / (r ** (2 * n) + aC * aC) ** 2
        return (np.log(r) - np.log(r + 1.0)) * rho * 2.0 * np.pi * r

    val, _ = quad(integrand, 0.0, np.inf, limit=400)
    return float(val - np.log(aC * aC) / (2 * n))


def zeros_and_vorticity(s: Soliton):
    """Roots of W(P,Q) with multiplicities; total lies in [beta/2-1, beta-2]."""
    W = s.pair.W
    if W.degree == 0:
        return []
    return poly.roots(W)


def total_vorticity(s: Soliton) -> int:
    return sum(m for _, m in zeros_and_vorticity(s))


# -- symmetry orbit --------------------------------------------------------


def _canonical_rsu2(pair: WronskianPair):
    """Canonical representative of the R+ x SU(2) orbit, with the transform.

    Steps: (1) if deg Q = max degree, rotate by the SU(2) matrix built from
    the two leading coefficients so that deg Q drops below deg P;
    (2) the residual stabilizer {c * diag(alpha, conj(alpha))} is fixed by
    making P monic with a positive real scale c and unit alpha.
    Returns (canonical pair, transform) with pair_canonical = act(T, pair).
    """
    P, Q = pair.P, pair.Q
    m = max(P.degree or 0, Q.degree or 0)
    a = P.coeff(m)
    b = Q.coeff(m)
    n1 = np.sqrt(abs(a) ** 2 + abs(b) ** 2)
    T1 = PairTransform(
        np.array(
            [[np.conj(a), np.conj(b)], [-b, a]],
            dtype=complex,
        )
        / n1
    )
    P1, Q1 = act(T1, (P, Q))
    # exact degree drop: clear the numerically-zero top coefficient of Q1
    c1 = Q1.coeffs.copy() if not Q1.is_zero else np.zeros(0, dtype=complex)
    if c1.size == m + 1:
        c1[m] = 0.0
    Q1 = ComplexPolynomial(c1)
    lead = P1.coeff(m)
    # scale c * diag(alpha, conj(alpha)) with c = 1/|lead|, alpha = phase
    alpha = np.conj(lead) / abs(lead)
    c = 1.0 / abs(lead)
    T2 = PairTransform(np.array([[c * alpha, 0.0], [0.0, c * np.conj(alpha)]]))
    P2, Q2 = act(T2, (P1, Q1))
    return (P2, Q2), T2 @ T1


def same_orbit(p1: WronskianPair, p2: WronskianPair, tol: float = 1e-8):
    """Whether u_{p1} == u_{p2}, i.e. p2 = Lambda p1 with Lambda in R+ x SU(2).

    Returns (bool, witness): the witness transform maps p1 to p2 when true.
    """
    m1 = max(p1.P.degree or 0, p1.Q.degree or 0)
    m2 = max(p2.P.degree or 0, p2.Q.degree or 0)
    if m1 != m2:
        return False, None
    (c1P, c1Q), T1 = _canonical_rsu2(p1)
    (c2P, c2Q), T2 = _canonical_rsu2(p2)
    scale = max(c1P.norm() + c1Q.norm(), 1e-300)
    if (c1P - c2P).norm() + (c1Q - c2Q).norm() <= tol * scale:
        return True, T2.inverse() @ T1
    return False, None
