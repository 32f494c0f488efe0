"""Coprime Wronskian pairs and the inverse problem W(P,Q) = f.

Closed forms exist for deg f <= 2 (single-root and degree-two families); for
higher degree a bounded numerical search over the auxiliary polynomial R of
the second-order ODE  f y'' - f' y' + R y = 0  finds additional families,
every hit being certified a posteriori by the Wronskian residual.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import poly
from .poly import (
    ComplexPolynomial,
    PairTransform,
    act,
    antiderivative,
    coprime,
    derivative,
    gcd,
    wronskian,
)

RESIDUAL_RTOL = 1e-9
DEDUP_TOL = 1e-8


class WronskianPair:
    """A validated pair (P, Q): coprime, linearly independent, cached W."""

    __slots__ = ("P", "Q", "W", "coprime", "independent")

    def __init__(self, P, Q, validate: bool = True):
        P = poly._coerce(P)
        Q = poly._coerce(Q)
        W = wronskian(P, Q)
        independent = not W.is_zero
        is_coprime = (not (P.is_zero and Q.is_zero)) and coprime(P, Q)
        if validate:
            if not independent:
                raise ValueError("pair is linearly dependent (W = 0)")
            if not is_coprime:
                raise ValueError("pair is not coprime")
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "coprime", is_coprime)
        object.__setattr__(self, "independent", independent)

    def __setattr__(self, name, value):
        raise AttributeError("WronskianPair is immutable")

    @property
    def max_degree(self) -> int:
        return max(self.P.degree or 0, self.Q.degree or 0)

    def transformed(self, transform: PairTransform) -> "WronskianPair":
        P, Q = act(transform, (self.P, self.Q))
        return WronskianPair(P, Q)

    def __repr__(self):
        return f"WronskianPair(P={self.P!r}, Q={self.Q!r})"


@dataclass
class SolutionFamily:
    """One family of solutions of W(P,Q) = f."""

    kind: str  # SingleRoot | DegreeTwoPrimitive | DegreeTwoSplit | Generic
    parameters: dict = field(default_factory=dict)
    representative: WronskianPair | None = None
    residual: float = 0.0

    def check(self, f: ComplexPolynomial) -> float:
        r = (self.representative.W - f).norm()
        scale = max(f.norm(), 1e-300)
        return r / scale


def solve_single_root(a: complex, z0: complex, n: int) -> SolutionFamily:
    """Family for f = a (z - z0)^n:
    P = alpha1 (z-z0)^{n+1} + beta1, Q = alpha2 (z-z0)^{n+1} + beta2 under
    the constraint alpha1*beta2 - alpha2*beta1 = a/(n+1)."""
    if a == 0:
        raise ValueError("zero Wronskian target")
    if n < 0:
        raise ValueError("n must be a non-negative integer")
    base = poly.from_roots([z0] * (n + 1))
    P = base  # alpha1 = 1, beta1 = 0
    Q = ComplexPolynomial([a / (n + 1)])  # alpha2 = 0, beta2 = a/(n+1)
    rep = WronskianPair(P, Q)
    fam = SolutionFamily(
        kind="SingleRoot",
        parameters={
            "a": a,
            "z0": z0,
            "n": n,
            "constraint": "alpha1*beta2 - alpha2*beta1 = a/(n+1)",
            "alpha1": 1.0,
            "beta1": 0.0,
            "alpha2": 0.0,
            "beta2": a / (n + 1),
        },
        representative=rep,
    )
    fam.residual = fam.check(ComplexPolynomial([a]) * base_power(z0, n))
    return fam


def base_power(z0: complex, n: int) -> ComplexPolynomial:
    return poly.from_roots([z0] * n)


def solve_degree_two(a: complex, b: complex, c: complex) -> list[SolutionFamily]:
    """Families for f = a z^2 + b z + c.

    The primitive family (int f, 1) always exists; the split family
    (z^2 - c/a, a z + b/2) exists iff c != b^2/(4a).
    """
    if a == 0:
        raise ValueError("degree below two")
    f = ComplexPolynomial([c, b, a])
    fams = []
    P0 = ComplexPolynomial([0.0, c, b / 2.0, a / 3.0])
    prim = SolutionFamily(
        kind="DegreeTwoPrimitive",
        parameters={"a": a, "b": b, "c": c, "orbit": "SL(2)"},
        representative=WronskianPair(P0, poly.ONE),
    )
    prim.residual = prim.check(f)
    fams.append(prim)
    if abs(c - b * b / (4.0 * a)) > 1e-12 * max(abs(c), abs(b * b / (4 * a)), 1.0):
        Ps = ComplexPolynomial([-c / a, 0.0, 1.0])
        Qs = ComplexPolynomial([b / 2.0, a])
        split = SolutionFamily(
            kind="DegreeTwoSplit",
            parameters={"a": a, "b": b, "c": c, "orbit": "SL(2)"},
            representative=WronskianPair(Ps, Qs),
        )
        split.residual = split.check(f)
        fams.append(split)
    return fams


def ode_operator_matrix(
    f: ComplexPolynomial, R: ComplexPolynomial, max_deg: int
) -> np.ndarray:
    """Coefficient matrix of y -> f y'' - f' y' + R y on span{1, ..., z^max_deg}."""
    fd = derivative(f)
    out_deg = max_deg + max(f.degree or 0, R.degree if not R.is_zero else 0)
    rows = out_deg + 1
    A = np.zeros((rows, max_deg + 1), dtype=complex)
    for k in range(max_deg + 1):
        y = ComplexPolynomial([0.0] * k + [1.0])
        img = f * derivative(derivative(y)) - fd * derivative(y) + R * y
        for i, ci in enumerate(img.coeffs):
            A[i, k] = ci
    return A


def ode_kernel(
    f: ComplexPolynomial,
    R: ComplexPolynomial,
    max_deg: int,
    sv_threshold: float = 1e-9,
) -> list[ComplexPolynomial]:
    """Nullspace basis of the restricted ODE map, unit coefficient norm."""
    f = poly._coerce(f)
    R = poly._coerce(R)
    if f.is_zero:
        raise ValueError("f must be nonzero")
    if max_deg > (f.degree or 0) + 1:
        raise ValueError("max_deg exceeds the deg(f)+1 solution bound")
    A = ode_operator_matrix(f, R, max_deg)
    _, s, vh = np.linalg.svd(A)
    smax = s[0] if s.size else 0.0
    null = []
    ncols = A.shape[1]
    for i in range(ncols):
        sv = s[i] if i < s.size else 0.0
        if sv <= sv_threshold * max(smax, 1.0):
            v = vh[i].conj()
            null.append(ComplexPolynomial(v / np.linalg.norm(v)))
    return null


def canonical_form(pair: WronskianPair) -> WronskianPair:
    """Deduplication normal form: rotate so deg P > deg Q, make P monic,
    and clear P's coefficient at power deg Q by a Q-shear. Idempotent."""
    P, Q = pair.P, pair.Q
    m = pair.max_degree
    a = P.coeff(m)
    b = Q.coeff(m)
    n1 = np.sqrt(abs(a) ** 2 + abs(b) ** 2)
    U = PairTransform(np.array([[np.conj(a), np.conj(b)], [-b, a]]) / n1)
    P1, Q1 = act(U, (P, Q))
    if not Q1.is_zero and Q1.degree == m:
        c1 = Q1.coeffs.copy()
        c1[m] = 0.0  # exact drop of the rotated-away top coefficient
        Q1 = ComplexPolynomial(c1)
    P1 = P1.monic()
    dq = Q1.degree
    if dq is not None:
        mu = P1.coeff(dq) / Q1.leading
        P1 = P1 - mu * Q1
    return WronskianPair(P1, Q1)


def _same_family(p1: WronskianPair, p2: WronskianPair, tol: float = DEDUP_TOL) -> bool:
    c1, c2 = canonical_form(p1), canonical_form(p2)
    # compare Q up to scale: the diag(mu, 1/mu) subgroup is invisible to the
    # monic-P canonical form
    q1, q2 = c1.Q.monic(), c2.Q.monic()
    scale = max(c1.P.norm() + q1.norm(), 1.0)
    return (c1.P - c2.P).norm() + (q1 - q2).norm() <= tol * scale


def _abel_rescale(P: ComplexPolynomial, Q: ComplexPolynomial, f: ComplexPolynomial):
    """Rescale (P,Q) -> (CP, Q) so that W = f exactly (when W proportional)."""
    W = wronskian(P, Q)
    if W.is_zero or W.degree != f.degree:
        return None
    C = f.leading / W.leading
    P2 = C * P
    W2 = wronskian(P2, Q)
    if (W2 - f).norm() > 1e-6 * max(f.norm(), 1.0):
        return None
    return P2, Q


def _search_extra_families(f: ComplexPolynomial, seed: int, starts: int):
    """Multi-start damped search for R with 2-dim ODE kernel (deg f >= 3).

    Objective: sum of the two smallest singular values of the restricted ODE
    matrix, over R with deg R <= deg f - 2. Every hit is certified by the
    Wronskian residual downstream, so the search itself is heuristic.
    """
    from scipy.optimize import minimize

    df = f.degree
    nR = df - 1  # coefficients R_0 .. R_{deg f - 2}
    scale = f.norm()

    def objective(x):
        R = ComplexPolynomial(x[:nR] + 1j * x[nR:])
        A = ode_operator_matrix(f, R, df + 1)
        s = np.linalg.svd(A, compute_uv=False)
        s = np.sort(s)
        return float(s[0] + s[1])

    rng = np.random.default_rng(seed)
    hits = []
    x0s = [np.zeros(2 * nR)]
    for _ in range(starts):
        x0s.append(rng.normal(scale=scale, size=2 * nR))
    for x0 in x0s:
        res = minimize(objective, x0, method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000})
        if res.fun <= 1e-8 * max(scale, 1.0):
            hits.append(ComplexPolynomial(res.x[:nR] + 1j * res.x[nR:]))
    return hits


def solve_generic(
    f: ComplexPolynomial, cap: int = 6, seed: int = 42, starts: int = 8
) -> list[SolutionFamily]:
    """All families found for W(P,Q) = f, deduplicated modulo SL(2).

    Closed forms for deg f <= 2; for higher degrees the primitive family
    (int f, 1) plus certified hits of the R-search.
    """
    f = poly._coerce(f)
    if f.is_zero:
        raise ValueError("zero polynomial has no Wronskian pair")
    df = f.degree
    if df > cap:
        raise ValueError(f"degree {df} exceeds the configured cap {cap}")
    if df == 0:
        return [solve_single_root(complex(f.coeffs[0]), 0.0, 0)]
    if df == 1:
        a = complex(f.coeffs[1])
        z0 = -complex(f.coeffs[0]) / a
        return [solve_single_root(a, z0, 1)]
    if df == 2:
        fams = solve_degree_two(
            complex(f.coeffs[2]), complex(f.coeffs[1]), complex(f.coeffs[0])
        )
        return fams

    fams: list[SolutionFamily] = []
    # the primitive family always exists: W(int f, 1) = f
    prim = SolutionFamily(
        kind="Generic",
        parameters={"R": "0", "orbit": "SL(2)"},
        representative=WronskianPair(antiderivative(f), poly.ONE),
    )
    prim.residual = prim.check(f)
    fams.append(prim)
    # single clustered root => the closed-form family applies
    rts = poly.roots(f)
    if len(rts) == 1:
        z0, n = rts[0]
        fam = solve_single_root(f.leading, z0, n)
        fam.residual = fam.check(f)
        if not any(_same_family(fam.representative, g.representative) for g in fams):
            fams.append(fam)
    for R in _search_extra_families(f, seed, starts):
        basis = ode_kernel(f, R, df + 1, sv_threshold=1e-7)
        if len(basis) < 2:
            continue
        basis.sort(key=lambda p: p.degree or 0, reverse=True)
        for i in range(len(basis)):
            for j in range(i + 1, len(basis)):
                got = _abel_rescale(basis[i], basis[j], f)
                if got is None:
                    continue
                P, Q = got
                if not coprime(P, Q):
                    continue
                rep = WronskianPair(P, Q, validate=False)
                fam = SolutionFamily(
                    kind="Generic",
                    parameters={"R": [complex(c) for c in R.coeffs], "orbit": "SL(2)"},
                    representative=rep,
                )
                fam.residual = fam.check(f)
                if fam.residual <= RESIDUAL_RTOL and not any(
                    _same_family(rep, g.representative) for g in fams
                ):
                    fams.append(fam)
    return fams
