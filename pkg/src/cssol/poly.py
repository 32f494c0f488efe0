"""Dense complex polynomials in one variable and 2x2 transforms on pairs.

Coefficients are stored low-to-high (index = power of z). Degrees in this
package stay small (<= ~12), so everything is dense and exact up to floating
rounding. The zero polynomial has an empty coefficient array and degree None.
"""

from __future__ import annotations

import numpy as np

# gcd truncation threshold, relative to the running remainder norm.
# Floating-point polynomial gcd is numerically fragile; this knob is exposed
# on purpose so callers can tighten or loosen it.
GCD_EPS = 1e-9

# Root clustering radius for multiplicity detection: 1e-6 * (1 + |root|).
ROOT_CLUSTER_EPS = 1e-6


class ComplexPolynomial:
    """Immutable dense polynomial over the complex numbers."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=complex)).ravel()
        # strip exact trailing zeros so degree == len(coeffs) - 1
        nz = np.nonzero(c)[0]
        c = c[: nz[-1] + 1] if nz.size else np.zeros(0, dtype=complex)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def __setattr__(self, name, value):
        raise AttributeError("ComplexPolynomial is immutable")

    # -- basic structure ---------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.coeffs.size == 0

    @property
    def degree(self):
        """Degree as an int, or None for the zero polynomial (sentinel)."""
        return None if self.is_zero else self.coeffs.size - 1

    def coeff(self, k: int) -> complex:
        """Coefficient of z^k (0 for k beyond the stored range)."""
        if k < 0 or k >= self.coeffs.size:
            return 0j
        return complex(self.coeffs[k])

    @property
    def leading(self) -> complex:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return complex(self.coeffs[-1])

    def norm(self) -> float:
        """Euclidean norm of the coefficient vector."""
        return float(np.linalg.norm(self.coeffs)) if self.coeffs.size else 0.0

    # -- algebra -----------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        n = max(self.coeffs.size, other.coeffs.size)
        c = np.zeros(n, dtype=complex)
        c[: self.coeffs.size] += self.coeffs
        c[: other.coeffs.size] += other.coeffs
        return ComplexPolynomial(c)

    __radd__ = __add__

    def __neg__(self):
        return ComplexPolynomial(-self.coeffs)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        if np.isscalar(other):
            return ComplexPolynomial(self.coeffs * complex(other))
        other = _coerce(other)
        if self.is_zero or other.is_zero:
            return ComplexPolynomial([])
        return ComplexPolynomial(np.convolve(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, ComplexPolynomial):
            return NotImplemented
        return self.coeffs.shape == other.coeffs.shape and bool(
            np.all(self.coeffs == other.coeffs)
        )

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def monic(self):
        if self.is_zero:
            raise ValueError("cannot normalize the zero polynomial")
        return ComplexPolynomial(self.coeffs / self.coeffs[-1])

    def close_to(self, other, rtol=1e-9) -> bool:
        scale = max(self.norm(), _coerce(other).norm(), 1e-300)
        return (self - other).norm() <= rtol * scale

    def __repr__(self):
        return f"ComplexPolynomial({list(self.coeffs)})"

    # -- serialization (CLI/JSON syntax: [[re, im], ...] low-to-high) ------

    def to_json(self):
        if self.is_zero:
            return [[0.0, 0.0]]
        return [[float(c.real), float(c.imag)] for c in self.coeffs]

    @classmethod
    def from_json(cls, data):
        return cls([complex(re, im) for re, im in data])


def _coerce(p) -> ComplexPolynomial:
    if isinstance(p, ComplexPolynomial):
        return p
    if np.isscalar(p):
        return ComplexPolynomial([complex(p)])
    return ComplexPolynomial(p)


ZERO = ComplexPolynomial([])
ONE = ComplexPolynomial([1.0])
Z = ComplexPolynomial([0.0, 1.0])


def from_roots(roots, leading=1.0) -> ComplexPolynomial:
    c = np.array([complex(leading)])
    for r in roots:
        c = np.convolve(c, np.array([-complex(r), 1.0]))
    return ComplexPolynomial(c)


# -- operations ------------------------------------------------------------


def evaluate(p: ComplexPolynomial, z):
    """Horner-scheme evaluation; `z` may be a scalar or an ndarray."""
    p = _coerce(p)
    if p.is_zero:
        return np.zeros_like(np.asarray(z, dtype=complex)) if isinstance(
            z, np.ndarray
        ) else 0j
    acc = np.full_like(np.asarray(z, dtype=complex), p.coeffs[-1]) if isinstance(
        z, np.ndarray
    ) else p.coeffs[-1]
    for c in p.coeffs[-2::-1]:
        acc = acc * z + c
    return acc


def derivative(p: ComplexPolynomial) -> ComplexPolynomial:
    p = _coerce(p)
    if p.coeffs.size <= 1:
        return ZERO
    k = np.arange(1, p.coeffs.size)
    return ComplexPolynomial(p.coeffs[1:] * k)


def antiderivative(p: ComplexPolynomial) -> ComplexPolynomial:
    """Primitive with zero constant term."""
    p = _coerce(p)
    if p.is_zero:
        return ZERO
    k = np.arange(1, p.coeffs.size + 1)
    return ComplexPolynomial(np.concatenate([[0j], p.coeffs / k]))


def wronskian(P: ComplexPolynomial, Q: ComplexPolynomial) -> ComplexPolynomial:
    """W(P,Q) = P'Q - PQ'."""
    P, Q = _coerce(P), _coerce(Q)
    return derivative(P) * Q - P * derivative(Q)


def divmod_poly(p: ComplexPolynomial, d: ComplexPolynomial):
    """Euclidean division p = q*d + r with deg r < deg d."""
    p, d = _coerce(p), _coerce(d)
    if d.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    r = p.coeffs.copy()
    dc = d.coeffs
    if r.size < dc.size:
        return ZERO, ComplexPolynomial(r)
    q = np.zeros(r.size - dc.size + 1, dtype=complex)
    for i in range(q.size - 1, -1, -1):
        q[i] = r[i + dc.size - 1] / dc[-1]
        r[i : i + dc.size] -= q[i] * dc
    return ComplexPolynomial(q), ComplexPolynomial(r)


def gcd(p: ComplexPolynomial, q: ComplexPolynomial, eps: float = GCD_EPS):
    """Monic gcd by Euclidean remainders with relative coefficient truncation.

    Coprime inputs give the constant polynomial 1. Raises on two zero inputs.
    """
    a, b = _coerce(p), _coerce(q)
    if a.is_zero and b.is_zero:
        raise ValueError("undefined gcd of two zero polynomials")
    if a.is_zero:
        return b.monic()
    if b.is_zero:
        return a.monic()
    while not b.is_zero:
        _, r = divmod_poly(a, b)
        # truncate coefficients that are numerically zero relative to the
        # remainder computation scale
        scale = max(a.norm(), b.norm())
        c = np.where(np.abs(r.coeffs) <= eps * scale, 0, r.coeffs)
        a, b = b, ComplexPolynomial(c)
    return a.monic()


def coprime(p: ComplexPolynomial, q: ComplexPolynomial, eps: float = GCD_EPS) -> bool:
    return gcd(p, q, eps).degree == 0


def roots(p: ComplexPolynomial, cluster_eps: float = ROOT_CLUSTER_EPS):
    """Roots with multiplicities via companion-matrix eigenvalues.

    Eigenvalues within radius cluster_eps*(1+|root|) of each other are merged
    into one root with the cluster's multiplicity and centroid location.
    Returns a list of (root, multiplicity), sorted by (re, im).
    """
    p = _coerce(p)
    if p.is_zero:
        raise ValueError("zero polynomial has all points as roots")
    if p.degree == 0:
        return []
    c = p.coeffs / p.coeffs[-1]
    n = c.size - 1
    comp = np.zeros((n, n), dtype=complex)
    comp[1:, :-1] = np.eye(n - 1)
    comp[:, -1] = -c[:-1]
    vals = np.linalg.eigvals(comp)
    clusters: list[list[complex]] = []
    for v in sorted(vals, key=lambda w: (w.real, w.imag)):
        for cl in clusters:
            center = sum(cl) / len(cl)
            if abs(v - center) <= cluster_eps * (1 + abs(center)):
                cl.append(v)
                break
        else:
            clusters.append([v])
    out = [(sum(cl) / len(cl), len(cl)) for cl in clusters]
    out.sort(key=lambda rm: (rm[0].real, rm[0].imag))
    return out


# -- 2x2 transforms on pairs ----------------------------------------------


class PairTransform:
    """A 2x2 complex matrix acting componentwise on a polynomial pair."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        m = np.asarray(entries, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError("PairTransform needs a 2x2 matrix")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    def __setattr__(self, name, value):
        raise AttributeError("PairTransform is immutable")

    @property
    def det(self) -> complex:
        m = self.entries
        return complex(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])

    def is_unitary(self, tol: float = 1e-10) -> bool:
        m = self.entries
        return bool(np.allclose(m.conj().T @ m, np.eye(2), atol=tol))

    def is_special_unitary(self, tol: float = 1e-10) -> bool:
        return self.is_unitary(tol) and abs(self.det - 1) <= tol

    def is_positive_scaled_su2(self, tol: float = 1e-10) -> bool:
        """matrix = c*U with c > 0 real and U in SU(2), within tol."""
        m = self.entries
        c = np.sqrt(abs(self.det))
        if c <= tol:
            return False
        return PairTransform(m / c).is_special_unitary(tol)

    def is_special_linear(self, tol: float = 1e-10) -> bool:
        return abs(self.det - 1) <= tol

    def inverse(self) -> "PairTransform":
        m = self.entries
        d = self.det
        if abs(d) == 0:
            raise ValueError("singular transform")
        return PairTransform(
            np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]]) / d
        )

    def __matmul__(self, other: "PairTransform") -> "PairTransform":
        return PairTransform(self.entries @ other.entries)

    def __repr__(self):
        return f"PairTransform({self.entries.tolist()})"


def act(transform: PairTransform, pair):
    """Componentwise matrix action on (P, Q).

    W(act(L, (P,Q))) = det(L) * W(P,Q).
    """
    P, Q = (_coerce(pair[0]), _coerce(pair[1]))
    m = transform.entries
    return (
        m[0, 0] * P + m[0, 1] * Q,
        m[1, 0] * P + m[1, 1] * Q,
    )
