"""Complex polynomials, the Szego dual, and orthogonal-polynomial recurrences.

Coefficients are stored ascending (index k = coefficient of z^k) and keep an
explicit nominal degree: the array length is nominal_degree + 1 even when
trailing coefficients vanish, because the dual (reversal) depends on the
degree it is taken at.
"""

from __future__ import annotations

import numpy as np

from .coefficients import VerblunskySequence, coefficient_at, rho_at

UNIT_MODULUS_TOL = 1e-12

AB_CANCEL_TOL = 1e-10


class InternalConsistencyError(RuntimeError):
    """A structural cancellation failed; signals a builder bug upstream."""


class Polynomial:
    """Zero-padded complex polynomial with an explicit nominal degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = np.asarray(coeffs, dtype=complex).reshape(-1)

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls(np.zeros(0))

    @classmethod
    def one(cls) -> "Polynomial":
        return cls(np.ones(1))

    @property
    def nominal_degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def degree(self) -> int:
        """Index of the last nonzero coefficient (-1 for the zero polynomial)."""
        nz = np.nonzero(self.coeffs)[0]
        return int(nz[-1]) if len(nz) else -1

    def padded(self, n: int) -> np.ndarray:
        if n + 1 < len(self.coeffs):
            raise ValueError(f"cannot pad to degree {n} below length {len(self.coeffs)}")
        out = np.zeros(n + 1, dtype=complex)
        out[:len(self.coeffs)] = self.coeffs
        return out

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(self.nominal_degree, other.nominal_degree)
        return Polynomial(self.padded(n) + other.padded(n))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        n = max(self.nominal_degree, other.nominal_degree)
        return Polynomial(self.padded(n) - other.padded(n))

    def __mul__(self, scalar) -> "Polynomial":
        return Polynomial(self.coeffs * complex(scalar))

    __rmul__ = __mul__

    def shift(self, k: int = 1) -> "Polynomial":
        """Multiply by z^k."""
        if k < 0:
            raise ValueError("negative shift")
        return Polynomial(np.concatenate([np.zeros(k, dtype=complex), self.coeffs]))

    def __call__(self, z: complex) -> complex:
        return evaluate(self, z)

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)})"

    def to_json(self):
        return [[c.real, c.imag] for c in self.coeffs]

    @classmethod
    def from_json(cls, data) -> "Polynomial":
        return cls([complex(re, im) for re, im in data])


def evaluate(p: Polynomial, z: complex) -> complex:
    """Horner evaluation."""
    acc = 0.0 + 0.0j
    for c in p.coeffs[::-1]:
        acc = acc * z + c
    return acc


def szego_dual(p: Polynomial, n: int = None) -> Polynomial:
    """Reversal at nominal degree n: coefficient k becomes conj(coeff n-k).

    An involution at fixed n.  n defaults to the nominal degree of p.
    """
    if n is None:
        n = p.nominal_degree
    if n < p.degree:
        raise ValueError(f"dual degree {n} below actual degree {p.degree}")
    return Polynomial(np.conj(p.padded(n))[::-1])


def dual_at_point(value: complex, z: complex, n: int) -> complex:
    """Apply the degree-n dual to a value already evaluated on the circle:
    z^n * conj(value).  Only valid for |z| = 1.
    """
    if abs(abs(z) - 1.0) > UNIT_MODULUS_TOL:
        raise ValueError(f"pointwise dual needs |z| = 1, got |z| = {abs(z)}")
    return z ** n * np.conj(value)


def norm_product(seq: VerblunskySequence, n: int) -> float:
    """prod_{j<n} rho_j, the norm of the degree-n monic orthogonal polynomial."""
    out = 1.0
    for j in range(n):
        out *= rho_at(seq, j)
    return out


def _phi_pair(seq: VerblunskySequence, n: int):
    """Coefficient arrays of (Phi_n, Phi*_n), run by the coupled recurrences."""
    phi = np.zeros(n + 1, dtype=complex)
    dual = np.zeros(n + 1, dtype=complex)
    phi[0] = 1.0
    dual[0] = 1.0
    for k in range(n):
        alpha = coefficient_at(seq, k)
        zphi = np.roll(phi, 1)
        zphi[0] = 0.0
        new_phi = zphi - np.conj(alpha) * dual
        new_dual = dual - alpha * zphi
        phi, dual = new_phi, new_dual
    return phi, dual


def phi_monic(seq: VerblunskySequence, n: int) -> Polynomial:
    """Monic orthogonal polynomial Phi_n from the Szego recurrence
    Phi_{k+1} = z Phi_k - conj(alpha_k) Phi*_k, with Phi_0 = 1.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    return Polynomial(_phi_pair(seq, n)[0])


def psi_second_kind(seq: VerblunskySequence, n: int) -> Polynomial:
    """Second-kind polynomial: Phi_n of the sign-flipped sequence."""
    return phi_monic(seq.rotated(-1.0), n)


def ab_decomposition(seq: VerblunskySequence, n: int):
    """The pair (A_{n-1}, B_{n-1}) with

        A_{n-1}(z) = (Phi*_n(z) - Psi*_n(z)) / (2z)
        B_{n-1}(z) = (Phi*_n(z) + Psi*_n(z)) / 2

    The division by z is exact at coefficient level: the constant terms of
    Phi*_n and Psi*_n cancel.  A failed cancellation raises
    InternalConsistencyError.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    phi_dual = _phi_pair(seq, n)[1]
    psi_dual = _phi_pair(seq.rotated(-1.0), n)[1]
    diff = phi_dual - psi_dual
    total = phi_dual + psi_dual
    if abs(diff[0]) > AB_CANCEL_TOL:
        raise InternalConsistencyError(
            f"constant term {diff[0]} of Phi*_n - Psi*_n did not cancel")
    if abs(total[n]) > AB_CANCEL_TOL:
        raise InternalConsistencyError(
            f"leading term {total[n]} of Phi*_n + Psi*_n did not cancel")
    a = Polynomial(diff[1:] / 2.0)
    b = Polynomial(total[:n] / 2.0)
    return a, b


def transfer_from_ab(seq: VerblunskySequence, n: int, z: complex) -> np.ndarray:
    """The n-step transfer matrix assembled from the A/B decomposition:

        prod rho_j^{-1} * [[z B*(z), A*(z)], [z A(z), B(z)]]

    with the duals taken at nominal degree n - 1.  Used as an independent
    cross-check of the cocycle product.
    """
    a, b = ab_decomposition(seq, n)
    a_dual = szego_dual(a, n - 1)
    b_dual = szego_dual(b, n - 1)
    pref = 1.0 / norm_product(seq, n)
    return pref * np.array([
        [z * evaluate(b_dual, z), evaluate(a_dual, z)],
        [z * evaluate(a, z), evaluate(b, z)],
    ])
