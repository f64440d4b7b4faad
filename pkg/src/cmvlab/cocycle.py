"""Szego cocycle steps, n-step transfer matrices, and the unit-determinant
normalization.

The one-step map at coefficient alpha is

    S = (1/rho) [[z, -conj(alpha)], [-alpha z, 1]],   det S = z,

and the n-step matrix multiplies steps alpha_0 .. alpha_{n-1} with the last
step leftmost.  The normalized variant M = S / sqrt(z) has unit determinant
and is unitarily conjugate to a real matrix by Q; its norm equals the norm
of S on the unit circle.

Large products carry an explicit power-of-two exponent so norms of long
products never overflow; the stored mantissa matrix is exact up to that
exponent shift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .coefficients import VerblunskySequence, rho_of

UNIT_MODULUS_TOL = 1e-12

# Q = (-1/(1+i)) [[1, -i], [1, i]]; unitary, Q* M Q is real for M-type inputs
Q_MATRIX = np.array([[-0.5 + 0.5j, 0.5 + 0.5j],
                     [-0.5 + 0.5j, -0.5 - 0.5j]])


@dataclass(frozen=True)
class Transfer2x2:
    """A 2x2 complex matrix with a power-of-two scale: value = mat * 2**exp2.

    The determinant is tracked multiplicatively through compositions (the
    determinant of a long product cannot be recovered from its nearly
    rank-one entries); a freshly wrapped matrix computes it entrywise.

    Indexing follows the display convention: entry(1, 1) is top-left.
    """

    mat: np.ndarray
    exp2: int = 0
    det_val: complex = None

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=complex).reshape(2, 2)
        object.__setattr__(self, "mat", mat)
        if self.det_val is None:
            d = mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0]
            object.__setattr__(self, "det_val", complex(d) * 4.0 ** self.exp2)

    @classmethod
    def identity(cls) -> "Transfer2x2":
        return cls(np.eye(2, dtype=complex))

    def entry(self, i: int, j: int) -> complex:
        """1-based display indexing: entry(1, 2) is the top-right element."""
        return complex(self.mat[i - 1, j - 1]) * 2.0 ** self.exp2

    def to_array(self) -> np.ndarray:
        return self.mat * 2.0 ** self.exp2

    def det(self) -> complex:
        return self.det_val

    def __matmul__(self, other: "Transfer2x2") -> "Transfer2x2":
        return Transfer2x2(self.mat @ other.mat, self.exp2 + other.exp2,
                           self.det_val * other.det_val)

    def scaled(self, factor: complex) -> "Transfer2x2":
        return Transfer2x2(self.mat * factor, self.exp2,
                           self.det_val * factor * factor)

    def inv(self) -> "Transfer2x2":
        d = self.mat[0, 0] * self.mat[1, 1] - self.mat[0, 1] * self.mat[1, 0]
        adj = np.array([[self.mat[1, 1], -self.mat[0, 1]],
                        [-self.mat[1, 0], self.mat[0, 0]]])
        return Transfer2x2(adj / d, -self.exp2, 1.0 / self.det_val)


def sqrt_branch(z: complex) -> complex:
    """sqrt(e^{i theta}) = e^{i theta/2} with theta in [0, 2 pi)."""
    theta = math.atan2(z.imag, z.real)
    if theta < 0.0:
        theta += 2.0 * math.pi
    r = math.sqrt(abs(z))
    return complex(r * math.cos(theta / 2.0), r * math.sin(theta / 2.0))


def szego_step(alpha: complex, z: complex) -> Transfer2x2:
    """One Szego cocycle step; det = z."""
    alpha = complex(alpha)
    z = complex(z)
    inv = 1.0 / rho_of(alpha)
    return Transfer2x2(np.array([
        [z * inv, -np.conj(alpha) * inv],
        [-alpha * z * inv, inv],
    ]))


def m_step(alpha: complex, z: complex) -> Transfer2x2:
    """The determinant-normalized step (1/rho) [[sqrt(z), -conj(a)/sqrt(z)],
    [-sqrt(z) a, 1/sqrt(z)]]; requires |z| = 1, det = 1."""
    z = complex(z)
    if abs(abs(z) - 1.0) > UNIT_MODULUS_TOL:
        raise ValueError(f"normalized step needs |z| = 1, got {abs(z)}")
    alpha = complex(alpha)
    s = sqrt_branch(z)
    si = 1.0 / s
    inv = 1.0 / rho_of(alpha)
    return Transfer2x2(np.array([
        [s * inv, -np.conj(alpha) * si * inv],
        [-s * alpha * inv, si * inv],
    ]))


def transfer(seq: VerblunskySequence, n: int, z: complex) -> Transfer2x2:
    """Ordered product of Szego steps alpha_0 .. alpha_{n-1} (last leftmost).

    det = z^n.  n = 0 gives the identity.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return Transfer2x2.identity()
    alphas = seq.alphas(0, n).reshape(1, n)
    mats, exp2, dets, dexp2 = kernels.cocycle_products(alphas, complex(z))
    return Transfer2x2(mats[0], int(exp2[0]),
                       complex(dets[0]) * 2.0 ** int(dexp2[0]))


def m_transfer(seq: VerblunskySequence, n: int, z: complex) -> Transfer2x2:
    """Product of normalized steps: equals transfer(...) times z^{-n/2}
    in the fixed branch.  det = 1; norm equals the Szego product's norm."""
    z = complex(z)
    if abs(abs(z) - 1.0) > UNIT_MODULUS_TOL:
        raise ValueError(f"normalized transfer needs |z| = 1, got {abs(z)}")
    t = transfer(seq, n, z)
    theta = math.atan2(z.imag, z.real)
    if theta < 0.0:
        theta += 2.0 * math.pi
    phase = -0.5 * n * theta
    return t.scaled(complex(math.cos(phase), math.sin(phase)))


def q_conjugate(t: Transfer2x2) -> Transfer2x2:
    """Q* t Q with the fixed unitary Q; real for unit-determinant M-type input."""
    return Transfer2x2(Q_MATRIX.conj().T @ t.mat @ Q_MATRIX, t.exp2, t.det_val)


def _sigma_parts(mat: np.ndarray):
    """(scale m, sigma_max of mat/m); closed-form 2x2 top singular value."""
    m = float(np.max(np.maximum(np.abs(mat.real), np.abs(mat.imag))))
    if m == 0.0:
        return 0.0, 0.0
    b = mat / m
    g = float(np.sum(b.real * b.real + b.imag * b.imag))
    det = b[0, 0] * b[1, 1] - b[0, 1] * b[1, 0]
    dd = det.real * det.real + det.imag * det.imag
    disc = max(g * g - 4.0 * dd, 0.0)
    return m, math.sqrt((g + math.sqrt(disc)) / 2.0)


def operator_norm(t: Transfer2x2) -> float:
    """Largest singular value (exact 2x2 formula, no iteration)."""
    m, sig = _sigma_parts(t.mat)
    if m == 0.0:
        return 0.0
    return sig * m * 2.0 ** t.exp2


def log_operator_norm(t: Transfer2x2) -> float:
    """log of the largest singular value; immune to overflow of the value."""
    m, sig = _sigma_parts(t.mat)
    if m == 0.0:
        return -math.inf
    return math.log(sig) + math.log(m) + t.exp2 * math.log(2.0)


def inverse_norm(t: Transfer2x2) -> float:
    """Norm of the inverse: sigma_max / |det|."""
    m, sig = _sigma_parts(t.mat)
    if m == 0.0:
        raise ZeroDivisionError("singular transfer matrix")
    det = t.mat[0, 0] * t.mat[1, 1] - t.mat[0, 1] * t.mat[1, 0]
    return sig / (abs(det) / m) / 2.0 ** t.exp2
