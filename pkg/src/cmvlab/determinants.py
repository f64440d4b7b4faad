"""Characteristic determinants det(z - X_[a,b]) by two independent engines.

``det_lu`` is the oracle engine: banded (or dense) LU with partial pivoting,
sign tracked from the pivot sequence.  ``det_recurrence`` evaluates the same
quantity through the first-column relations and the full expansion of the
extended-matrix determinant, so each engine tests the other.

``charpoly_coeffs`` recovers the monic characteristic polynomial by
evaluating on a circle slightly outside the unit disc and inverting the DFT.
"""

from __future__ import annotations

import warnings

import numpy as np
from scipy.linalg import LinAlgWarning, lapack, lu_factor

from .cmv import BANDWIDTH, CmvRestriction, MatrixKind, build_aux_p, build_restriction
from .coefficients import VerblunskySequence, coefficient_at, rho_at
from .polynomials import Polynomial

DESK_LIMIT = 4096
CHARPOLY_LIMIT = 256

# |det| below NUMZERO_PER_SIZE * n is reported as numerically zero
NUMZERO_PER_SIZE = 1e-13

# interpolation circle for charpoly recovery; just outside the spectral disc
# (radius much larger than 1 makes the rescaled DFT wildly ill-conditioned)
CHARPOLY_RADIUS = 1.1


def is_numerically_zero(value: complex, size: int) -> bool:
    return abs(value) < NUMZERO_PER_SIZE * max(size, 1)


def det_lu(m: CmvRestriction, z: complex) -> complex:
    """det of the characteristic matrix at z via pivoted LU; empty window -> 1."""
    n = m.size
    if n > DESK_LIMIT:
        raise ValueError(f"window size {n} beyond desk-scale limit {DESK_LIMIT}")
    if n == 0:
        return 1.0 + 0.0j
    z = complex(z)
    if n <= 2 * BANDWIDTH + 1 or not m.banded_storage:
        a = m.char_matrix(z)
        if n == 1:
            return complex(a[0, 0])
        with warnings.catch_warnings():
            # an exactly zero pivot means det = 0, a valid result
            warnings.simplefilter("ignore", LinAlgWarning)
            lu, piv = lu_factor(a, check_finite=False)
        sign = 1.0 if np.count_nonzero(piv != np.arange(n)) % 2 == 0 else -1.0
        return complex(sign * np.prod(np.diag(lu)))
    band = m.char_band(z)
    ab = np.zeros((3 * BANDWIDTH + 1, n), dtype=complex)
    ab[BANDWIDTH:, :] = band
    lub, ipiv, info = lapack.zgbtrf(ab, BANDWIDTH, BANDWIDTH)
    if info < 0:
        raise ValueError(f"zgbtrf failed with info={info}")
    sign = 1.0 if np.count_nonzero(ipiv != np.arange(1, n + 1)) % 2 == 0 else -1.0
    return complex(sign * np.prod(lub[2 * BANDWIDTH, :]))


def _extended_dets(seq: VerblunskySequence, b: int, z: complex) -> list:
    """D[k] = det(z - E_[k, b]) for k = 1..b+1, by the one-row expansion

        D_k = (z + conj(a_k) a_{k-1}) D_{k+1}
              + sum_{m>k} conj(a_m) a_{k-1} (prod_{j=k}^{m-1} rho_j^2) D_{m+1}

    with D_{b+1} = 1 (empty window).  Returns a dict-like list indexed by k.
    """
    z = complex(z)
    d = {b + 1: 1.0 + 0.0j}
    alphas = {k: coefficient_at(seq, k) for k in range(0, b + 1)}
    rho2 = {k: 1.0 - abs(alphas[k]) ** 2 for k in range(0, b + 1)}
    for k in range(b, 0, -1):
        acc = (z + np.conj(alphas[k]) * alphas[k - 1]) * d[k + 1]
        prod = 1.0
        for mm in range(k + 1, b + 1):
            prod *= rho2[mm - 1]
            acc += np.conj(alphas[mm]) * alphas[k - 1] * prod * d[mm + 1]
        d[k] = acc
    return d


def det_recurrence(seq: VerblunskySequence, kind: MatrixKind,
                   window, z: complex) -> complex:
    """Same value as det_lu on C/E windows starting at 0 or 1, computed from
    the expansion relations instead of elimination.

    Windows starting at 1 run the full extended-matrix expansion; windows
    starting at 0 apply the one-step relation through det P_{n-1} (the
    auxiliary determinant vanishes from the relation at n = 1).
    """
    a, b = window
    z = complex(z)
    if kind not in (MatrixKind.HALF_LINE, MatrixKind.EXTENDED):
        raise ValueError(f"unsupported kind {kind}")
    if a not in (0, 1):
        raise ValueError(f"window must start at 0 or 1, got {a}")
    if b < a - 1:
        raise ValueError(f"invalid window [{a},{b}]")
    if b == a - 1:
        return 1.0 + 0.0j
    if a == 1:
        return complex(_extended_dets(seq, b, z)[1])
    n = b + 1
    d1 = complex(_extended_dets(seq, b, z)[1]) if n > 1 else 1.0 + 0.0j
    if n == 1:
        det_p = 0.0 + 0.0j
    else:
        det_p = det_lu(build_aux_p(seq, n), z)
    alpha0 = coefficient_at(seq, 0)
    rho0 = rho_at(seq, 0)
    if kind is MatrixKind.HALF_LINE:
        if n == 1:
            return z - np.conj(alpha0)
        return complex((z - np.conj(alpha0)) * d1 + rho0 * det_p)
    alpha_m1 = coefficient_at(seq, -1)
    if n == 1:
        return z + np.conj(alpha0) * alpha_m1
    return complex((z + np.conj(alpha0) * alpha_m1) * d1 - rho0 * alpha_m1 * det_p)


def charpoly_coeffs(m: CmvRestriction) -> Polynomial:
    """Monic characteristic polynomial of a C/E restriction, recovered by
    evaluation at scaled roots of unity followed by the inverse DFT."""
    if m.kind.is_aux:
        raise ValueError("characteristic polynomial is defined for C/E kinds")
    n = m.size
    if n > CHARPOLY_LIMIT:
        raise ValueError(f"window size {n} beyond charpoly limit {CHARPOLY_LIMIT}")
    if n == 0:
        return Polynomial.one()
    npts = n + 1
    nodes = CHARPOLY_RADIUS * np.exp(2j * np.pi * np.arange(npts) / npts)
    values = np.array([det_lu(m, zk) for zk in nodes])
    coeffs = (np.fft.fft(values) / npts) / CHARPOLY_RADIUS ** np.arange(npts)
    coeffs[n] = 1.0
    return Polynomial(coeffs)
