"""Eigen-decomposition of CMV truncations, Green's functions, resolvent
bounds, and eigenfunction-decay (localization) experiments.

Truncating a unitary matrix gives a contraction, so all eigenvalues lie in
the closed unit disc; eigenvalues approaching the circle are the ones the
on-circle theory speaks about, and only those (|mu| >= modulus_min) are
compared against Lyapunov exponents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy.linalg import lapack

from .cmv import BANDWIDTH, CmvRestriction, MatrixKind, build_restriction
from .coefficients import QuasiPeriodicFamily, VerblunskySequence
from .determinants import det_lu, is_numerically_zero
from .dynamics import lyapunov_limit

EIG_LIMIT = 512
PIVOT_TOL = 1e-13
RESIDUAL_PER_SIZE = 1e-8


class SingularMatrixError(RuntimeError):
    """The shifted matrix is singular (or numerically so) at this z."""


class EigenComputationError(RuntimeError):
    """The QR iteration failed to converge; carries any partial results."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class DecayFit:
    eigenvalue: complex
    modulus: float
    peak: int
    rate: float          # nats per site; positive means decay
    r2: float
    n_points: int
    ok: bool
    reason: str = ""
    matched_exponent: float = None   # L(z) at the radially projected z


@dataclass(frozen=True)
class SpectrumReport:
    size: int
    eigenvalues: np.ndarray      # sorted by angle, then modulus
    eigenvectors: np.ndarray     # columns, unit norm, matching order
    residuals: np.ndarray        # ||C v - mu v|| per pair
    decay_fits: tuple = None

    def max_residual(self) -> float:
        return float(np.max(self.residuals, initial=0.0))


def _sorted_eig(dense: np.ndarray):
    try:
        w, v = sla.eig(dense)
    except sla.LinAlgError as exc:
        raise EigenComputationError(str(exc)) from exc
    order = np.lexsort((np.abs(w), np.angle(w) % (2.0 * np.pi)))
    return w[order], v[:, order]


def eig(m: CmvRestriction) -> SpectrumReport:
    """Full eigen-decomposition of a dense window, residual-checked."""
    n = m.size
    if n > EIG_LIMIT:
        raise ValueError(f"window size {n} beyond eigensolver limit {EIG_LIMIT}")
    if m.kind.is_aux:
        raise ValueError("eigen-decomposition targets the C/E windows")
    dense = m.to_dense()
    w, v = _sorted_eig(dense)
    residuals = np.linalg.norm(dense @ v - v * w[None, :], axis=0)
    return SpectrumReport(size=n, eigenvalues=w, eigenvectors=v,
                          residuals=residuals)


def _char_band_lu(m: CmvRestriction, z: complex):
    n = m.size
    band = m.char_band(z)
    ab = np.zeros((3 * BANDWIDTH + 1, n), dtype=complex)
    ab[BANDWIDTH:, :] = band
    lub, ipiv, info = lapack.zgbtrf(ab, BANDWIDTH, BANDWIDTH)
    if info != 0:
        raise SingularMatrixError(f"zero pivot at position {info}")
    if np.min(np.abs(lub[2 * BANDWIDTH, :])) < PIVOT_TOL:
        raise SingularMatrixError(f"pivot below {PIVOT_TOL} at z={z}")
    return lub, ipiv


def green(m: CmvRestriction, z: complex, n1: int, n2: int) -> complex:
    """Resolvent entry (z - X_[a,b])^{-1}(n1, n2), global indices.

    One banded LU solve against the n2-th unit vector.
    """
    if not (m.a <= n1 <= m.b and m.a <= n2 <= m.b):
        raise IndexError(f"({n1},{n2}) outside window [{m.a},{m.b}]")
    lub, ipiv = _char_band_lu(m, complex(z))
    rhs = np.zeros((m.size, 1), dtype=complex)
    rhs[n2 - m.a, 0] = 1.0
    sol, info = lapack.zgbtrs(lub, BANDWIDTH, BANDWIDTH, rhs, ipiv)
    if info != 0:
        raise SingularMatrixError(f"back-substitution failed, info={info}")
    return complex(sol[n1 - m.a, 0])


def green_column(m: CmvRestriction, z: complex, n2: int) -> np.ndarray:
    """Full resolvent column (z - X)^{-1}(., n2)."""
    lub, ipiv = _char_band_lu(m, complex(z))
    rhs = np.zeros((m.size, 1), dtype=complex)
    rhs[n2 - m.a, 0] = 1.0
    sol, info = lapack.zgbtrs(lub, BANDWIDTH, BANDWIDTH, rhs, ipiv)
    if info != 0:
        raise SingularMatrixError(f"back-substitution failed, info={info}")
    return sol[:, 0]


@dataclass(frozen=True)
class CramerBound:
    lhs: float          # |G(n1, n2)|
    rhs: float          # determinant ratio
    ratio: float        # lhs / rhs, the empirical constant
    flagged: bool       # denominator numerically zero; ratio meaningless


def cramer_bound_check(seq: VerblunskySequence, n0: int, z: complex,
                       n1: int, n2: int) -> CramerBound:
    """Compare a resolvent entry of the [0, n0-1] window against the
    determinant ratio |det(z-C_[0,n1-1]) det(z-C_[n2+1,n0-1])| / |det(z-C)|.

    The paper-style bound uses comparable tilde-matrices; plain windows are
    used here and only the empirical ratio is reported, never a constant.
    """
    if not 0 <= n1 <= n2 <= n0 - 1:
        raise ValueError("need 0 <= n1 <= n2 <= n0-1")
    z = complex(z)
    full = build_restriction(seq, MatrixKind.HALF_LINE, 0, n0 - 1)
    lhs = abs(green(full, z, n1, n2))
    d_full = det_lu(full, z)
    left = det_lu(build_restriction(seq, MatrixKind.HALF_LINE, 0, n1 - 1), z)
    right = det_lu(build_restriction(seq, MatrixKind.HALF_LINE, n2 + 1, n0 - 1), z)
    flagged = is_numerically_zero(d_full, n0)
    if flagged:
        return CramerBound(lhs=lhs, rhs=math.inf, ratio=0.0, flagged=True)
    rhs = abs(left) * abs(right) / abs(d_full)
    ratio = lhs / rhs if rhs > 0.0 else math.inf
    return CramerBound(lhs=lhs, rhs=rhs, ratio=ratio, flagged=False)


@dataclass(frozen=True)
class ResolventBound:
    n: int
    product: float      # dist(z, sigma(A)) * ||(A - z)^{-1}||
    bound: float        # cot(pi / (4n))
    in_domain: bool


def ds06_check(a: np.ndarray, z: complex) -> ResolventBound:
    """dist(z, sigma(A)) ||(A-z)^{-1}|| against cot(pi/4n) for |z| >= ||A||.

    The supremum over all matrices attains the bound; every individual
    instance must sit at or below it.
    """
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    z = complex(z)
    bound = 1.0 / math.tan(math.pi / (4.0 * n))
    norm_a = float(np.linalg.norm(a, 2)) if n > 0 else 0.0
    spectrum = np.linalg.eigvals(a)
    dist = float(np.min(np.abs(spectrum - z)))
    if abs(z) < norm_a or dist < 1e-14:
        return ResolventBound(n=n, product=float("nan"), bound=bound,
                              in_domain=False)
    smin = float(np.min(np.linalg.svd(a - z * np.eye(n), compute_uv=False)))
    return ResolventBound(n=n, product=dist / smin, bound=bound, in_domain=True)


def _fit_decay(amplitudes: np.ndarray, peak: int, buffer_sites: int,
               edge_sites: int, floor_ratio: float, min_points: int):
    """Least-squares slope of log|xi_j| against |j - peak| on the usable tail."""
    n = len(amplitudes)
    top = amplitudes[peak]
    if top <= 0.0:
        return None, None, 0, "zero peak amplitude"
    lo, hi = edge_sites, n - edge_sites
    sites = [j for j in range(lo, hi)
             if abs(j - peak) > buffer_sites and amplitudes[j] > floor_ratio * top]
    if len(sites) < min_points:
        return None, None, len(sites), "too few usable tail sites"
    xs = np.array([abs(j - peak) for j in sites], dtype=float)
    ys = np.log(amplitudes[np.array(sites)])
    design = np.vstack([xs, np.ones_like(xs)]).T
    coef, *_ = np.linalg.lstsq(design, ys, rcond=None)
    pred = design @ coef
    ss_res = float(np.sum((ys - pred) ** 2))
    ss_tot = float(np.sum((ys - np.mean(ys)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0.0 else 0.0
    return float(-coef[0]), float(r2), len(sites), ""


def localize(family: QuasiPeriodicFamily, size: int, x0: float = 0.0,
             modulus_min: float = 0.99, buffer_sites: int = 5,
             edge_sites: int = 5, floor_ratio: float = 1e-12,
             min_points: int = 8, schedule=(50, 100, 200),
             lyap_grid: int = 256, threads: int = 1,
             match_lyapunov: bool = True) -> SpectrumReport:
    """Eigenfunction-decay experiment on the [0, size-1] truncation.

    Fits log|xi_j| versus distance from the peak site on the usable tail
    (outside a peak buffer, away from both window edges, above the
    amplitude floor).  For eigenvalues with |mu| >= modulus_min the fitted
    rate is matched against the Lyapunov exponent at z = mu/|mu|.
    """
    seq = family.at(x0)
    report = eig(build_restriction(seq, MatrixKind.HALF_LINE, 0, size - 1))
    fits = []
    cache = {}
    for idx in range(report.size):
        mu = complex(report.eigenvalues[idx])
        modulus = abs(mu)
        amps = np.abs(report.eigenvectors[:, idx])
        peak = int(np.argmax(amps))
        rate, r2, npts, reason = _fit_decay(
            amps, peak, buffer_sites, edge_sites, floor_ratio, min_points)
        matched = None
        ok = rate is not None
        if ok and modulus >= modulus_min and match_lyapunov:
            zkey = complex(mu / modulus)
            if zkey not in cache:
                cache[zkey] = lyapunov_limit(family, zkey, schedule,
                                             lyap_grid, threads).last
            matched = cache[zkey]
        fits.append(DecayFit(
            eigenvalue=mu, modulus=modulus, peak=peak,
            rate=rate if ok else 0.0, r2=r2 if ok else 0.0,
            n_points=npts, ok=ok, reason=reason,
            matched_exponent=matched))
    return SpectrumReport(size=report.size, eigenvalues=report.eigenvalues,
                          eigenvectors=report.eigenvectors,
                          residuals=report.residuals, decay_fits=tuple(fits))


def norm_determinant_sandwich(seq: VerblunskySequence, n: int, z: complex):
    """The testable two-sided bound linking the transfer-matrix norm to the
    window determinants on the circle:

        P |d0|  <=  ||S_n||  <=  8 P max(|d0|, |d1|),   P = prod rho_j^{-1}

    Returns (lower, norm, upper).
    """
    from .cocycle import operator_norm, transfer
    from .polynomials import norm_product

    z = complex(z)
    d0 = det_lu(build_restriction(seq, MatrixKind.HALF_LINE, 0, n - 1), z)
    d1 = det_lu(build_restriction(seq, MatrixKind.HALF_LINE, 1, n - 1), z)
    pref = 1.0 / norm_product(seq, n)
    norm = operator_norm(transfer(seq, n, z))
    return pref * abs(d0), norm, 8.0 * pref * max(abs(d0), abs(d1))
