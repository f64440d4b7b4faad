"""Finite restrictions of CMV matrices.

Builds the windowed half-line matrix C_[a,b], the extended (bi-infinite)
matrix E_[a,b], their sign-flipped variants C', E' (all Verblunsky
coefficients negated), and the auxiliary matrices P_{n-1}, P'_{n-1} that
appear in the first-column expansion of det(z - E_[0,n-1]).

All six are pentadiagonal.  Entries are read directly off the displayed
matrix patterns; the half-line matrix is the extended pattern with the
boundary convention alpha_{-1} = -1 (hence rho_{-1} = 0), which reproduces
the top-left block (alpha0bar, rho0) exactly.

Storage is dense up to DENSE_LIMIT and banded (5 diagonals) beyond; both
expose the same read access.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .coefficients import QuasiPeriodicSequence, VerblunskySequence

DENSE_LIMIT = 64
BANDWIDTH = 2


class MatrixKind(enum.Enum):
    HALF_LINE = "C"
    EXTENDED = "E"
    HALF_LINE_PRIMED = "C'"
    EXTENDED_PRIMED = "E'"
    AUX_P = "P"
    AUX_P_PRIMED = "P'"

    @property
    def primed(self) -> bool:
        return self in (MatrixKind.HALF_LINE_PRIMED, MatrixKind.EXTENDED_PRIMED,
                        MatrixKind.AUX_P_PRIMED)

    @property
    def unprimed(self) -> "MatrixKind":
        return {
            MatrixKind.HALF_LINE_PRIMED: MatrixKind.HALF_LINE,
            MatrixKind.EXTENDED_PRIMED: MatrixKind.EXTENDED,
            MatrixKind.AUX_P_PRIMED: MatrixKind.AUX_P,
        }.get(self, self)

    @property
    def is_aux(self) -> bool:
        return self.unprimed is MatrixKind.AUX_P


@dataclass
class CmvRestriction:
    """A finite window of one of the six matrix kinds.

    ``matrix`` holds the z-independent entries (the matrix itself for C/E
    kinds, the z = 0 part for the auxiliary P kinds).  ``zmask`` marks the
    diagonal positions that carry +z for the P kinds; it is None for C/E.

    The characteristic matrix, whose plain determinant the det engines
    evaluate, is z*I - matrix for C/E and matrix + z*diag(zmask) for P.
    """

    kind: MatrixKind
    a: int
    b: int
    source: VerblunskySequence
    _dense: np.ndarray = None
    _band: np.ndarray = None
    zmask: np.ndarray = None

    @property
    def size(self) -> int:
        return self.b - self.a + 1

    @property
    def is_empty(self) -> bool:
        return self.size == 0

    @property
    def banded_storage(self) -> bool:
        return self._band is not None

    def entry(self, i: int, j: int) -> complex:
        """Matrix entry at global indices (i, j) within the window."""
        if not (self.a <= i <= self.b and self.a <= j <= self.b):
            raise IndexError(f"({i},{j}) outside window [{self.a},{self.b}]")
        li, lj = i - self.a, j - self.a
        if self._dense is not None:
            return complex(self._dense[li, lj])
        if abs(li - lj) > BANDWIDTH:
            return 0.0 + 0.0j
        return complex(self._band[BANDWIDTH + li - lj, lj])

    def to_dense(self) -> np.ndarray:
        if self._dense is not None:
            return self._dense.copy()
        n = self.size
        out = np.zeros((n, n), dtype=complex)
        for off in range(-BANDWIDTH, BANDWIDTH + 1):
            d = np.diagonal(out, off)
            d.setflags(write=True)
            if off >= 0:
                d[:] = self._band[BANDWIDTH - off, off:off + len(d)]
            else:
                d[:] = self._band[BANDWIDTH - off, :len(d)]
        return out

    def char_matrix(self, z: complex) -> np.ndarray:
        """Dense matrix whose determinant is det(z - X), resp. det P(z)."""
        m = self.to_dense()
        if self.kind.is_aux:
            np.fill_diagonal(m, np.diagonal(m) + z * self.zmask)
            return m
        return z * np.eye(self.size, dtype=complex) - m

    def char_band(self, z: complex) -> np.ndarray:
        """Characteristic matrix in 5-diagonal band storage.

        Row BANDWIDTH + i - j, column j holds entry (i, j).
        """
        n = self.size
        if self._band is not None:
            band = self._band.copy()
        else:
            band = np.zeros((2 * BANDWIDTH + 1, n), dtype=complex)
            for off in range(-BANDWIDTH, BANDWIDTH + 1):
                d = np.diagonal(self._dense, off)
                if off >= 0:
                    band[BANDWIDTH - off, off:off + len(d)] = d
                else:
                    band[BANDWIDTH - off, :len(d)] = d
        if self.kind.is_aux:
            band[BANDWIDTH, :] += z * self.zmask
            return band
        band *= -1.0
        band[BANDWIDTH, :] += z
        return band


def _alpha_lookup(seq: VerblunskySequence, kind: MatrixKind, lo: int, hi: int):
    """Coefficient accessors a(g), r(g) for global indices lo..hi.

    For the half-line kinds, alpha_{-1} is the boundary value -1 (rho = 0).
    """
    base = kind.unprimed
    halfline = base is MatrixKind.HALF_LINE
    vals = {}
    for g in range(lo, hi + 1):
        if halfline and g == -1:
            continue
        seq._check_index(g)
        vals[g] = complex(seq.alpha(g))
    if kind.primed:
        vals = {g: -v for g, v in vals.items()}
    if halfline and lo <= -1:
        # boundary value of the half-line pattern, not a sequence entry:
        # never sign-flipped by the primed kinds
        vals[-1] = -1.0 + 0.0j

    def a(g):
        return vals[g]

    def r(g):
        v = vals[g]
        m2 = v.real * v.real + v.imag * v.imag
        return float(np.sqrt(max(1.0 - m2, 0.0)))

    return a, r


def _pattern_entry(a, r, i: int, j: int) -> complex:
    """Entry (i, j) of the pentadiagonal CMV pattern (rows paired 2k/2k+1)."""
    d = j - i
    if i % 2 == 0:
        if d == -1:
            return a(i).conjugate() * r(i - 1)
        if d == 0:
            return -a(i).conjugate() * a(i - 1)
        if d == 1:
            return a(i + 1).conjugate() * r(i)
        if d == 2:
            return r(i + 1) * r(i)
    else:
        if d == -2:
            return r(i - 1) * r(i - 2)
        if d == -1:
            return -r(i - 1) * a(i - 2)
        if d == 0:
            return -a(i).conjugate() * a(i - 1)
        if d == 1:
            return -r(i) * a(i - 1)
    return 0.0 + 0.0j


def build_restriction(seq: VerblunskySequence, kind: MatrixKind,
                      a: int, b: int) -> CmvRestriction:
    """Window [a, b] of C, E, C' or E'.  b = a - 1 gives the empty window."""
    if kind.is_aux:
        raise ValueError("use build_aux_p for the auxiliary P matrices")
    if b < a - 1:
        raise ValueError(f"invalid window [{a},{b}]")
    if kind.unprimed is MatrixKind.HALF_LINE and a < 0:
        raise ValueError(f"half-line window must start at a >= 0, got {a}")
    n = b - a + 1
    if n == 0:
        return CmvRestriction(kind, a, b, seq,
                              _dense=np.zeros((0, 0), dtype=complex))
    av, rv = _alpha_lookup(seq, kind, a - 1, b)
    dense = n <= DENSE_LIMIT
    if dense:
        out = np.zeros((n, n), dtype=complex)
    else:
        out = np.zeros((2 * BANDWIDTH + 1, n), dtype=complex)
    for i in range(a, b + 1):
        for j in range(max(a, i - BANDWIDTH), min(b, i + BANDWIDTH) + 1):
            v = _pattern_entry(av, rv, i, j)
            if dense:
                out[i - a, j - a] = v
            else:
                out[BANDWIDTH + i - j, j - a] = v
    if dense:
        return CmvRestriction(kind, a, b, seq, _dense=out)
    return CmvRestriction(kind, a, b, seq, _band=out)


def build_aux_p(seq: VerblunskySequence, n: int, primed: bool = False) -> CmvRestriction:
    """The (n-1) x (n-1) matrix P_{n-1} (or P'_{n-1}).

    P is the minor of (z - E_[0,n-1]) on rows {0, 2, 3, .., n-1} and columns
    {1, .., n-1}.  Stored as its z = 0 part plus a diagonal z mask (the
    (0, 0) entry carries no z).  n = 1 yields the empty matrix.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    kind = MatrixKind.AUX_P_PRIMED if primed else MatrixKind.AUX_P
    m = n - 1
    if m == 0:
        return CmvRestriction(kind, 0, -1, seq,
                              _dense=np.zeros((0, 0), dtype=complex),
                              zmask=np.zeros(0))
    # only alpha_1..alpha_{n-1} enter; the primed variant negates exactly those
    av, rv = _alpha_lookup(seq, kind, 0, n - 1)
    rowmap = [0] + list(range(2, n))
    mask = np.ones(m)
    mask[0] = 0.0
    dense = m <= DENSE_LIMIT
    if dense:
        out = np.zeros((m, m), dtype=complex)
    else:
        out = np.zeros((2 * BANDWIDTH + 1, m), dtype=complex)
    for li in range(m):
        gi = rowmap[li]
        for lj in range(max(0, li - BANDWIDTH), min(m - 1, li + BANDWIDTH) + 1):
            gj = lj + 1
            if abs(gi - gj) > BANDWIDTH:
                continue
            v = -_pattern_entry(av, rv, gi, gj)
            if dense:
                out[li, lj] = v
            else:
                out[BANDWIDTH + li - lj, lj] = v
    if dense:
        return CmvRestriction(kind, 0, m - 1, seq, _dense=out, zmask=mask)
    return CmvRestriction(kind, 0, m - 1, seq, _band=out, zmask=mask)


def shift_covariance_check(seq: QuasiPeriodicSequence, a: int, b: int,
                           tol: float = 1e-12) -> bool:
    """Whether the window at phase x + omega is the transpose of the window
    shifted by one index at phase x.

    Checked on the extended pattern, which is translation covariant at every
    index (the half-line matrix agrees with it for a >= 1).
    """
    return shift_covariance_residual(seq, a, b) <= tol


def shift_covariance_residual(seq: QuasiPeriodicSequence, a: int, b: int) -> float:
    if not isinstance(seq, QuasiPeriodicSequence):
        raise TypeError("shift covariance is a quasi-periodic property")
    lhs = build_restriction(seq.shifted(seq.omega), MatrixKind.EXTENDED, a, b)
    rhs = build_restriction(seq, MatrixKind.EXTENDED, a + 1, b + 1)
    return float(np.max(np.abs(lhs.to_dense() - rhs.to_dense().T), initial=0.0))
