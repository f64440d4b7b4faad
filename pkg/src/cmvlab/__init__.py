"""CMV matrices, Szego cocycles, and their determinant-transfer identities.

The package builds finite windows of the pentadiagonal CMV matrices, runs
the Szego cocycle, cross-checks the determinant formulas for the n-step
transfer matrix against the direct product, and drives the quasi-periodic
application pipeline: Lyapunov exponents, large-deviation statistics,
Green's function decay and eigenfunction localization.
"""

from .cmv import CmvRestriction, MatrixKind, build_aux_p, build_restriction
from .coefficients import (
    ConstantSequence,
    ExplicitSequence,
    QuasiPeriodicFamily,
    QuasiPeriodicSequence,
    RandomSequence,
    TrigPhase,
    VerblunskySequence,
    coefficient_at,
    rho_at,
    rotate_sequence,
)
from .cocycle import (
    Transfer2x2,
    m_step,
    m_transfer,
    operator_norm,
    q_conjugate,
    szego_step,
    transfer,
)
from .determinants import charpoly_coeffs, det_lu, det_recurrence
from .kernels import BACKEND
from .polynomials import (
    Polynomial,
    ab_decomposition,
    dual_at_point,
    evaluate,
    phi_monic,
    psi_second_kind,
    szego_dual,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CmvRestriction",
    "ConstantSequence",
    "ExplicitSequence",
    "MatrixKind",
    "Polynomial",
    "QuasiPeriodicFamily",
    "QuasiPeriodicSequence",
    "RandomSequence",
    "Transfer2x2",
    "TrigPhase",
    "VerblunskySequence",
    "ab_decomposition",
    "build_aux_p",
    "build_restriction",
    "charpoly_coeffs",
    "coefficient_at",
    "det_lu",
    "det_recurrence",
    "dual_at_point",
    "evaluate",
    "m_step",
    "m_transfer",
    "operator_norm",
    "phi_monic",
    "psi_second_kind",
    "q_conjugate",
    "rho_at",
    "rotate_sequence",
    "szego_dual",
    "szego_step",
    "transfer",
]
