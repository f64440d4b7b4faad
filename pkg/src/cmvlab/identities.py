"""Numerical verification of the determinant / transfer-matrix identities.

Every check here pits two independently computed quantities against each
other and reports the residual, both absolute and relative to the scale of
the operands.  The two central evaluators rebuild the n-step transfer
matrix purely from characteristic determinants:

  half-line window form:
      S_n = prod rho_j^{-1} [[z d1, d0 - z d1],
                             [z (d0 - z d1)*, d1*]]
  with d0 = det(z - C_[0,n-1]), d1 = det(z - C_[1,n-1]) and * the
  degree-(n-1) dual taken pointwise on the circle,

  extended window form: same shape with extended-matrix determinants and the
  top-right entry written division-free through det P_{n-1}, so the value
  never depends on alpha_{-1}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cmv import MatrixKind, build_aux_p, build_restriction
from .cocycle import Transfer2x2, operator_norm, transfer
from .coefficients import VerblunskySequence, coefficient_at, rho_at
from .determinants import det_lu
from .polynomials import (
    dual_at_point,
    evaluate,
    norm_product,
    phi_monic,
    psi_second_kind,
)

UNIT_MODULUS_TOL = 1e-12
ABS_FLOOR = 1e-12


@dataclass(frozen=True)
class Residual:
    absolute: float
    scale: float

    @property
    def relative(self) -> float:
        return self.absolute / (1.0 + self.scale)

    def passes(self, rel_tol: float, abs_floor: float = ABS_FLOOR) -> bool:
        return self.relative <= rel_tol or self.absolute <= abs_floor


def _residual(lhs, rhs) -> Residual:
    lhs = np.asarray(lhs)
    rhs = np.asarray(rhs)
    diff = float(np.max(np.abs(lhs - rhs), initial=0.0))
    scale = float(max(np.max(np.abs(lhs), initial=0.0),
                      np.max(np.abs(rhs), initial=0.0)))
    return Residual(diff, scale)


def _require_circle(z: complex):
    if abs(abs(z) - 1.0) > UNIT_MODULUS_TOL:
        raise ValueError(f"identity is stated on the unit circle, |z| = {abs(z)}")


def schrodinger_formula_check(potential, energy: float, n: int):
    """Discrete Schrodinger warm-up: the n-step transfer matrix

        prod_{j=n..1} [[E - v_j, -1], [1, 0]]

    against the matrix of Dirichlet determinants det(E - H_[a,b]).  The
    doubly-empty windows [a, a-2] carry determinant 0, matching the
    second-order recursion's seed.
    """
    v = np.asarray(potential, dtype=float)
    if n < 1 or len(v) < n:
        raise ValueError("need at least n potential values")
    prod = np.eye(2)
    for j in range(1, n + 1):
        prod = np.array([[energy - v[j - 1], -1.0], [1.0, 0.0]]) @ prod

    def het(a, b):
        if b == a - 1:
            return 1.0
        if b == a - 2:
            return 0.0
        size = b - a + 1
        h = np.zeros((size, size))
        np.fill_diagonal(h, v[a - 1:a - 1 + size])
        idx = np.arange(size - 1)
        h[idx, idx + 1] = 1.0
        h[idx + 1, idx] = 1.0
        return float(np.linalg.det(energy * np.eye(size) - h))

    det_form = np.array([
        [het(1, n), -het(2, n)],
        [het(1, n - 1), -het(2, n - 1)],
    ])
    return {
        "product_form": prod,
        "determinant_form": det_form,
        "residual": _residual(prod, det_form),
    }


def theorem_halfline_eval(seq: VerblunskySequence, n: int, z: complex) -> Transfer2x2:
    """The n-step transfer matrix assembled from half-line determinants."""
    if n < 1:
        raise ValueError("n must be >= 1")
    z = complex(z)
    _require_circle(z)
    d0 = det_lu(build_restriction(seq, MatrixKind.HALF_LINE, 0, n - 1), z)
    d1 = det_lu(build_restriction(seq, MatrixKind.HALF_LINE, 1, n - 1), z)
    return _assemble(seq, n, z, d0_minus_zd1=d0 - z * d1, d1=d1)


def theorem_extended_eval(seq: VerblunskySequence, n: int, z: complex) -> Transfer2x2:
    """Extended-case evaluation; the top-right entry uses the division-free
    form -conj(alpha_0) det(z-E_[1,n-1]) + rho_0 det P_{n-1}, so alpha_{-1}
    never enters (it must merely be defined, and may be 0)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    z = complex(z)
    _require_circle(z)
    coefficient_at(seq, -1)  # extended case: alpha_{-1} must exist
    d1 = det_lu(build_restriction(seq, MatrixKind.EXTENDED, 1, n - 1), z)
    if n == 1:
        det_p = 0.0 + 0.0j
    else:
        det_p = det_lu(build_aux_p(seq, n), z)
    e12 = -np.conj(coefficient_at(seq, 0)) * d1 + rho_at(seq, 0) * det_p
    return _assemble(seq, n, z, d0_minus_zd1=e12, d1=d1)


def _assemble(seq, n, z, d0_minus_zd1, d1) -> Transfer2x2:
    pref = 1.0 / norm_product(seq, n)
    e11 = z * d1
    e12 = d0_minus_zd1
    e21 = z * dual_at_point(e12, z, n - 1)
    e22 = dual_at_point(d1, z, n - 1)
    return Transfer2x2(pref * np.array([[e11, e12], [e21, e22]]))


def master_residual(seq: VerblunskySequence, n: int, z: complex,
                    extended: bool = False) -> Residual:
    """Entrywise gap between the determinant form and the cocycle product,
    normalized by the product's operator norm."""
    det_form = (theorem_extended_eval if extended else theorem_halfline_eval)(seq, n, z)
    prod_form = transfer(seq, n, z)
    diff = float(np.max(np.abs(det_form.to_array() - prod_form.to_array())))
    return Residual(diff, operator_norm(prod_form))


def equivalency_check(seq: VerblunskySequence, n: int, z: complex):
    """The cleared form of the window-equivalence relation:

        (det(z-C_[0,n-1]) - z det(z-E_[1,n-1])) * alpha_{-1}
            = z det(z-E_[1,n-1]) - det(z-E_[0,n-1])

    checked always; the literally divided form only when alpha_{-1} != 0.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    z = complex(z)
    alpha_m1 = coefficient_at(seq, -1)
    d0c = det_lu(build_restriction(seq, MatrixKind.HALF_LINE, 0, n - 1), z)
    d1e = det_lu(build_restriction(seq, MatrixKind.EXTENDED, 1, n - 1), z)
    d0e = det_lu(build_restriction(seq, MatrixKind.EXTENDED, 0, n - 1), z)
    lhs = (d0c - z * d1e) * alpha_m1
    rhs = z * d1e - d0e
    out = {"cleared": _residual(lhs, rhs)}
    if abs(alpha_m1) > 1e-13:
        out["divided"] = _residual(d0c - z * d1e, rhs / alpha_m1)
    return out


def lemma_lskp_check(seq: VerblunskySequence, n: int, z: complex) -> Residual:
    """Second-kind polynomial against the sign-flipped matrix determinant:
    Psi_n(z) = det(z - C'_[0,n-1])."""
    if n < 1:
        raise ValueError("n must be >= 1")
    z = complex(z)
    lhs = evaluate(psi_second_kind(seq, n), z)
    rhs = det_lu(build_restriction(seq, MatrixKind.HALF_LINE_PRIMED, 0, n - 1), z)
    return _residual(lhs, rhs)


def lemma_lfsp_check(seq: VerblunskySequence, n: int, z: complex):
    """det(z-E_[1,n-1]) = det(z-E'_[1,n-1]) and det P_{n-1} = -det P'_{n-1}.

    n = 1 is excluded: both P matrices are empty there and the sign relation
    has no content under the empty-determinant convention.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    z = complex(z)
    d1 = det_lu(build_restriction(seq, MatrixKind.EXTENDED, 1, n - 1), z)
    d1p = det_lu(build_restriction(seq, MatrixKind.EXTENDED_PRIMED, 1, n - 1), z)
    p = det_lu(build_aux_p(seq, n, primed=False), z)
    pp = det_lu(build_aux_p(seq, n, primed=True), z)
    return {
        "window": _residual(d1, d1p),
        "aux_sign": _residual(p, -pp),
    }


def efsd_check(seq: VerblunskySequence, n: int, z: complex) -> Residual:
    """Phi_n(z) + Psi_n(z) = 2 z det(z - E_[1,n-1])."""
    if n < 1:
        raise ValueError("n must be >= 1")
    z = complex(z)
    lhs = evaluate(phi_monic(seq, n), z) + evaluate(psi_second_kind(seq, n), z)
    rhs = 2.0 * z * det_lu(build_restriction(seq, MatrixKind.EXTENDED, 1, n - 1), z)
    return _residual(lhs, rhs)


# ---------------------------------------------------------------------------
# randomized verification suite
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckSummary:
    check: str
    cases: int
    max_residual: float     # relative
    tolerance: float
    passed: bool

    def as_dict(self):
        return {
            "check": self.check,
            "cases": self.cases,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def _case_sequence(rng, length: int, radius: float = 0.95):
    """Explicit two-sided sequence with uniform-on-disc draws."""
    from .coefficients import ExplicitSequence

    def draw(k):
        u, v = rng.random(2)
        return radius * np.sqrt(u) * np.exp(2j * np.pi * v)

    values = [draw(k) for k in range(length)]
    negative = [draw(-1)]
    return ExplicitSequence(values, negative=negative)


def _circle_point(rng) -> complex:
    return complex(np.exp(2j * np.pi * rng.random()))


def _disc_point(rng, radius: float = 2.0) -> complex:
    return complex(radius * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random()))


def _suite_checks(n_max: int):
    from .determinants import det_lu as _dlu
    from .determinants import det_recurrence

    def theorem_halfline(rng):
        n = int(rng.integers(1, n_max + 1))
        return master_residual(_case_sequence(rng, n + 2), n, _circle_point(rng))

    def theorem_extended(rng):
        n = int(rng.integers(1, n_max + 1))
        return master_residual(_case_sequence(rng, n + 2), n, _circle_point(rng),
                               extended=True)

    def equivalency(rng):
        n = int(rng.integers(1, n_max + 1))
        return equivalency_check(_case_sequence(rng, n + 2), n,
                                 _disc_point(rng))["cleared"]

    def second_kind(rng):
        n = int(rng.integers(1, n_max + 1))
        return lemma_lskp_check(_case_sequence(rng, n + 2), n, _disc_point(rng))

    def window_flip(rng):
        n = int(rng.integers(2, n_max + 1))
        out = lemma_lfsp_check(_case_sequence(rng, n + 2), n, _disc_point(rng))
        return max(out["window"], out["aux_sign"], key=lambda r: r.relative)

    def efsd(rng):
        n = int(rng.integers(1, n_max + 1))
        return efsd_check(_case_sequence(rng, n + 2), n, _disc_point(rng))

    def schrodinger(rng):
        n = int(rng.integers(1, 21))
        v = rng.normal(size=n) * 2.0
        energy = float(rng.normal()) * 2.0
        return schrodinger_formula_check(v, energy, n)["residual"]

    def det_engines(rng):
        n = int(rng.integers(1, n_max + 1))
        seq = _case_sequence(rng, n + 2)
        kind = MatrixKind.HALF_LINE if rng.random() < 0.5 else MatrixKind.EXTENDED
        a = 0 if rng.random() < 0.5 else 1
        z = _disc_point(rng)
        m = build_restriction(seq, kind, a, n - 1)
        return _residual(_dlu(m, z), det_recurrence(seq, kind, (a, n - 1), z))

    return [
        ("theorem_halfline", theorem_halfline, 1e-9),
        ("theorem_extended", theorem_extended, 1e-9),
        ("equivalency_cleared", equivalency, 1e-10),
        ("lemma_second_kind", second_kind, 1e-10),
        ("lemma_window_flip", window_flip, 1e-10),
        ("efsd", efsd, 1e-10),
        ("schrodinger", schrodinger, 1e-9),
        ("det_engines", det_engines, 1e-10),
    ]


def run_identity_suite(seed: int = 7, cases: int = 200, threads: int = 1,
                       n_max: int = 24):
    """Run every identity check on ``cases`` random instances each.

    Cases are sharded across threads by index with per-case generators, so
    the summary is identical for any thread count.
    """
    from concurrent.futures import ThreadPoolExecutor

    checks = _suite_checks(n_max)
    summaries = []
    for ci, (name, fn, tol) in enumerate(checks):
        residuals = [None] * cases

        def one(i, fn=fn, ci=ci):
            rng = np.random.default_rng((seed, ci, i))
            residuals[i] = fn(rng)

        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                list(pool.map(one, range(cases)))
        else:
            for i in range(cases):
                one(i)
        worst = max(residuals, key=lambda r: r.relative)
        passed = all(r.passes(tol) for r in residuals)
        summaries.append(CheckSummary(
            check=name, cases=cases, max_residual=worst.relative,
            tolerance=tol, passed=passed))
    return summaries
