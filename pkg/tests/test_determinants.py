import numpy as np
import pytest

from cmvlab.cmv import CmvRestriction, MatrixKind, build_aux_p, build_restriction
from cmvlab.coefficients import ConstantSequence, ExplicitSequence, RandomSequence
from cmvlab.determinants import (
    charpoly_coeffs,
    det_lu,
    det_recurrence,
    is_numerically_zero,
)
from cmvlab.polynomials import evaluate, phi_monic


def _rand_seq(seed, radius=0.95):
    return RandomSequence(seed, radius)


def test_empty_window_convention():
    seq = _rand_seq(1)
    m = build_restriction(seq, MatrixKind.HALF_LINE, 1, 0)
    assert det_lu(m, 3.7 + 0.1j) == 1.0
    assert det_recurrence(seq, MatrixKind.HALF_LINE, (1, 0), 2.0) == 1.0
    assert det_lu(build_aux_p(seq, 1), 0.5) == 1.0


def test_one_by_one():
    seq = _rand_seq(2)
    z = 0.4 - 0.8j
    m = build_restriction(seq, MatrixKind.HALF_LINE, 0, 0)
    assert abs(det_lu(m, z) - (z - np.conj(seq.alpha(0)))) < 1e-15


def test_extended_one_by_one_recurrence():
    seq = _rand_seq(3)
    z = np.exp(0.2j)
    val = det_recurrence(seq, MatrixKind.EXTENDED, (1, 1), z)
    expect = z + np.conj(seq.alpha(1)) * seq.alpha(0)
    assert abs(val - expect) < 1e-15


def test_lu_matches_phi_on_circle():
    seq = _rand_seq(4)
    m = build_restriction(seq, MatrixKind.HALF_LINE, 0, 4)
    p5 = phi_monic(seq, 5)
    for theta in np.linspace(0.1, 6.0, 5):
        z = np.exp(1j * theta)
        assert abs(det_lu(m, z) - evaluate(p5, z)) < 1e-11


def test_engine_agreement_randomized():
    rng = np.random.default_rng(0)
    for case in range(100):
        n = int(rng.integers(1, 33))
        seq = ExplicitSequence(
            [0.95 * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
             for _ in range(n + 2)],
            negative=[0.5 * np.exp(2j * np.pi * rng.random())])
        z = 2.0 * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
        for kind in (MatrixKind.HALF_LINE, MatrixKind.EXTENDED):
            for a in (0, 1):
                m = build_restriction(seq, kind, a, n - 1)
                dl = det_lu(m, z)
                dr = det_recurrence(seq, kind, (a, n - 1), z)
                assert abs(dl - dr) <= 1e-10 * (1.0 + abs(dl))


def test_banded_path_matches_dense_path():
    seq = _rand_seq(5)
    m_band = build_restriction(seq, MatrixKind.HALF_LINE, 0, 99)
    assert m_band.banded_storage
    z = np.exp(0.9j)
    dense = m_band.char_matrix(z)
    sign, logdet = np.linalg.slogdet(dense)
    ref = sign * np.exp(logdet)
    val = det_lu(m_band, z)
    assert abs(val - ref) <= 1e-9 * (1.0 + abs(ref))


def test_block_diagonal_multiplicativity():
    # plumbing sanity on a synthetic pentadiagonal block matrix
    rng = np.random.default_rng(7)
    blocks = [rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)),
              rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))]
    for b in blocks:
        for i in range(b.shape[0]):
            for j in range(b.shape[0]):
                if abs(i - j) > 2:
                    b[i, j] = 0.0
    full = np.zeros((5, 5), dtype=complex)
    full[:3, :3] = blocks[0]
    full[3:, 3:] = blocks[1]
    m = CmvRestriction(MatrixKind.HALF_LINE, 0, 4, None, _dense=full)
    z = 0.3 + 0.1j
    lhs = det_lu(m, z)
    rhs = np.prod([np.linalg.det(z * np.eye(b.shape[0]) - b) for b in blocks])
    assert abs(lhs - rhs) < 1e-12 * (1 + abs(rhs))


def test_charpoly_zero_sequence_is_power():
    m = build_restriction(ConstantSequence(0.0), MatrixKind.HALF_LINE, 0, 2)
    p = charpoly_coeffs(m)
    assert np.max(np.abs(p.coeffs - np.array([0, 0, 0, 1.0]))) < 1e-13


def test_charpoly_one_by_one():
    seq = _rand_seq(6)
    m = build_restriction(seq, MatrixKind.HALF_LINE, 0, 0)
    p = charpoly_coeffs(m)
    assert np.max(np.abs(p.coeffs - np.array([-np.conj(seq.alpha(0)), 1.0]))) < 1e-14


def test_charpoly_matches_phi_coefficients():
    seq = _rand_seq(8)
    m = build_restriction(seq, MatrixKind.HALF_LINE, 0, 3)
    p = charpoly_coeffs(m)
    q = phi_monic(seq, 4)
    assert np.max(np.abs(p.coeffs - q.coeffs)) < 1e-10


def test_charpoly_evaluation_agreement_to_64():
    seq = _rand_seq(9)
    rng = np.random.default_rng(2)
    for n in (16, 64):
        m = build_restriction(seq, MatrixKind.HALF_LINE, 0, n - 1)
        p = charpoly_coeffs(m)
        for _ in range(5):
            z = 1.2 * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
            dl = det_lu(m, z)
            assert abs(evaluate(p, z) - dl) <= 1e-9 * (1.0 + abs(dl))


def test_recurrence_rejects_bad_windows():
    seq = _rand_seq(10)
    with pytest.raises(ValueError):
        det_recurrence(seq, MatrixKind.HALF_LINE, (2, 5), 1.0)
    with pytest.raises(ValueError):
        det_recurrence(seq, MatrixKind.HALF_LINE_PRIMED, (0, 3), 1.0)


def test_numerically_zero_flag():
    assert is_numerically_zero(1e-15, 10)
    assert not is_numerically_zero(1e-3, 10)
