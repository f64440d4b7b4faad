import numpy as np
import pytest

from cmvlab.cmv import (
    MatrixKind,
    build_aux_p,
    build_restriction,
    shift_covariance_check,
    shift_covariance_residual,
)
from cmvlab.coefficients import (
    ConstantSequence,
    ExplicitSequence,
    QuasiPeriodicSequence,
    RandomSequence,
)


def _rand_seq(seed=11, radius=0.9):
    return RandomSequence(seed, radius)


def _avals(seq, lo, hi):
    a = {k: seq.alpha(k) for k in range(lo, hi)}
    r = {k: np.sqrt(1 - abs(v) ** 2) for k, v in a.items()}
    return a, r


def test_halfline_top_block_display():
    seq = _rand_seq()
    a, r = _avals(seq, 0, 3)
    m = build_restriction(seq, MatrixKind.HALF_LINE, 0, 1).to_dense()
    expect = np.array([
        [np.conj(a[0]), np.conj(a[1]) * r[0]],
        [r[0], -np.conj(a[1]) * a[0]],
    ])
    assert np.max(np.abs(m - expect)) == 0.0


def test_halfline_zero_coefficients():
    m = build_restriction(ConstantSequence(0.0), MatrixKind.HALF_LINE, 0, 2)
    expect = np.array([[0, 0, 1], [1, 0, 0], [0, 0, 0]], dtype=complex)
    assert np.array_equal(m.to_dense(), expect)


def test_primed_top_block_display():
    seq = _rand_seq()
    a, r = _avals(seq, 0, 3)
    m = build_restriction(seq, MatrixKind.HALF_LINE_PRIMED, 0, 1).to_dense()
    expect = np.array([
        [-np.conj(a[0]), -np.conj(a[1]) * r[0]],
        [r[0], -np.conj(a[1]) * a[0]],
    ])
    assert np.max(np.abs(m - expect)) == 0.0


def test_primed_equals_negated_sequence():
    seq = _rand_seq(3)
    for kind, primed in ((MatrixKind.HALF_LINE, MatrixKind.HALF_LINE_PRIMED),
                         (MatrixKind.EXTENDED, MatrixKind.EXTENDED_PRIMED)):
        lhs = build_restriction(seq.negated(), kind, 1, 8).to_dense()
        rhs = build_restriction(seq, primed, 1, 8).to_dense()
        assert np.array_equal(lhs, rhs)


def test_extended_row_zero_uses_alpha_minus_one():
    seq = ExplicitSequence([0.3, -0.2j, 0.5], negative=[0.4 - 0.1j])
    a_m1 = seq.alpha(-1)
    a, r = _avals(seq, 0, 3)
    m = build_restriction(seq, MatrixKind.EXTENDED, 0, 1).to_dense()
    expect = np.array([
        [-np.conj(a[0]) * a_m1, np.conj(a[1]) * r[0]],
        [-r[0] * a_m1, -np.conj(a[1]) * a[0]],
    ])
    assert np.max(np.abs(m - expect)) == 0.0


def test_extended_equals_halfline_for_positive_windows():
    seq = _rand_seq(17)
    e = build_restriction(seq, MatrixKind.EXTENDED, 1, 12).to_dense()
    c = build_restriction(seq, MatrixKind.HALF_LINE, 1, 12).to_dense()
    assert np.array_equal(e, c)


def test_pentadiagonal_exact_zeros():
    seq = _rand_seq(23)
    m = build_restriction(seq, MatrixKind.HALF_LINE, 0, 20).to_dense()
    for i in range(21):
        for j in range(21):
            if abs(i - j) > 2:
                assert m[i, j] == 0.0


def test_unitarity_of_interior_columns():
    seq = _rand_seq(29, 0.95)
    n = 40
    m = build_restriction(seq, MatrixKind.HALF_LINE, 0, n - 1).to_dense()
    norms = np.linalg.norm(m, axis=0)
    assert np.max(np.abs(norms[:-2] - 1.0)) < 1e-12


def test_banded_storage_equals_dense_storage():
    seq = _rand_seq(31)
    small = build_restriction(seq, MatrixKind.HALF_LINE, 0, 63)
    large = build_restriction(seq, MatrixKind.HALF_LINE, 0, 79)
    assert not small.banded_storage
    assert large.banded_storage
    assert np.array_equal(large.to_dense()[:64, :64], small.to_dense())
    for i, j in ((0, 0), (5, 3), (17, 19), (70, 68), (79, 79)):
        assert large.entry(i, j) == large.to_dense()[i, j]


def test_char_band_matches_char_matrix():
    seq = _rand_seq(37)
    z = 0.3 - 1.1j
    for kind in (MatrixKind.HALF_LINE, MatrixKind.EXTENDED_PRIMED):
        m = build_restriction(seq, kind, 1, 70)
        band = m.char_band(z)
        dense = m.char_matrix(z)
        for i in range(m.size):
            for j in range(max(0, i - 2), min(m.size - 1, i + 2) + 1):
                assert band[2 + i - j, j] == dense[i, j]


def test_aux_p_small_cases():
    seq = _rand_seq(41)
    a, r = _avals(seq, 0, 4)
    empty = build_aux_p(seq, 1)
    assert empty.size == 0
    one = build_aux_p(seq, 2)
    assert one.size == 1
    assert one.to_dense()[0, 0] == -np.conj(a[1]) * r[0]
    assert one.zmask[0] == 0.0
    z = 0.7 + 0.2j
    two = build_aux_p(seq, 3)
    expect = np.array([
        [-np.conj(a[1]) * r[0], -r[1] * r[0]],
        [-np.conj(a[2]) * r[1], z + np.conj(a[2]) * a[1]],
    ])
    assert np.max(np.abs(two.char_matrix(z) - expect)) < 1e-15


def test_aux_p_primed_display():
    seq = _rand_seq(43)
    a, r = _avals(seq, 0, 4)
    z = -0.2 + 0.9j
    m = build_aux_p(seq, 3, primed=True)
    expect = np.array([
        [np.conj(a[1]) * r[0], -r[1] * r[0]],
        [np.conj(a[2]) * r[1], z + np.conj(a[2]) * a[1]],
    ])
    assert np.max(np.abs(m.char_matrix(z) - expect)) < 1e-15


def test_window_validation():
    seq = _rand_seq(47)
    with pytest.raises(ValueError):
        build_restriction(seq, MatrixKind.HALF_LINE, -1, 3)
    with pytest.raises(ValueError):
        build_restriction(seq, MatrixKind.HALF_LINE, 3, 1)
    with pytest.raises(ValueError):
        build_aux_p(seq, 0)
    empty = build_restriction(seq, MatrixKind.HALF_LINE, 2, 1)
    assert empty.is_empty


def test_insufficient_range_raises():
    seq = ExplicitSequence([0.1, 0.2, 0.3])
    with pytest.raises(IndexError):
        build_restriction(seq, MatrixKind.EXTENDED, 0, 2)  # needs alpha_{-1}


def test_shift_covariance_constant():
    seq = QuasiPeriodicSequence(0.5, 0.0, 0.2)
    assert shift_covariance_check(seq, 0, 6)


def test_shift_covariance_quasiperiodic():
    seq = QuasiPeriodicSequence(0.5, 0.3, 0.1)
    assert shift_covariance_residual(seq, 0, 4) < 1e-12
    assert shift_covariance_residual(seq, 1, 3) < 1e-12
    assert shift_covariance_check(seq, 0, 4)
