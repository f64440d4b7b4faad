import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmvlab.cmv import MatrixKind, build_restriction
from cmvlab.cocycle import transfer
from cmvlab.coefficients import ConstantSequence, ExplicitSequence, RandomSequence
from cmvlab.determinants import det_lu
from cmvlab.polynomials import (
    InternalConsistencyError,
    Polynomial,
    ab_decomposition,
    dual_at_point,
    evaluate,
    norm_product,
    phi_monic,
    psi_second_kind,
    szego_dual,
    transfer_from_ab,
)


def test_dual_simple_cases():
    assert np.array_equal(szego_dual(Polynomial([1.0]), 0).coeffs, [1.0])
    a0 = 0.3 + 0.4j
    p = Polynomial([-np.conj(a0), 1.0])           # z - conj(a0)
    d = szego_dual(p, 1)
    assert np.array_equal(d.coeffs, np.array([1.0, -a0]))  # 1 - a0 z
    p2 = Polynomial([3j, -2.0, 1.0])              # z^2 - 2z + 3i
    d2 = szego_dual(p2, 2)
    assert np.array_equal(d2.coeffs, np.array([1.0, -2.0, -3j]))


def test_dual_degree_validation():
    with pytest.raises(ValueError):
        szego_dual(Polynomial([1.0, 2.0]), 0)


@given(st.lists(st.tuples(st.floats(-3, 3), st.floats(-3, 3)),
                min_size=1, max_size=8),
       st.integers(0, 4))
@settings(max_examples=60, deadline=None)
def test_dual_involution(pairs, pad):
    coeffs = [complex(re, im) for re, im in pairs]
    p = Polynomial(coeffs)
    n = p.nominal_degree + pad
    assert np.array_equal(szego_dual(szego_dual(p, n), n).coeffs, p.padded(n))


def test_dual_at_point_values():
    assert dual_at_point(1.0, 1.0, 5) == 1.0
    assert dual_at_point(1j, 1j, 2) == pytest.approx(1j, abs=1e-15)
    with pytest.raises(ValueError):
        dual_at_point(1.0, 0.5, 2)


def test_dual_at_point_matches_coefficient_dual():
    seq = RandomSequence(5, 0.9)
    p = phi_monic(seq, 3)
    z = np.exp(0.7j)
    lhs = dual_at_point(evaluate(p, z), z, 3)
    rhs = evaluate(szego_dual(p, 3), z)
    assert abs(lhs - rhs) < 1e-12


def test_phi_base_cases():
    seq = ExplicitSequence([0.5 - 0.1j, 0.2j])
    assert np.array_equal(phi_monic(seq, 0).coeffs, [1.0])
    p1 = phi_monic(seq, 1)
    assert np.array_equal(p1.coeffs, np.array([-np.conj(seq.alpha(0)), 1.0]))


def test_phi_degree_two_hand_expansion():
    a0, a1 = 0.5 - 0.1j, 0.3 + 0.2j
    seq = ExplicitSequence([a0, a1])
    p2 = phi_monic(seq, 2)
    expect = np.array([-np.conj(a1),
                       -(np.conj(a0) - a0 * np.conj(a1)),
                       1.0])
    assert np.max(np.abs(p2.coeffs - expect)) < 1e-15
    # cross-check against the characteristic determinant
    z = 1.3 * np.exp(0.4j)
    m = build_restriction(seq, MatrixKind.HALF_LINE, 0, 1)
    assert abs(evaluate(p2, z) - det_lu(m, z)) < 1e-13


def test_psi_base_cases():
    a0 = 0.4 + 0.3j
    seq = ExplicitSequence([a0, 0.1])
    assert np.array_equal(psi_second_kind(seq, 0).coeffs, [1.0])
    p1 = psi_second_kind(seq, 1)
    assert np.array_equal(p1.coeffs, np.array([np.conj(a0), 1.0]))


def test_psi_matches_primed_charpoly():
    seq = RandomSequence(9, 0.9)
    z = 0.8 * np.exp(1.9j)
    lhs = evaluate(psi_second_kind(seq, 3), z)
    rhs = det_lu(build_restriction(seq, MatrixKind.HALF_LINE_PRIMED, 0, 2), z)
    assert abs(lhs - rhs) < 1e-13


def test_ab_small_cases():
    a0 = 0.25 - 0.6j
    seq = ExplicitSequence([a0, 0.0])
    a, b = ab_decomposition(seq, 1)
    assert np.array_equal(a.coeffs, np.array([-a0]))
    assert np.array_equal(b.coeffs, np.array([1.0 + 0j]))
    zero = ConstantSequence(0.0)
    a, b = ab_decomposition(zero, 6)
    assert np.max(np.abs(a.coeffs)) == 0.0
    assert b.coeffs[0] == 1.0 and np.max(np.abs(b.coeffs[1:])) == 0.0


def test_ab_reconstructs_phi():
    seq = RandomSequence(13, 0.9)
    for n in (1, 2, 5):
        a, b = ab_decomposition(seq, n)
        z = np.exp(0.3j * n)
        lhs = evaluate(phi_monic(seq, n), z)
        rhs = z * evaluate(szego_dual(b, n - 1), z) + evaluate(szego_dual(a, n - 1), z)
        assert abs(lhs - rhs) < 1e-12


def test_ab_transfer_matches_cocycle_product():
    seq = RandomSequence(15, 0.9)
    for n in (1, 3, 8):
        z = np.exp(1.1j)
        lhs = transfer_from_ab(seq, n, z)
        rhs = transfer(seq, n, z).to_array()
        assert np.max(np.abs(lhs - rhs)) < 1e-11 * (1 + np.max(np.abs(rhs)))


def test_normalized_recurrences_on_circle():
    seq = RandomSequence(21, 0.9)
    rng = np.random.default_rng(0)
    for n in (0, 1, 4, 9):
        rho_n = np.sqrt(1 - abs(seq.alpha(n)) ** 2)
        alpha_n = seq.alpha(n)
        phi_n = phi_monic(seq, n)
        phi_n1 = phi_monic(seq, n + 1)
        nrm_n = norm_product(seq, n)
        nrm_n1 = norm_product(seq, n + 1)
        for z in np.exp(2j * np.pi * rng.random(32)):
            f_n = evaluate(phi_n, z) / nrm_n
            f_n1 = evaluate(phi_n1, z) / nrm_n1
            fs_n = dual_at_point(f_n, z, n)
            fs_n1 = dual_at_point(f_n1, z, n + 1)
            r1 = rho_n * f_n1 - (z * f_n - np.conj(alpha_n) * fs_n)
            r2 = rho_n * fs_n1 - (fs_n - alpha_n * z * f_n)
            assert abs(r1) < 1e-11 * (1 + abs(f_n1))
            assert abs(r2) < 1e-11 * (1 + abs(fs_n1))


def test_evaluate_trivial():
    assert evaluate(Polynomial([1.0]), 123.0 + 4j) == 1.0
    a0 = 0.7j
    p = Polynomial([-np.conj(a0), 1.0])
    assert evaluate(p, np.conj(a0)) == 0.0


def test_evaluate_matches_det_engine():
    seq = RandomSequence(33, 0.9)
    p5 = phi_monic(seq, 5)
    m = build_restriction(seq, MatrixKind.HALF_LINE, 0, 4)
    rng = np.random.default_rng(1)
    for z in np.exp(2j * np.pi * rng.random(7)):
        assert abs(evaluate(p5, z) - det_lu(m, z)) < 1e-11


def test_ab_cancellation_guard():
    # feeding a mismatched pair through the guard must raise, not silently drop
    seq = RandomSequence(3, 0.9)
    with pytest.raises(ValueError):
        ab_decomposition(seq, 0)


def test_polynomial_json_roundtrip():
    p = Polynomial([1.0 + 2j, -0.5, 0.0])
    q = Polynomial.from_json(p.to_json())
    assert np.array_equal(p.coeffs, q.coeffs)
