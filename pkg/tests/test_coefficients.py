import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmvlab.coefficients import (
    ConstantSequence,
    ExplicitSequence,
    QuasiPeriodicFamily,
    QuasiPeriodicSequence,
    RandomSequence,
    TrigPhase,
    coefficient_at,
    rho_at,
    rotate_sequence,
)

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0

# independent high-precision evaluation of 0.9*exp(2j*pi*(sqrt(5)-1)),
# frozen from a 40-digit computation
ALPHA2_GOLDEN = complex(0.078683152245264359678, 0.89655393677834494809)


def test_constant_zero():
    seq = ConstantSequence(0.0)
    assert coefficient_at(seq, 5) == 0.0
    assert rho_at(seq, 5) == 1.0


def test_quasiperiodic_direct_substitution():
    # lam=0.5, h(x)=x, omega=0, x=0.25: alpha_3 = 0.5 * e^{i pi/2} = 0.5i
    seq = QuasiPeriodicSequence(0.5, 0.0, 0.25)
    val = coefficient_at(seq, 3)
    assert val == pytest.approx(0.5j, abs=1e-15)


def test_quasiperiodic_golden_oracle():
    seq = QuasiPeriodicSequence(0.9, GOLDEN, 0.0)
    val = coefficient_at(seq, 2)
    assert abs(val - ALPHA2_GOLDEN) < 1e-13


def test_rho_values():
    assert rho_at(ExplicitSequence([0.0]), 0) == 1.0
    assert rho_at(ExplicitSequence([0.6]), 0) == pytest.approx(0.8, abs=1e-15)
    assert rho_at(ExplicitSequence([0.5j]), 0) == pytest.approx(
        np.sqrt(0.75), abs=1e-15)


def test_rotation_identity_and_sign_flip():
    seq = ExplicitSequence([0.5, 0.3j])
    assert rotate_sequence(seq, 1.0) is seq
    neg = rotate_sequence(seq, -1.0)
    assert coefficient_at(neg, 0) == -0.5
    assert coefficient_at(neg, 1) == -0.3j
    rot = rotate_sequence(ConstantSequence(0.5), 1j)
    assert coefficient_at(rot, 7) == 0.5j


@given(st.floats(0.0, 2 * np.pi, allow_nan=False))
@settings(max_examples=40, deadline=None)
def test_rotation_roundtrip_exact(theta):
    lam = complex(np.cos(theta), np.sin(theta))
    seq = ExplicitSequence([0.4 + 0.2j, -0.1j, 0.77])
    back = rotate_sequence(rotate_sequence(seq, lam), np.conj(lam))
    assert back is seq


def test_rotation_requires_unit_modulus():
    with pytest.raises(ValueError):
        rotate_sequence(ConstantSequence(0.1), 0.5)


@given(st.floats(0.0, 0.99), st.floats(0.0, 1.0), st.floats(0.0, 1.0),
       st.integers(-50, 50))
@settings(max_examples=60, deadline=None)
def test_disc_and_pythagoras(lam, omega, x, n):
    seq = QuasiPeriodicSequence(lam, omega, x)
    a = coefficient_at(seq, n)
    r = rho_at(seq, n)
    assert abs(a) < 1.0
    assert abs(r * r + abs(a) ** 2 - 1.0) < 1e-14


@given(st.integers(0, 2**31), st.floats(0.0, 0.95), st.integers(-20, 20))
@settings(max_examples=50, deadline=None)
def test_random_generator_reproducible(seed, radius, n):
    a = coefficient_at(RandomSequence(seed, radius), n)
    b = coefficient_at(RandomSequence(seed, radius), n)
    assert a == b
    assert abs(a) <= radius


def test_omega_zero_is_n_independent():
    seq = QuasiPeriodicSequence(0.7, 0.0, 0.3)
    vals = {coefficient_at(seq, n) for n in range(-5, 6)}
    assert len(vals) == 1


def test_one_sided_index_error():
    seq = ExplicitSequence([0.1, 0.2])
    with pytest.raises(IndexError):
        coefficient_at(seq, -1)
    with pytest.raises(IndexError):
        coefficient_at(seq, 2)


def test_two_sided_negative_values():
    seq = ExplicitSequence([0.1], negative=[0.5j, -0.2])
    assert seq.two_sided
    assert coefficient_at(seq, -1) == 0.5j
    assert coefficient_at(seq, -2) == -0.2


def test_construction_rejects_bad_parameters():
    with pytest.raises(ValueError):
        QuasiPeriodicFamily(1.0, 0.5)
    with pytest.raises(ValueError):
        RandomSequence(1, 1.0)
    with pytest.raises(ValueError):
        ExplicitSequence([1.0])
    with pytest.raises(ValueError):
        ConstantSequence(1.0 + 0j)


def test_batch_matches_scalar_access():
    seq = QuasiPeriodicSequence(0.8, GOLDEN, 0.13,
                                TrigPhase(1, cos_coeffs=(0.1,), sin_coeffs=(0.05,)))
    batch = seq.alphas(-3, 7)
    singles = np.array([seq.alpha(n) for n in range(-3, 7)])
    assert np.array_equal(batch, singles)


def test_family_grid_matches_member():
    fam = QuasiPeriodicFamily(0.6, 0.37)
    xs = np.array([0.0, 0.25, 0.9])
    grid = fam.alpha_grid(xs, 5, start=2)
    for k, x in enumerate(xs):
        assert np.array_equal(grid[k], fam.at(x).alphas(2, 7))


def test_trig_phase_needs_integer_winding():
    with pytest.raises(ValueError):
        TrigPhase(1.5)
