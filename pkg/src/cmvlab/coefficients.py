"""Verblunsky coefficient sequences.

A Verblunsky sequence is a map n -> alpha_n into the open unit disc.  The
generators here cover the cases the rest of the library needs: explicit
finite lists, constants, quasi-periodic analytic families
alpha_n(x) = lambda * exp(2*pi*i*h(x + n*omega)), and seeded pseudo-random
draws.  Sequences are immutable; all accessors are pure.

The derived quantity rho_n = sqrt(1 - |alpha_n|^2) always lies in (0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * np.pi

UNIT_MODULUS_TOL = 1e-12

# offset added to signed indices before seeding the per-index RNG
_INDEX_BIAS = 2**33


def rho_of(alpha: complex) -> float:
    """sqrt(1 - |alpha|^2) for a coefficient in the open unit disc."""
    a2 = alpha.real * alpha.real + alpha.imag * alpha.imag
    if a2 >= 1.0:
        raise ValueError(f"coefficient modulus {abs(alpha)} >= 1")
    return float(np.sqrt(1.0 - a2))


@dataclass(frozen=True)
class TrigPhase:
    """Phase function h: T -> T as integer winding plus a trig polynomial.

    h(y) = winding*y + sum_k cos_coeffs[k-1]*cos(2 pi k y)
                     + sum_k sin_coeffs[k-1]*sin(2 pi k y)

    The winding must be an integer so exp(2 pi i h) is well defined on the
    torus.  h(y) = y is TrigPhase(1).
    """

    winding: int = 1
    cos_coeffs: tuple = ()
    sin_coeffs: tuple = ()

    def __post_init__(self):
        if self.winding != int(self.winding):
            raise ValueError("winding must be an integer")

    def __call__(self, y):
        y = np.asarray(y, dtype=float) % 1.0
        out = self.winding * y
        for k, c in enumerate(self.cos_coeffs, start=1):
            out = out + c * np.cos(TWO_PI * k * y)
        for k, s in enumerate(self.sin_coeffs, start=1):
            out = out + s * np.sin(TWO_PI * k * y)
        return out


class VerblunskySequence:
    """Base class: a finite or generated sequence of disc coefficients."""

    two_sided = False

    def alpha(self, n: int) -> complex:
        raise NotImplementedError

    def rho(self, n: int) -> float:
        return rho_of(self.alpha(n))

    def alphas(self, start: int, stop: int) -> np.ndarray:
        """Coefficients alpha_start .. alpha_{stop-1} as a complex array."""
        return np.array([self.alpha(n) for n in range(start, stop)],
                        dtype=complex)

    def rhos(self, start: int, stop: int) -> np.ndarray:
        a = self.alphas(start, stop)
        return np.sqrt(1.0 - np.abs(a) ** 2)

    def _check_index(self, n: int):
        if not self.two_sided and n < 0:
            raise IndexError(f"index {n} < 0 on a one-sided sequence")

    def rotated(self, lam: complex) -> "VerblunskySequence":
        lam = complex(lam)
        if abs(abs(lam) - 1.0) > UNIT_MODULUS_TOL:
            raise ValueError(f"rotation factor must be unit modulus, got |{lam}|")
        if lam == 1.0:
            return self
        return _Rotated(self, lam)

    def negated(self) -> "VerblunskySequence":
        return self.rotated(-1.0)


class _Rotated(VerblunskySequence):
    """Lazy Aleksandrov rotation: every coefficient times a fixed unit factor."""

    def __init__(self, base: VerblunskySequence, factor: complex):
        self.base = base
        self.factor = factor
        self.two_sided = base.two_sided

    def alpha(self, n: int) -> complex:
        return self.base.alpha(n) * self.factor

    def alphas(self, start: int, stop: int) -> np.ndarray:
        return self.base.alphas(start, stop) * self.factor

    def rotated(self, lam: complex) -> VerblunskySequence:
        lam = complex(lam)
        if abs(abs(lam) - 1.0) > UNIT_MODULUS_TOL:
            raise ValueError(f"rotation factor must be unit modulus, got |{lam}|")
        # exact cancellation so rotate(rotate(s, w), conj(w)) is s itself
        if lam == self.factor.conjugate():
            return self.base
        composed = self.factor * lam
        if composed == 1.0:
            return self.base
        return _Rotated(self.base, composed)


class ExplicitSequence(VerblunskySequence):
    """Finite list of coefficients; optionally defined on negative indices.

    ``negative[k]`` holds alpha_{-1-k}, so ExplicitSequence(vals, negative=[a])
    defines alpha_{-1} = a and has ``two_sided`` set.
    """

    def __init__(self, values, negative=()):
        self.values = tuple(complex(v) for v in values)
        self.negative = tuple(complex(v) for v in negative)
        for v in self.values + self.negative:
            if abs(v) >= 1.0:
                raise ValueError(f"coefficient {v} not in the open unit disc")
        self.two_sided = len(self.negative) > 0

    def alpha(self, n: int) -> complex:
        if n >= 0:
            if n >= len(self.values):
                raise IndexError(f"index {n} beyond explicit range {len(self.values)}")
            return self.values[n]
        if -n - 1 >= len(self.negative):
            raise IndexError(f"index {n} beyond explicit negative range")
        return self.negative[-n - 1]


class ConstantSequence(VerblunskySequence):
    """alpha_n = value for every n in Z."""

    two_sided = True

    def __init__(self, value: complex):
        value = complex(value)
        if abs(value) >= 1.0:
            raise ValueError(f"constant coefficient {value} not in the open unit disc")
        self.value = value

    def alpha(self, n: int) -> complex:
        return self.value

    def alphas(self, start: int, stop: int) -> np.ndarray:
        return np.full(max(stop - start, 0), self.value, dtype=complex)


@dataclass(frozen=True)
class QuasiPeriodicFamily:
    """The x-parametrized family alpha_n(x) = lambda*exp(2 pi i h(x + n omega)).

    ``lam`` is the coupling in [0, 1); lam >= 1 is rejected, never clamped.
    """

    lam: float
    omega: float
    h: TrigPhase = field(default_factory=TrigPhase)

    def __post_init__(self):
        if not 0.0 <= self.lam < 1.0:
            raise ValueError(f"coupling lambda={self.lam} outside [0, 1)")

    def at(self, x: float) -> "QuasiPeriodicSequence":
        return QuasiPeriodicSequence(self.lam, self.omega, x, self.h)

    def alpha_grid(self, xs, n: int, start: int = 0) -> np.ndarray:
        """(len(xs), n) array of alpha_{start+j}(x_k) for j = 0..n-1."""
        xs = np.asarray(xs, dtype=float)
        j = np.arange(start, start + n, dtype=float)
        y = xs[:, None] + self.omega * j[None, :]
        return self.lam * np.exp(1j * TWO_PI * self.h(y))


class QuasiPeriodicSequence(VerblunskySequence):
    """One member of a quasi-periodic family, at a fixed phase x."""

    two_sided = True

    def __init__(self, lam: float, omega: float, x: float, h: TrigPhase = None):
        self.family = QuasiPeriodicFamily(lam, omega, h if h is not None else TrigPhase())
        self.x = float(x)

    @property
    def lam(self):
        return self.family.lam

    @property
    def omega(self):
        return self.family.omega

    @property
    def h(self):
        return self.family.h

    def shifted(self, delta: float) -> "QuasiPeriodicSequence":
        return QuasiPeriodicSequence(self.lam, self.omega, self.x + delta, self.h)

    def alpha(self, n: int) -> complex:
        return complex(self.alphas(n, n + 1)[0])

    def alphas(self, start: int, stop: int) -> np.ndarray:
        if stop <= start:
            return np.empty(0, dtype=complex)
        return self.family.alpha_grid([self.x], stop - start, start)[0]


class RandomSequence(VerblunskySequence):
    """Seed-reproducible draws, uniform on the disc of radius < 1.

    Each index gets its own counter-derived generator, so access is O(1),
    order-independent and identical across replays.
    """

    two_sided = True

    def __init__(self, seed: int, radius: float):
        if not 0.0 <= radius < 1.0:
            raise ValueError(f"radius {radius} outside [0, 1)")
        self.seed = int(seed)
        self.radius = float(radius)

    def alpha(self, n: int) -> complex:
        rng = np.random.default_rng((self.seed, _INDEX_BIAS + n))
        u, v = rng.random(2)
        return self.radius * np.sqrt(u) * np.exp(1j * TWO_PI * v)


def coefficient_at(seq: VerblunskySequence, n: int) -> complex:
    """alpha_n, validated to lie strictly inside the unit disc."""
    seq._check_index(n)
    a = complex(seq.alpha(n))
    if abs(a) >= 1.0:
        raise ValueError(f"produced coefficient {a} not in the open unit disc")
    return a


def rho_at(seq: VerblunskySequence, n: int) -> float:
    """rho_n = sqrt(1 - |alpha_n|^2), strictly positive."""
    return rho_of(coefficient_at(seq, n))


def rotate_sequence(seq: VerblunskySequence, lam: complex) -> VerblunskySequence:
    """Aleksandrov rotation: multiply every coefficient by unit-modulus lam.

    lam = -1 yields the sequence generating the second-kind polynomials.
    """
    return seq.rotated(lam)
