"""Lyapunov exponents and large-deviation statistics for quasi-periodic
Szego cocycles.

The finite-n exponent is the phase average

    L_n(z) = (1/G) sum_k (1/n) log || S^z_n(x_k) ||

over the uniform grid x_k = k/G on the torus (rectangle rule; spectrally
accurate for analytic data).  Norms are taken on the Szego product: the
normalized cocycle differs by a unimodular scalar, so the two norms agree.

Grid points are independent work items.  They are sharded contiguously
across threads and reduced by a single ordered pairwise sum, so results do
not depend on the thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .coefficients import QuasiPeriodicFamily

MIN_GRID = 64

UNIT_MODULUS_TOL = 1e-12

QUADRATURE_TOL = 1e-3


@dataclass(frozen=True)
class LyapunovEstimate:
    n: int
    z: complex
    grid_size: int
    value: float
    samples: np.ndarray = None  # per-x values of (1/n) log ||S^z_n(x)||


@dataclass(frozen=True)
class LyapunovLimit:
    z: complex
    schedule: tuple
    table: tuple          # (n, L_n) pairs in schedule order
    value: float          # min over the schedule
    last: float           # L_n at the largest n
    monotone: bool        # no increase beyond the quadrature tolerance


@dataclass(frozen=True)
class DeviationReport:
    n: int
    z: complex
    sigma: float
    grid_size: int
    mean: float            # L_n(z)
    threshold: float       # n^-sigma
    violating_fraction: float
    bound: float           # e^{-n^sigma}, reported, never asserted
    diophantine_ok: bool


@dataclass(frozen=True)
class DiophantineReport:
    omega: float
    c: float
    a: float
    k_max: int
    passes: bool
    first_violation: int   # smallest violating k, or 0
    worst_k: int           # k minimizing ||k omega|| * k^A
    worst_margin: float    # min ||k omega|| * k^A / c


def _grid_lognorms(family: QuasiPeriodicFamily, n: int, z: complex,
                   grid: int, threads: int = 1) -> np.ndarray:
    xs = np.arange(grid, dtype=float) / grid
    alphas = family.alpha_grid(xs, n)
    if threads <= 1 or grid < 2 * threads:
        return kernels.cocycle_lognorms(alphas, z)
    bounds = np.linspace(0, grid, threads + 1, dtype=int)
    out = np.empty(grid, dtype=float)

    def work(i):
        lo, hi = bounds[i], bounds[i + 1]
        out[lo:hi] = kernels.cocycle_lognorms(alphas[lo:hi], z)

    with ThreadPoolExecutor(max_workers=threads) as pool:
        list(pool.map(work, range(threads)))
    return out


def lyapunov_n(family: QuasiPeriodicFamily, n: int, z: complex, grid: int,
               threads: int = 1, keep_samples: bool = False) -> LyapunovEstimate:
    """Finite-n Lyapunov exponent over a uniform phase grid."""
    z = complex(z)
    if abs(abs(z) - 1.0) > UNIT_MODULUS_TOL:
        raise ValueError(f"spectral parameter must lie on the circle, |z|={abs(z)}")
    if n < 1:
        raise ValueError("n must be >= 1")
    if grid < MIN_GRID:
        raise ValueError(f"grid must be >= {MIN_GRID}")
    lognorms = _grid_lognorms(family, n, z, grid, threads)
    value = float(np.sum(lognorms) / (n * grid))
    return LyapunovEstimate(
        n=n, z=z, grid_size=grid, value=value,
        samples=(lognorms / n) if keep_samples else None)


def lyapunov_limit(family: QuasiPeriodicFamily, z: complex, schedule,
                   grid: int, threads: int = 1) -> LyapunovLimit:
    """min over an increasing n-schedule, with the full trend table.

    The subadditive limit equals the infimum; at desk scale we report the
    minimum over the schedule and flag any non-monotone step that exceeds
    the quadrature tolerance.
    """
    schedule = tuple(int(n) for n in schedule)
    if not schedule or list(schedule) != sorted(set(schedule)):
        raise ValueError("schedule must be strictly increasing and nonempty")
    table = tuple((n, lyapunov_n(family, n, z, grid, threads).value)
                  for n in schedule)
    values = [v for _, v in table]
    monotone = all(values[i + 1] <= values[i] + QUADRATURE_TOL
                   for i in range(len(values) - 1))
    return LyapunovLimit(z=complex(z), schedule=schedule, table=table,
                         value=min(values), last=values[-1], monotone=monotone)


def ldt_empirical(family: QuasiPeriodicFamily, n: int, z: complex, sigma: float,
                  grid: int, threads: int = 1) -> DeviationReport:
    """Fraction of phases where (1/n) log ||S^z_n(x)|| strays from its mean
    by more than n^-sigma.  The asymptotic bound e^{-n^sigma} is reported
    alongside, never asserted: its onset constants are not desk-scale facts.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    est = lyapunov_n(family, n, z, grid, threads, keep_samples=True)
    threshold = float(n) ** (-sigma)
    deviations = np.abs(est.samples - est.value)
    fraction = float(np.count_nonzero(deviations > threshold)) / grid
    dio = diophantine_check(family.omega, c=1e-3, a=2.0, k_max=10_000)
    return DeviationReport(
        n=n, z=complex(z), sigma=float(sigma), grid_size=grid,
        mean=est.value, threshold=threshold, violating_fraction=fraction,
        bound=math.exp(-float(n) ** sigma), diophantine_ok=dio.passes)


def diophantine_check(omega: float, c: float, a: float,
                      k_max: int) -> DiophantineReport:
    """Exhaustive check of ||k omega|| > c |k|^-A for 1 <= k <= k_max.

    ||.|| is the distance to the nearest integer.  Negative k are covered
    by symmetry.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    k = np.arange(1, k_max + 1, dtype=float)
    prod = k * float(omega)
    dist = np.abs(prod - np.round(prod))
    bound = c * k ** (-float(a))
    violations = np.nonzero(dist <= bound)[0]
    margins = dist * k ** float(a) / c
    worst = int(np.argmin(margins))
    return DiophantineReport(
        omega=float(omega), c=float(c), a=float(a), k_max=int(k_max),
        passes=len(violations) == 0,
        first_violation=int(violations[0]) + 1 if len(violations) else 0,
        worst_k=worst + 1,
        worst_margin=float(margins[worst]))
