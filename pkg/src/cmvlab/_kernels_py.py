"""Pure numpy implementation of the cocycle-product kernels.

Semantics shared with the compiled extension:

  cocycle_products(alphas, z) multiplies, for every row x of ``alphas``,
  the one-step matrices (1/rho_j) [[z, -conj(a_j)], [-a_j z, 1]] for
  j = 0..n-1 (step j applied on the left), returning the accumulated 2x2
  matrices together with power-of-two exponents (the true product for row
  k is mats[k] * 2.0**exp2[k]) and the running determinant, accumulated
  step by step from the step entries: the determinant of a long product
  cannot be recovered from its (nearly rank-one) entries.

  Rescaling happens at 8-step checkpoints and multiplies by exact powers
  of two only, so it never changes the mantissas.

  cocycle_lognorms returns log of the largest singular value of each true
  product (natural log), computed from the closed-form 2x2 SVD.
"""

from __future__ import annotations

import numpy as np

CHECK_EVERY = 8
EXP_STEP = 256
_UP = 2.0 ** EXP_STEP
_DOWN = 2.0 ** -EXP_STEP
_LN2 = float(np.log(2.0))


def cocycle_products(alphas, z):
    alphas = np.ascontiguousarray(alphas, dtype=np.complex128)
    if alphas.ndim != 2:
        raise ValueError("alphas must be a (rows, steps) array")
    g, n = alphas.shape
    z = np.asarray(z, dtype=np.complex128)
    if z.ndim == 0:
        z = np.broadcast_to(z, (g,))
    elif z.shape != (g,):
        raise ValueError("z must be a scalar or one value per row")
    a11 = np.ones(g, dtype=np.complex128)
    a22 = np.ones(g, dtype=np.complex128)
    a12 = np.zeros(g, dtype=np.complex128)
    a21 = np.zeros(g, dtype=np.complex128)
    exp2 = np.zeros(g, dtype=np.int64)
    dets = np.ones(g, dtype=np.complex128)
    dexp2 = np.zeros(g, dtype=np.int64)
    for j in range(n):
        al = alphas[:, j]
        inv = 1.0 / np.sqrt(1.0 - (al.real * al.real + al.imag * al.imag))
        s11 = z * inv
        s12 = -np.conj(al) * inv
        s21 = -al * (z * inv)
        s22 = inv
        n11 = s11 * a11 + s12 * a21
        n12 = s11 * a12 + s12 * a22
        n21 = s21 * a11 + s22 * a21
        n22 = s21 * a12 + s22 * a22
        a11, a12, a21, a22 = n11, n12, n21, n22
        dets = dets * (s11 * s22 - s12 * s21)
        if (j + 1) % CHECK_EVERY == 0:
            m = _max_component(a11, a12, a21, a22)
            big = m > _UP
            while np.any(big):
                for arr in (a11, a12, a21, a22):
                    arr[big] *= _DOWN
                exp2[big] += EXP_STEP
                m = _max_component(a11, a12, a21, a22)
                big = m > _UP
            small = (m > 0.0) & (m < _DOWN)
            while np.any(small):
                for arr in (a11, a12, a21, a22):
                    arr[small] *= _UP
                exp2[small] -= EXP_STEP
                m = _max_component(a11, a12, a21, a22)
                small = (m > 0.0) & (m < _DOWN)
            dm = np.maximum(np.abs(dets.real), np.abs(dets.imag))
            big = dm > _UP
            dets[big] *= _DOWN
            dexp2[big] += EXP_STEP
            small = (dm > 0.0) & (dm < _DOWN)
            dets[small] *= _UP
            dexp2[small] -= EXP_STEP
    mats = np.empty((g, 2, 2), dtype=np.complex128)
    mats[:, 0, 0] = a11
    mats[:, 0, 1] = a12
    mats[:, 1, 0] = a21
    mats[:, 1, 1] = a22
    return mats, exp2, dets, dexp2


def _max_component(a11, a12, a21, a22):
    m = np.abs(a11.real)
    for arr in (a11.imag, a12.real, a12.imag, a21.real, a21.imag,
                a22.real, a22.imag):
        m = np.maximum(m, np.abs(arr))
    return m


def lognorm_2x2(mats, exp2):
    """log of the top singular value of mats[k] * 2**exp2[k], per row."""
    mats = np.asarray(mats, dtype=np.complex128)
    m = np.max(np.maximum(np.abs(mats.real), np.abs(mats.imag)), axis=(1, 2))
    safe = np.where(m > 0.0, m, 1.0)
    b = mats / safe[:, None, None]
    gram = np.sum(b.real * b.real + b.imag * b.imag, axis=(1, 2))
    det = b[:, 0, 0] * b[:, 1, 1] - b[:, 0, 1] * b[:, 1, 0]
    dd = det.real * det.real + det.imag * det.imag
    disc = np.maximum(gram * gram - 4.0 * dd, 0.0)
    sigma2 = (gram + np.sqrt(disc)) / 2.0
    out = 0.5 * np.log(sigma2) + np.log(safe) + exp2 * _LN2
    return np.where(m > 0.0, out, -np.inf)


def cocycle_lognorms(alphas, z):
    mats, exp2 = cocycle_products(alphas, z)[:2]
    return lognorm_2x2(mats, exp2)
