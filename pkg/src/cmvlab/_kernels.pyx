# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled cocycle-product kernels.

Same contract as the numpy fallback in ``_kernels_py``: left-multiplied
products of Szego one-step matrices per row, with exact power-of-two
rescaling at 8-step checkpoints, plus closed-form 2x2 top singular values
in log scale.
"""

import numpy as np

cimport cython
from libc.math cimport fabs, log, sqrt

cdef int CHECK_EVERY = 8
cdef long EXP_STEP = 256
cdef double UP = 2.0 ** 256
cdef double DOWN = 2.0 ** -256
cdef double LN2 = 0.6931471805599453


@cython.boundscheck(False)
@cython.wraparound(False)
cdef void _row_product(const double[:, ::1] ar, const double[:, ::1] ai,
                       Py_ssize_t row, Py_ssize_t n, double zr, double zi,
                       double* out, long* eout, double* dout,
                       long* deout) noexcept nogil:
    cdef double a11r = 1.0, a11i = 0.0, a12r = 0.0, a12i = 0.0
    cdef double a21r = 0.0, a21i = 0.0, a22r = 1.0, a22i = 0.0
    cdef double s11r, s11i, s12r, s12i, s21r, s21i, s22r
    cdef double n11r, n11i, n12r, n12i, n21r, n21i, n22r, n22i
    cdef double alr, ali_, inv, azr, azi, m, t
    cdef double detr = 1.0, deti = 0.0, sdr, sdi, tmpr
    cdef long e2 = 0, de2 = 0
    cdef Py_ssize_t j
    for j in range(n):
        alr = ar[row, j]
        ali_ = ai[row, j]
        inv = 1.0 / sqrt(1.0 - (alr * alr + ali_ * ali_))
        s11r = zr * inv
        s11i = zi * inv
        s12r = -alr * inv
        s12i = ali_ * inv
        azr = alr * zr - ali_ * zi
        azi = alr * zi + ali_ * zr
        s21r = -azr * inv
        s21i = -azi * inv
        s22r = inv

        n11r = (s11r * a11r - s11i * a11i) + (s12r * a21r - s12i * a21i)
        n11i = (s11r * a11i + s11i * a11r) + (s12r * a21i + s12i * a21r)
        n12r = (s11r * a12r - s11i * a12i) + (s12r * a22r - s12i * a22i)
        n12i = (s11r * a12i + s11i * a12r) + (s12r * a22i + s12i * a22r)
        n21r = (s21r * a11r - s21i * a11i) + s22r * a21r
        n21i = (s21r * a11i + s21i * a11r) + s22r * a21i
        n22r = (s21r * a12r - s21i * a12i) + s22r * a22r
        n22i = (s21r * a12i + s21i * a12r) + s22r * a22i
        a11r, a11i, a12r, a12i = n11r, n11i, n12r, n12i
        a21r, a21i, a22r, a22i = n21r, n21i, n22r, n22i

        sdr = (s11r * s22r) - (s12r * s21r - s12i * s21i)
        sdi = (s11i * s22r) - (s12r * s21i + s12i * s21r)
        tmpr = detr * sdr - deti * sdi
        deti = detr * sdi + deti * sdr
        detr = tmpr

        if (j + 1) % CHECK_EVERY == 0:
            m = fabs(a11r)
            t = fabs(a11i)
            if t > m: m = t
            t = fabs(a12r)
            if t > m: m = t
            t = fabs(a12i)
            if t > m: m = t
            t = fabs(a21r)
            if t > m: m = t
            t = fabs(a21i)
            if t > m: m = t
            t = fabs(a22r)
            if t > m: m = t
            t = fabs(a22i)
            if t > m: m = t
            while m > UP:
                a11r *= DOWN; a11i *= DOWN; a12r *= DOWN; a12i *= DOWN
                a21r *= DOWN; a21i *= DOWN; a22r *= DOWN; a22i *= DOWN
                e2 += EXP_STEP
                m *= DOWN
            while m > 0.0 and m < DOWN:
                a11r *= UP; a11i *= UP; a12r *= UP; a12i *= UP
                a21r *= UP; a21i *= UP; a22r *= UP; a22i *= UP
                e2 -= EXP_STEP
                m *= UP
            m = fabs(detr)
            t = fabs(deti)
            if t > m: m = t
            while m > UP:
                detr *= DOWN; deti *= DOWN
                de2 += EXP_STEP
                m *= DOWN
            while m > 0.0 and m < DOWN:
                detr *= UP; deti *= UP
                de2 -= EXP_STEP
                m *= UP
    out[0] = a11r; out[1] = a11i; out[2] = a12r; out[3] = a12i
    out[4] = a21r; out[5] = a21i; out[6] = a22r; out[7] = a22i
    eout[0] = e2
    dout[0] = detr
    dout[1] = deti
    deout[0] = de2


cdef double _lognorm(double* c, long e2) noexcept nogil:
    cdef double m = 0.0, t, g, detr, deti, dd, disc, sigma2
    cdef int k
    for k in range(8):
        t = fabs(c[k])
        if t > m:
            m = t
    if m == 0.0:
        return log(0.0)
    cdef double b0r = c[0] / m, b0i = c[1] / m, b1r = c[2] / m, b1i = c[3] / m
    cdef double b2r = c[4] / m, b2i = c[5] / m, b3r = c[6] / m, b3i = c[7] / m
    g = (b0r * b0r + b0i * b0i) + (b1r * b1r + b1i * b1i) \
        + (b2r * b2r + b2i * b2i) + (b3r * b3r + b3i * b3i)
    detr = (b0r * b3r - b0i * b3i) - (b1r * b2r - b1i * b2i)
    deti = (b0r * b3i + b0i * b3r) - (b1r * b2i + b1i * b2r)
    dd = detr * detr + deti * deti
    disc = g * g - 4.0 * dd
    if disc < 0.0:
        disc = 0.0
    sigma2 = (g + sqrt(disc)) / 2.0
    return 0.5 * log(sigma2) + log(m) + e2 * LN2


def _z_rows(z, Py_ssize_t g):
    zarr = np.asarray(z, dtype=np.complex128)
    if zarr.ndim == 0:
        zarr = np.broadcast_to(zarr, (g,)).copy()
    elif zarr.shape != (g,):
        raise ValueError("z must be a scalar or one value per row")
    return np.ascontiguousarray(zarr.real), np.ascontiguousarray(zarr.imag)


def cocycle_products(alphas, z):
    alphas = np.ascontiguousarray(alphas, dtype=np.complex128)
    if alphas.ndim != 2:
        raise ValueError("alphas must be a (rows, steps) array")
    cdef double[:, ::1] ar = np.ascontiguousarray(alphas.real)
    cdef double[:, ::1] ai = np.ascontiguousarray(alphas.imag)
    cdef Py_ssize_t g = alphas.shape[0], n = alphas.shape[1]
    zr_arr, zi_arr = _z_rows(z, g)
    cdef double[::1] zr = zr_arr
    cdef double[::1] zi = zi_arr
    mr_arr = np.empty((g, 2, 2), dtype=np.float64)
    mi_arr = np.empty((g, 2, 2), dtype=np.float64)
    exp2 = np.zeros(g, dtype=np.int64)
    dr_arr = np.empty(g, dtype=np.float64)
    di_arr = np.empty(g, dtype=np.float64)
    dexp2 = np.zeros(g, dtype=np.int64)
    cdef double[:, :, ::1] mr = mr_arr
    cdef double[:, :, ::1] mi = mi_arr
    cdef long[::1] ev = exp2
    cdef double[::1] dr = dr_arr
    cdef double[::1] di = di_arr
    cdef long[::1] dev = dexp2
    cdef double comp[8]
    cdef double dcomp[2]
    cdef long e2, de2
    cdef Py_ssize_t row
    with nogil:
        for row in range(g):
            _row_product(ar, ai, row, n, zr[row], zi[row], comp, &e2,
                         dcomp, &de2)
            mr[row, 0, 0] = comp[0]; mi[row, 0, 0] = comp[1]
            mr[row, 0, 1] = comp[2]; mi[row, 0, 1] = comp[3]
            mr[row, 1, 0] = comp[4]; mi[row, 1, 0] = comp[5]
            mr[row, 1, 1] = comp[6]; mi[row, 1, 1] = comp[7]
            ev[row] = e2
            dr[row] = dcomp[0]
            di[row] = dcomp[1]
            dev[row] = de2
    return mr_arr + 1j * mi_arr, exp2, dr_arr + 1j * di_arr, dexp2


def cocycle_lognorms(alphas, z):
    alphas = np.ascontiguousarray(alphas, dtype=np.complex128)
    if alphas.ndim != 2:
        raise ValueError("alphas must be a (rows, steps) array")
    cdef double[:, ::1] ar = np.ascontiguousarray(alphas.real)
    cdef double[:, ::1] ai = np.ascontiguousarray(alphas.imag)
    cdef Py_ssize_t g = alphas.shape[0], n = alphas.shape[1]
    zr_arr, zi_arr = _z_rows(z, g)
    cdef double[::1] zr = zr_arr
    cdef double[::1] zi = zi_arr
    out = np.empty(g, dtype=np.float64)
    cdef double[::1] ov = out
    cdef double comp[8]
    cdef double dcomp[2]
    cdef long e2, de2
    cdef Py_ssize_t row
    with nogil:
        for row in range(g):
            _row_product(ar, ai, row, n, zr[row], zi[row], comp, &e2,
                         dcomp, &de2)
            ov[row] = _lognorm(comp, e2)
    return out


def lognorm_2x2(mats, exp2):
    mats = np.ascontiguousarray(mats, dtype=np.complex128)
    cdef double[:, :, ::1] mr = np.ascontiguousarray(mats.real)
    cdef double[:, :, ::1] mi = np.ascontiguousarray(mats.imag)
    cdef long[::1] ev = np.ascontiguousarray(exp2, dtype=np.int64)
    cdef Py_ssize_t g = mats.shape[0]
    out = np.empty(g, dtype=np.float64)
    cdef double[::1] ov = out
    cdef double comp[8]
    cdef Py_ssize_t row
    with nogil:
        for row in range(g):
            comp[0] = mr[row, 0, 0]; comp[1] = mi[row, 0, 0]
            comp[2] = mr[row, 0, 1]; comp[3] = mi[row, 0, 1]
            comp[4] = mr[row, 1, 0]; comp[5] = mi[row, 1, 0]
            comp[6] = mr[row, 1, 1]; comp[7] = mi[row, 1, 1]
            ov[row] = _lognorm(comp, ev[row])
    return out
