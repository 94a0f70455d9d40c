# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled numeric kernels; see ``_pykernels`` for the reference semantics.

Loops that gain from compilation (sparse triangle sums, in-place fill,
folding, moments, framing) run here without the GIL. Dense products stay on
BLAS and ``log`` stays on numpy's vectorized ufunc.
"""
import numpy as np

NAME = "cython"


cdef void _energies(const double[:, ::1] w, const long[::1] lo, const long[::1] hi,
                    const double[:, ::1] mags_t, double floor,
                    double[:, ::1] out) noexcept nogil:
    # out is F x P; frames outer so each spectrum row stays in cache
    cdef Py_ssize_t n_filters = w.shape[0]
    cdef Py_ssize_t n_frames = mags_t.shape[0]
    cdef Py_ssize_t m, p, k
    cdef double s
    for p in range(n_frames):
        for m in range(n_filters):
            s = 0.0
            for k in range(lo[m], hi[m]):
                s += w[m, k] * mags_t[p, k]
            out[m, p] = s if s > floor else floor


cdef void _fill(double[:, ::1] logmel, Py_ssize_t active, double decay) noexcept nogil:
    cdef Py_ssize_t n_filters = logmel.shape[0]
    cdef Py_ssize_t n_frames = logmel.shape[1]
    cdef Py_ssize_t m, p
    cdef double scale = 1.0
    for m in range(active, n_filters):
        scale *= decay
        for p in range(n_frames):
            logmel[m, p] = scale * logmel[active - 1, p]


def window_frames(samples, Py_ssize_t frame_len, Py_ssize_t hop, Py_ssize_t n_frames, window):
    cdef const double[::1] x = samples
    cdef const double[::1] w = window
    out = np.empty((n_frames, frame_len), dtype=np.float64)
    cdef double[:, ::1] ov = out
    cdef Py_ssize_t p, i, start
    with nogil:
        for p in range(n_frames):
            start = p * hop
            for i in range(frame_len):
                ov[p, i] = x[start + i] * w[i]
    return out


def _log_energies(weights, lo, hi, mags_t, double floor):
    cdef const double[:, ::1] w = weights
    cdef const long[::1] lo_v = np.ascontiguousarray(lo, dtype=np.int_)
    cdef const long[::1] hi_v = np.ascontiguousarray(hi, dtype=np.int_)
    cdef const double[:, ::1] mt = mags_t
    out = np.empty((w.shape[0], mt.shape[0]), dtype=np.float64)
    cdef double[:, ::1] ov = out
    with nogil:
        _energies(w, lo_v, hi_v, mt, floor, ov)
    return np.log(out, out=out)


def filterbank_log(weights, lo, hi, mags_t, double floor):
    return _log_energies(weights, lo, hi, mags_t, floor)


def fill_bands(logmel, Py_ssize_t active, double decay):
    out = np.array(logmel, dtype=np.float64, order="C", copy=True)
    cdef double[:, ::1] ov = out
    with nogil:
        _fill(ov, active, decay)
    return out


def cosine_transform(table, logmel):
    return table @ logmel


def mfcc_fused(weights, lo, hi, mags_t, double floor, Py_ssize_t active,
               double decay, table):
    logmel = _log_energies(weights, lo, hi, mags_t, floor)
    cdef double[:, ::1] lv = logmel
    with nogil:
        _fill(lv, active, decay)
    return logmel, table @ logmel


def fold_spectrum(spectrum, Py_ssize_t alpha):
    cdef const double complex[::1] x = spectrum
    cdef Py_ssize_t short = x.shape[0] // alpha
    out = np.zeros(short, dtype=np.complex128)
    cdef double complex[::1] ov = out
    cdef Py_ssize_t k, l
    with nogil:
        for l in range(alpha):
            for k in range(short):
                ov[k] = ov[k] + x[k + l * short]
        for k in range(short):
            ov[k] = ov[k] / alpha
    return out


def centered_moments(x, y):
    cdef const double[::1] xv = x
    cdef const double[::1] yv = y
    cdef Py_ssize_t n = xv.shape[0]
    cdef Py_ssize_t i
    cdef double mx = 0.0, my = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0, dx, dy
    with nogil:
        for i in range(n):
            mx += xv[i]
            my += yv[i]
        mx /= n
        my /= n
        for i in range(n):
            dx = xv[i] - mx
            dy = yv[i] - my
            sxx += dx * dx
            syy += dy * dy
            sxy += dx * dy
    return sxx, syy, sxy


def centered_moments_columns(a, b):
    cdef const double[:, ::1] av = a
    cdef const double[:, ::1] bv = b
    cdef Py_ssize_t rows = av.shape[0]
    cdef Py_ssize_t cols = av.shape[1]
    sxx = np.zeros(cols)
    syy = np.zeros(cols)
    sxy = np.zeros(cols)
    ma = np.zeros(cols)
    mb = np.zeros(cols)
    cdef double[::1] xx = sxx, yy = syy, xy = sxy, mav = ma, mbv = mb
    cdef Py_ssize_t i, j
    cdef double da, db
    with nogil:
        for i in range(rows):
            for j in range(cols):
                mav[j] += av[i, j]
                mbv[j] += bv[i, j]
        for j in range(cols):
            mav[j] /= rows
            mbv[j] /= rows
        for i in range(rows):
            for j in range(cols):
                da = av[i, j] - mav[j]
                db = bv[i, j] - mbv[j]
                xx[j] += da * da
                yy[j] += db * db
                xy[j] += da * db
    return sxx, syy, sxy
