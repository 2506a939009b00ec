# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops for cos^2 windows.

Mirrors ``_kernels_py`` exactly; ``kernels`` picks whichever is importable.
"""
import numpy as np

from libc.math cimport M_PI, cos, fabs, sin


cdef inline double _sinc(double x) noexcept nogil:
    if x == 0.0:
        return 1.0
    return sin(x) / x


cdef inline double _cos2_spec(double nu, double T) noexcept nogil:
    cdef double a = 2.0 * M_PI / T
    cdef double thr = 0.05 * a
    if fabs(nu) < thr or fabs(nu - a) < thr or fabs(nu + a) < thr:
        return 0.5 * T * (_sinc(0.5 * nu * T)
                          + 0.5 * _sinc(0.5 * (nu + a) * T)
                          + 0.5 * _sinc(0.5 * (nu - a) * T))
    return sin(0.5 * nu * T) * a * a / (nu * (a * a - nu * nu))


def cos2_spectrum(nu, double duration):
    cdef double[::1] x = np.ascontiguousarray(nu, dtype=np.float64).ravel()
    cdef Py_ssize_t n = x.shape[0], k
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for k in range(n):
            o[k] = _cos2_spec(x[k], duration)
    return out.reshape(np.shape(nu))


def cos2_overlap(u, double dur_i, double c_i, double dur_j, double c_j,
                 double kappa, const double[::1] nodes, const double[::1] weights):
    cdef double[::1] uu = np.ascontiguousarray(u, dtype=np.float64).ravel()
    cdef Py_ssize_t n = uu.shape[0], m = nodes.shape[0], k, q
    out = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef double lo, hi, mid, half, v, ei, ej, wk, re, im, uk
    cdef double pi_i = M_PI / dur_i, pi_j = M_PI / dur_j
    with nogil:
        for k in range(n):
            uk = uu[k]
            lo = c_j - 0.5 * dur_j
            if c_i - 0.5 * dur_i - uk > lo:
                lo = c_i - 0.5 * dur_i - uk
            hi = c_j + 0.5 * dur_j
            if c_i + 0.5 * dur_i - uk < hi:
                hi = c_i + 0.5 * dur_i - uk
            re = 0.0
            im = 0.0
            if hi > lo:
                mid = 0.5 * (hi + lo)
                half = 0.5 * (hi - lo)
                for q in range(m):
                    v = mid + half * nodes[q]
                    ei = cos(pi_i * (uk + v - c_i))
                    ej = cos(pi_j * (v - c_j))
                    wk = weights[q] * ei * ei * ej * ej
                    re += wk * cos(kappa * v)
                    im += wk * sin(kappa * v)
                re *= half
                im *= half
            o[k] = re + 1j * im
    return out.reshape(np.shape(u))
