# cython: language_level=3
"""Compiled filter-bank inner loops; same contracts as ``_pykernels``."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

NAME = "native"


cdef inline Py_ssize_t _wrap(Py_ssize_t i, Py_ssize_t n) nogil:
    i %= n
    if i < 0:
        i += n
    return i


def cconv(const double[:, ::1] x, const double[::1] h, Py_ssize_t shift=0):
    cdef Py_ssize_t n = x.shape[0], p = x.shape[1], taps = h.shape[0]
    cdef Py_ssize_t i, k, j, src
    cdef double hk
    out = np.zeros((n, p))
    cdef double[:, ::1] y = out
    with nogil:
        for i in range(n):
            for k in range(taps):
                hk = h[k]
                src = _wrap(i + shift - k, n)
                for j in range(p):
                    y[i, j] += hk * x[src, j]
    return out


def conv_down(const double[:, ::1] x, const double[::1] h):
    cdef Py_ssize_t n = x.shape[0], p = x.shape[1], taps = h.shape[0]
    cdef Py_ssize_t half = n // 2
    cdef Py_ssize_t m, k, j, src
    cdef double hk
    out = np.zeros((half, p))
    cdef double[:, ::1] y = out
    with nogil:
        for m in range(half):
            for k in range(taps):
                hk = h[k]
                src = _wrap(2 * m - k, n)
                for j in range(p):
                    y[m, j] += hk * x[src, j]
    return out


def up_conv(const double[:, ::1] c, const double[::1] g, Py_ssize_t shift=0):
    cdef Py_ssize_t half = c.shape[0], p = c.shape[1], taps = g.shape[0]
    cdef Py_ssize_t n = 2 * half
    cdef Py_ssize_t i, k, j, src
    cdef double gk
    out = np.zeros((n, p))
    cdef double[:, ::1] y = out
    with nogil:
        for i in range(n):
            for k in range(taps):
                src = _wrap(i + shift - k, n)
                # odd positions of the upsampled signal are zero
                if src & 1:
                    continue
                gk = g[k]
                src >>= 1
                for j in range(p):
                    y[i, j] += gk * c[src, j]
    return out
