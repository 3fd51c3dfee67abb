# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops. Must stay behaviourally identical to ``_fallback``."""
import numpy as np

from libc.math cimport NAN, sqrt


def midranks(values):
    cdef const double[::1] x = np.ascontiguousarray(values, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0]
    cdef const long long[::1] order = np.argsort(x, kind="stable").astype(np.int64)
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] r = out
    cdef Py_ssize_t i = 0, j, k
    cdef double v, avg
    while i < n:
        j = i
        v = x[order[i]]
        while j + 1 < n and x[order[j + 1]] == v:
            j += 1
        avg = 0.5 * (i + j) + 1.0
        for k in range(i, j + 1):
            r[order[k]] = avg
        i = j + 1
    return out


def sweep(labels):
    cdef const unsigned char[::1] lab = np.ascontiguousarray(labels, dtype=np.uint8)
    cdef Py_ssize_t n = lab.shape[0]
    tp_arr = np.empty(n + 1, dtype=np.int64)
    phi_arr = np.empty(n + 1, dtype=np.float64)
    cdef long long[::1] tp = tp_arr
    cdef double[::1] phi = phi_arr
    cdef Py_ssize_t i, R
    cdef long long t, f, fn, tn, n_pos, n_neg
    cdef double den, area = 0.0, auc

    tp[0] = 0
    for i in range(n):
        if lab[i]:
            tp[i + 1] = tp[i] + 1
        else:
            tp[i + 1] = tp[i]
            area += tp[i]
    n_pos = tp[n]
    n_neg = n - n_pos

    phi[0] = NAN
    if n > 0:
        phi[n] = NAN
    for R in range(1, n):
        t = tp[R]
        f = R - t
        fn = n_pos - t
        tn = n_neg - f
        den = <double>R * <double>(n - R) * <double>n_pos * <double>n_neg
        if den > 0:
            phi[R] = (<double>(t * tn - f * fn)) / sqrt(den)
        else:
            phi[R] = NAN

    if n_pos > 0 and n_neg > 0:
        auc = area / (<double>n_pos * <double>n_neg)
    else:
        auc = NAN
    return tp_arr, phi_arr, auc


def pearson_sums(x_values, y_values):
    cdef const double[::1] x = np.ascontiguousarray(x_values, dtype=np.float64)
    cdef const double[::1] y = np.ascontiguousarray(y_values, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0], i
    cdef double mx = 0.0, my = 0.0, dx, dy, sxx = 0.0, syy = 0.0, sxy = 0.0
    for i in range(n):
        mx += x[i]
        my += y[i]
    mx /= n
    my /= n
    for i in range(n):
        dx = x[i] - mx
        dy = y[i] - my
        sxx += dx * dx
        syy += dy * dy
        sxy += dx * dy
    return sxx, syy, sxy
