# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled max-times kernels. Semantics mirror ``_fallback`` exactly."""

import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY, NAN

cnp.import_array()


def mt_matvec(const double[:, ::1] A, const double[::1] x):
    cdef Py_ssize_t n = A.shape[0], m = A.shape[1], i, j
    cdef double best, t
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    for i in range(n):
        best = 0.0
        for j in range(m):
            t = A[i, j] * x[j]
            if t > best:
                best = t
        o[i] = best
    return out


def mt_matmul(const double[:, ::1] A, const double[:, ::1] B):
    cdef Py_ssize_t n = A.shape[0], p = A.shape[1], m = B.shape[1], i, j, k
    cdef double a, t
    out = np.zeros((n, m), dtype=np.float64)
    cdef double[:, ::1] o = out
    for i in range(n):
        for k in range(p):
            a = A[i, k]
            if a == 0.0:
                continue
            for j in range(m):
                t = a * B[k, j]
                if t > o[i, j]:
                    o[i, j] = t
    return out


cdef inline double _residual(const double[::1] v, const double[::1] w) nogil:
    cdef Py_ssize_t i
    cdef double best = INFINITY, r
    cdef bint seen = 0
    for i in range(w.shape[0]):
        if w[i] > 0.0:
            r = v[i] / w[i]
            if r < best:
                best = r
            seen = 1
    return best if seen else NAN


def mt_residual(const double[::1] v, const double[::1] w):
    return _residual(v, w)


def mt_project(const double[::1, :] G, const double[::1] y):
    """Greatest element of the cone spanned by the columns of ``G`` below ``y``."""
    cdef Py_ssize_t n = G.shape[0], m = G.shape[1], i, j
    cdef double r, t
    out = np.zeros(n, dtype=np.float64)
    cdef double[::1] o = out
    for j in range(m):
        r = _residual(y, G[:, j])
        if not (r > 0.0):
            continue
        for i in range(n):
            t = r * G[i, j]
            if t > o[i]:
                o[i] = t
    return out


def karp_tables(const double[:, ::1] logw):
    """Longest k-arc walk weights D[k, v] and their predecessors.

    ``logw[u, v]`` is the arc weight u -> v, ``-inf`` where absent.
    """
    cdef Py_ssize_t n = logw.shape[0], k, u, v
    cdef double best, val, d
    cdef long long arg
    D_arr = np.full((n + 1, n), -np.inf, dtype=np.float64)
    P_arr = np.full((n + 1, n), -1, dtype=np.int64)
    cdef double[:, ::1] D = D_arr
    cdef long long[:, ::1] P = P_arr
    for v in range(n):
        D[0, v] = 0.0
    for k in range(1, n + 1):
        for v in range(n):
            best = -INFINITY
            arg = -1
            for u in range(n):
                d = D[k - 1, u]
                if d == -INFINITY or logw[u, v] == -INFINITY:
                    continue
                val = d + logw[u, v]
                if val > best:
                    best = val
                    arg = u
            D[k, v] = best
            P[k, v] = arg
    return D_arr, P_arr
