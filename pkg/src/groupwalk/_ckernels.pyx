# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport copysign, exp, fabs, lgamma, log, sqrt

cnp.import_array()

BACKEND = "cython"


cdef inline void _rotation(double app, double aqq, double apq,
                           double* c, double* s) noexcept nogil:
    cdef double diff = aqq - app
    cdef double theta, t
    if fabs(apq) < 1e-150 * fabs(diff):
        t = apq / diff
    else:
        theta = diff / (2.0 * apq)
        t = copysign(1.0, theta) / (fabs(theta) + sqrt(theta * theta + 1.0))
    c[0] = 1.0 / sqrt(t * t + 1.0)
    s[0] = t * c[0]


def jacobi_eigh(a, double tol=1e-12, int max_sweeps=100):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] arr = np.array(a, dtype=np.float64, copy=True, order="C")
    cdef Py_ssize_t n = arr.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] varr = np.eye(n)
    cdef double[:, ::1] A = arr
    cdef double[:, ::1] V = varr
    cdef Py_ssize_t i, p, q
    cdef int sweep
    cdef double scale = 0.0, off, apq, c = 1.0, s = 0.0, x, y

    for p in range(n):
        for q in range(n):
            scale += A[p, q] * A[p, q]
    scale = sqrt(scale)
    if n < 2 or scale == 0.0:
        return np.diag(arr).copy(), varr, 0, True

    with nogil:
        for sweep in range(max_sweeps + 1):
            off = 0.0
            for p in range(n - 1):
                for q in range(p + 1, n):
                    off += A[p, q] * A[p, q]
            off = sqrt(2.0 * off)
            if off <= tol * scale:
                break
            if sweep == max_sweeps:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = A[p, q]
                    if apq == 0.0:
                        continue
                    _rotation(A[p, p], A[q, q], apq, &c, &s)
                    for i in range(n):
                        x = A[i, p]
                        y = A[i, q]
                        A[i, p] = c * x - s * y
                        A[i, q] = s * x + c * y
                    for i in range(n):
                        x = A[p, i]
                        y = A[q, i]
                        A[p, i] = c * x - s * y
                        A[q, i] = s * x + c * y
                    A[p, q] = 0.0
                    A[q, p] = 0.0
                    for i in range(n):
                        x = V[i, p]
                        y = V[i, q]
                        V[i, p] = c * x - s * y
                        V[i, q] = s * x + c * y
    converged = off <= tol * scale
    return np.diag(arr).copy(), varr, sweep, converged


def expected_mutual_info(a, b, Py_ssize_t n):
    cdef long[::1] av = np.ascontiguousarray(a, dtype=np.int_)
    cdef long[::1] bv = np.ascontiguousarray(b, dtype=np.int_)
    cdef Py_ssize_t i, j
    cdef long ai, bj, nij, lo, hi
    cdef double lg_n = lgamma(n + 1.0)
    cdef double emi = 0.0, base, logp
    with nogil:
        for i in range(av.shape[0]):
            ai = av[i]
            for j in range(bv.shape[0]):
                bj = bv[j]
                lo = ai + bj - n
                if lo < 1:
                    lo = 1
                hi = ai if ai < bj else bj
                base = (lgamma(ai + 1.0) + lgamma(bj + 1.0) + lgamma(n - ai + 1.0)
                        + lgamma(n - bj + 1.0) - lg_n)
                nij = lo
                while nij <= hi:
                    logp = (base - lgamma(nij + 1.0) - lgamma(ai - nij + 1.0)
                            - lgamma(bj - nij + 1.0) - lgamma(n - ai - bj + nij + 1.0))
                    emi += (<double>nij) / n * log((<double>n) * nij / ((<double>ai) * bj)) * exp(logp)
                    nij += 1
    return emi


cdef void _assign(double[:, ::1] X, double[:, ::1] centers, Py_ssize_t[::1] labels) noexcept nogil:
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1], m = centers.shape[0]
    cdef Py_ssize_t i, j, k, best
    cdef double best_d, dist, diff
    for i in range(n):
        best = 0
        best_d = 1.0 / 0.0
        for k in range(m):
            dist = 0.0
            for j in range(d):
                diff = X[i, j] - centers[k, j]
                dist += diff * diff
            if dist < best_d:
                best_d = dist
                best = k
        labels[i] = best


cdef void _repair(double[:, ::1] X, Py_ssize_t[::1] labels, Py_ssize_t[::1] counts,
                  double[::1] mu) noexcept nogil:
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1], m = counts.shape[0]
    cdef Py_ssize_t i, j, k, empty, big, far
    cdef double dist, far_d, diff
    while True:
        for k in range(m):
            counts[k] = 0
        for i in range(n):
            counts[labels[i]] += 1
        empty = -1
        big = 0
        for k in range(m):
            if counts[k] == 0 and empty < 0:
                empty = k
            if counts[k] > counts[big]:
                big = k
        if empty < 0:
            return
        for j in range(d):
            mu[j] = 0.0
        for i in range(n):
            if labels[i] == big:
                for j in range(d):
                    mu[j] += X[i, j]
        for j in range(d):
            mu[j] /= counts[big]
        far = -1
        far_d = -1.0
        for i in range(n):
            if labels[i] == big:
                dist = 0.0
                for j in range(d):
                    diff = X[i, j] - mu[j]
                    dist += diff * diff
                if dist > far_d:
                    far_d = dist
                    far = i
        labels[far] = empty


def lloyd(X, centers, int max_iter=300):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] xarr = np.ascontiguousarray(X, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] carr = np.array(centers, dtype=np.float64, copy=True, order="C")
    cdef double[:, ::1] Xv = xarr
    cdef double[:, ::1] C = carr
    cdef Py_ssize_t n = xarr.shape[0], d = xarr.shape[1], m = carr.shape[0]
    labels_arr = np.full(n, -1, dtype=np.intp)
    new_arr = np.empty(n, dtype=np.intp)
    hist_arr = np.empty(max_iter, dtype=np.float64)
    cdef Py_ssize_t[::1] labels = labels_arr
    cdef Py_ssize_t[::1] new = new_arr
    cdef Py_ssize_t[::1] counts = np.zeros(m, dtype=np.intp)
    cdef double[::1] mu = np.zeros(d)
    cdef double[::1] hist = hist_arr
    cdef Py_ssize_t i, j, k, it = 0
    cdef bint same
    cdef double total, diff
    with nogil:
        while it < max_iter:
            _assign(Xv, C, new)
            _repair(Xv, new, counts, mu)
            same = True
            for i in range(n):
                if new[i] != labels[i]:
                    same = False
                    break
            if same:
                break
            for i in range(n):
                labels[i] = new[i]
            for k in range(m):
                counts[k] = 0
                for j in range(d):
                    C[k, j] = 0.0
            for i in range(n):
                counts[labels[i]] += 1
                for j in range(d):
                    C[labels[i], j] += Xv[i, j]
            for k in range(m):
                for j in range(d):
                    C[k, j] /= counts[k]
            total = 0.0
            for i in range(n):
                for j in range(d):
                    diff = Xv[i, j] - C[labels[i], j]
                    total += diff * diff
            hist[it] = total
            it += 1
    return labels_arr, carr, hist_arr[:it].copy()
