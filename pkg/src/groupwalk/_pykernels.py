"""Pure-Python/numpy implementations of the hot numerical kernels.

These are the reference versions. ``_ckernels.pyx`` mirrors them loop for loop
so both backends perform the same floating-point operations in the same order.
"""

from math import copysign, exp, lgamma, log, sqrt

import numpy as np

BACKEND = "python"


def _rotation(app, aqq, apq):
    diff = aqq - app
    if abs(apq) < 1e-150 * abs(diff):
        t = apq / diff  # theta would overflow; t ~ 1 / (2 theta)
    else:
        theta = diff / (2.0 * apq)
        t = copysign(1.0, theta) / (abs(theta) + sqrt(theta * theta + 1.0))
    c = 1.0 / sqrt(t * t + 1.0)
    return c, t * c


def jacobi_eigh(a, tol=1e-12, max_sweeps=100):
    """Cyclic Jacobi diagonalization of a symmetric matrix.

    Returns ``(diag, V, sweeps, converged)`` where ``diag`` holds the
    (unsorted) eigenvalues and the columns of ``V`` the eigenvectors.
    Convergence: off-diagonal Frobenius norm <= ``tol * ||a||_F``.
    """
    A = np.array(a, dtype=np.float64, copy=True)
    n = A.shape[0]
    V = np.eye(n)
    scale = sqrt(float(np.sum(A * A)))
    if n < 2 or scale == 0.0:
        return np.diag(A).copy(), V, 0, True
    for sweep in range(max_sweeps + 1):
        off = sqrt(2.0 * float(np.sum(np.triu(A, 1) ** 2)))
        if off <= tol * scale:
            return np.diag(A).copy(), V, sweep, True
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                c, s = _rotation(A[p, p], A[q, q], apq)
                cp = A[:, p].copy()
                cq = A[:, q].copy()
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
                rp = A[p, :].copy()
                rq = A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                A[p, q] = 0.0
                A[q, p] = 0.0
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    return np.diag(A).copy(), V, max_sweeps, False


def expected_mutual_info(a, b, n):
    """Expected mutual information (nats) of two partitions with marginals
    ``a`` and ``b`` under the hypergeometric permutation model."""
    lg_n = lgamma(n + 1.0)
    emi = 0.0
    for ai in a:
        ai = int(ai)
        for bj in b:
            bj = int(bj)
            lo = max(1, ai + bj - n)
            hi = min(ai, bj)
            base = (lgamma(ai + 1.0) + lgamma(bj + 1.0) + lgamma(n - ai + 1.0)
                    + lgamma(n - bj + 1.0) - lg_n)
            for nij in range(lo, hi + 1):
                logp = (base - lgamma(nij + 1.0) - lgamma(ai - nij + 1.0)
                        - lgamma(bj - nij + 1.0) - lgamma(n - ai - bj + nij + 1.0))
                emi += nij / n * log(n * nij / (ai * bj)) * exp(logp)
    return emi


def _assign(X, centers, labels):
    n, d = X.shape
    m = centers.shape[0]
    for i in range(n):
        best = 0
        best_d = np.inf
        for k in range(m):
            dist = 0.0
            for j in range(d):
                diff = X[i, j] - centers[k, j]
                dist += diff * diff
            if dist < best_d:
                best_d = dist
                best = k
        labels[i] = best


def _repair(X, labels, m):
    # Each empty cluster takes the point farthest from the centroid of the
    # currently largest cluster.
    while True:
        counts = np.bincount(labels, minlength=m)
        empty = np.flatnonzero(counts == 0)
        if empty.size == 0:
            return
        big = int(np.argmax(counts))
        members = np.flatnonzero(labels == big)
        mu = X[members].mean(axis=0)
        dist = ((X[members] - mu) ** 2).sum(axis=1)
        labels[members[int(np.argmax(dist))]] = int(empty[0])


def _centroids(X, labels, m):
    centers = np.zeros((m, X.shape[1]))
    counts = np.zeros(m)
    for i in range(X.shape[0]):
        centers[labels[i]] += X[i]
        counts[labels[i]] += 1.0
    return centers / counts[:, None]


def _inertia(X, labels, centers):
    total = 0.0
    for i in range(X.shape[0]):
        diff = X[i] - centers[labels[i]]
        total += float(diff @ diff)
    return total


def lloyd(X, centers, max_iter=300):
    """Lloyd iterations from the given initial centers.

    Returns ``(labels, centers, history)``; ``history[k]`` is the objective
    after the k-th centroid update. Every cluster stays non-empty.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    centers = np.array(centers, dtype=np.float64, copy=True)
    m = centers.shape[0]
    labels = np.full(X.shape[0], -1, dtype=np.intp)
    new = np.empty(X.shape[0], dtype=np.intp)
    history = []
    for _ in range(max_iter):
        _assign(X, centers, new)
        _repair(X, new, m)
        if np.array_equal(new, labels):
            break
        labels[:] = new
        centers = _centroids(X, labels, m)
        history.append(_inertia(X, labels, centers))
    return labels, centers, np.asarray(history)
