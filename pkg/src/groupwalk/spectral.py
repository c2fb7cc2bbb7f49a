"""Spectral clustering of a similarity graph with eigengap model selection."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import NumericError
from .similarity import SimilarityGraph

EIGENGAP_COEF = 0.8
KMEANS_RESTARTS = 10
KMEANS_MAX_ITER = 300


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending eigenvalues with eigenvectors as matching columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True)
class FrameClustering:
    ids: tuple
    labels: tuple
    m: int
    eigenvalues: tuple = ()

    def clusters(self) -> dict:
        """``{label: [ids...]}`` with ids in ascending order."""
        out: dict = {}
        for tid, lab in sorted(zip(self.ids, self.labels)):
            out.setdefault(lab, []).append(tid)
        return out


def laplacian(g: SimilarityGraph) -> np.ndarray:
    """Unnormalized Laplacian ``D - W``.

    Degrees include the unit self-loop, which cancels against the diagonal of
    ``W``; the diagonal is therefore formed from the off-diagonal row sums so
    that tiny weights are not absorbed by the 1.
    """
    W = np.asarray(g.W, dtype=np.float64)
    off = W * (1.0 - np.eye(W.shape[0]))
    L = -off
    np.fill_diagonal(L, off.sum(axis=1))
    return L


def eig_sym(L, tol: float = 1e-12, max_sweeps: int = 100) -> Spectrum:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Eigenvalues come back ascending. Each eigenvector is signed so that its
    largest-magnitude entry (lowest index on ties) is positive.
    """
    L = np.asarray(L, dtype=np.float64)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {L.shape}")
    vals, vecs, sweeps, converged = kernels.jacobi_eigh(L, tol, max_sweeps)
    if not converged:
        absd = np.abs(vals)
        cond = absd.max() / absd.min() if absd.min() > 0 else np.inf
        raise NumericError(
            f"Jacobi did not converge in {max_sweeps} sweeps "
            f"(n={L.shape[0]}, ||L||_F={np.linalg.norm(L):.3e}, cond~{cond:.3e})"
        )
    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    vecs = vecs[:, order]
    for k in range(vecs.shape[1]):
        i = int(np.argmax(np.abs(vecs[:, k])))
        if vecs[i, k] < 0:
            vecs[:, k] = -vecs[:, k]
    return Spectrum(vals, vecs)


def eigengap_select(eigenvalues, coef: float = EIGENGAP_COEF, flat_tol: float = 1e-12) -> int:
    """Number of clusters: first index whose gap reaches ``coef/n`` of the total spread.

    A flat spectrum (total spread <= ``flat_tol``) means no edges survive,
    so every node is its own cluster.
    """
    lam = np.asarray(eigenvalues, dtype=np.float64)
    n = lam.shape[0]
    if n < 1:
        raise ValueError("eigengap_select needs at least one eigenvalue")
    if n == 1:
        return 1
    gaps = np.diff(lam)
    total = float(np.sum(gaps))
    if total <= flat_tol:
        return n
    threshold = coef / n * total
    hits = np.flatnonzero(gaps >= threshold)
    return int(hits[0]) + 1 if hits.size else n


def _farthest_point_init(X, m, rng):
    n = X.shape[0]
    chosen = [int(rng.integers(n))]
    mind = ((X - X[chosen[0]]) ** 2).sum(axis=1)
    for _ in range(1, m):
        nxt = int(np.argmax(mind))
        chosen.append(nxt)
        mind = np.minimum(mind, ((X - X[nxt]) ** 2).sum(axis=1))
    return X[chosen].copy()


def kmeans(rows, m: int, seed: int = 0, n_init: int = KMEANS_RESTARTS,
           max_iter: int = KMEANS_MAX_ITER) -> np.ndarray:
    """k-means with seeded farthest-point starts; best of ``n_init`` restarts.

    Returns integer labels in ``0..m-1``; all ``m`` clusters are non-empty.
    """
    X = np.asarray(rows, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    n = X.shape[0]
    if not 1 <= m <= n:
        raise ValueError(f"kmeans needs 1 <= m <= n (m={m}, n={n})")
    if m == 1:
        return np.zeros(n, dtype=np.intp)
    best = None
    for r in range(n_init):
        rng = np.random.default_rng([seed, r])
        labels, _, history = kernels.lloyd(X, _farthest_point_init(X, m, rng), max_iter)
        key = (float(history[-1]), r)
        if best is None or key < best[0]:
            best = (key, labels)
    return best[1]


def canonical_labels(raw) -> tuple:
    """Renumber labels 1, 2, ... in order of first appearance."""
    mapping: dict = {}
    out = []
    for lab in raw:
        lab = int(lab)
        if lab not in mapping:
            mapping[lab] = len(mapping) + 1
        out.append(mapping[lab])
    return tuple(out)


def spectral_cluster(g: SimilarityGraph, coef: float = EIGENGAP_COEF,
                     seed: int = 0) -> FrameClustering:
    n = g.n
    if n == 0:
        return FrameClustering((), (), 0, ())
    if n == 1:
        return FrameClustering(tuple(g.ids), (1,), 1, (0.0,))
    spec = eig_sym(laplacian(g))
    m = eigengap_select(spec.eigenvalues, coef)
    raw = kmeans(spec.eigenvectors[:, :m], m, seed)
    return FrameClustering(tuple(g.ids), canonical_labels(raw), m,
                           tuple(float(v) for v in spec.eigenvalues))
