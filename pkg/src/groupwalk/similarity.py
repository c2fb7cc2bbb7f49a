"""Motion-pattern similarity between track posteriors.

Two tracks are compared through the symmetrized KL divergence of their
Gaussian posteriors, turned into a weight in (0, 1] by an exponential whose
scale grows with the apparent box size.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import exp, sqrt

import numpy as np
from scipy.linalg import cho_solve

from .errors import NumericError
from .tracking import TrackState


@dataclass(frozen=True)
class SimilarityParams:
    a: float = 8.0
    b: float = 10.0

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError(f"a and b must be positive (a={self.a}, b={self.b})")


@dataclass(frozen=True, eq=False)
class SimilarityGraph:
    """Dense weighted adjacency over the tracks of one frame, ids ascending."""

    ids: tuple
    W: np.ndarray

    @property
    def n(self) -> int:
        return len(self.ids)


def _logdet(chol) -> float:
    return 2.0 * float(np.sum(np.log(np.diag(chol[0]))))


def gaussian_kl(p: TrackState, q: TrackState) -> float:
    """KL(p || q) between two Gaussian track posteriors, in nats."""
    cp = p.cholesky()
    cq = q.cholesky()
    k = p.mean.shape[0]
    delta = q.mean - p.mean
    trace = float(np.trace(cho_solve(cq, p.cov)))
    maha = float(delta @ cho_solve(cq, delta))
    kl = 0.5 * (trace + maha - k + _logdet(cq) - _logdet(cp))
    if not np.isfinite(kl):
        raise NumericError(f"KL between tracks {p.id} and {q.id} is not finite")
    return max(kl, 0.0)


def symmetric_kl(p: TrackState, q: TrackState) -> float:
    return 0.5 * (gaussian_kl(p, q) + gaussian_kl(q, p))


def root_area(t: TrackState) -> float:
    """sqrt(w * h) of the filtered box size."""
    w, h = t.width, t.height
    if not (w > 0 and h > 0):
        raise NumericError(
            f"track {t.id}: filtered box size is not positive (w={w:.6g}, h={h:.6g})"
        )
    return sqrt(w * h)


def scale_value(a: float, b: float, root_area_i: float, root_area_j: float) -> float:
    return a * (root_area_i + root_area_j) / 2.0 + b


def similarity_value(d: float, k: float) -> float:
    return exp(-d / k)


def scale_factor(p: TrackState, q: TrackState, params: SimilarityParams) -> float:
    return scale_value(params.a, params.b, root_area(p), root_area(q))


def similarity(p: TrackState, q: TrackState, params: SimilarityParams) -> float:
    return similarity_value(symmetric_kl(p, q), scale_factor(p, q, params))


def divergence_matrix(tracks) -> tuple:
    """Pairwise symmetric KL for a frame.

    Returns ``(ids, D, roots)`` with ids ascending, ``D`` the symmetric
    divergence matrix (zero diagonal) and ``roots`` the per-track sqrt(w*h).
    These do not depend on the similarity parameters.
    """
    ordered = sorted(tracks, key=lambda t: t.id)
    ids = tuple(t.id for t in ordered)
    if len(set(ids)) != len(ids):
        raise ValueError(f"duplicate track ids in graph: {ids}")
    n = len(ordered)
    D = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            D[i, j] = D[j, i] = symmetric_kl(ordered[i], ordered[j])
    roots = np.array([root_area(t) for t in ordered])
    return ids, D, roots


def graph_from_divergences(ids, D, roots, params: SimilarityParams) -> SimilarityGraph:
    n = len(ids)
    W = np.ones((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            k = scale_value(params.a, params.b, roots[i], roots[j])
            W[i, j] = W[j, i] = similarity_value(D[i, j], k)
    return SimilarityGraph(tuple(ids), W)


def build_graph(tracks, params: SimilarityParams = SimilarityParams()) -> SimilarityGraph:
    tracks = list(tracks)
    if not tracks:
        raise ValueError("build_graph needs at least one track")
    return graph_from_divergences(*divergence_matrix(tracks), params)


__all__ = [
    "SimilarityParams", "SimilarityGraph", "gaussian_kl", "symmetric_kl",
    "scale_factor", "similarity", "build_graph", "divergence_matrix",
    "graph_from_divergences", "root_area", "scale_value", "similarity_value",
]
