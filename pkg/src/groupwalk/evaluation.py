"""Clustering agreement scores: contingency tables and adjusted mutual information.

AMI uses the ``max(H(u), H(v))`` normalizer and the exact expected mutual
information under the hypergeometric (fixed-marginals permutation) model.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import log

import numpy as np

from . import kernels


@dataclass(frozen=True, eq=False)
class Contingency:
    table: np.ndarray  # table[i, j] = #items with u-label i and v-label j
    u_labels: tuple
    v_labels: tuple

    @property
    def n(self) -> int:
        return int(self.table.sum())

    @property
    def a(self) -> np.ndarray:
        return self.table.sum(axis=1)

    @property
    def b(self) -> np.ndarray:
        return self.table.sum(axis=0)


def _check_pair(u, v):
    u = list(u)
    v = list(v)
    if len(u) != len(v):
        raise ValueError(f"partitions differ in length ({len(u)} vs {len(v)})")
    if not u:
        raise ValueError("partitions must contain at least one item")
    return u, v


def contingency(u, v) -> Contingency:
    u, v = _check_pair(u, v)
    ul = tuple(sorted(set(u)))
    vl = tuple(sorted(set(v)))
    ui = {lab: i for i, lab in enumerate(ul)}
    vi = {lab: j for j, lab in enumerate(vl)}
    table = np.zeros((len(ul), len(vl)), dtype=np.int64)
    for x, y in zip(u, v):
        table[ui[x], vi[y]] += 1
    return Contingency(table, ul, vl)


def entropy(counts, base: float | None = None) -> float:
    counts = np.asarray(counts, dtype=np.float64)
    n = counts.sum()
    p = counts[counts > 0] / n
    h = float(-np.sum(p * np.log(p)))
    return h / log(base) if base else h


def mutual_info(table, base: float | None = None) -> float:
    table = np.asarray(table, dtype=np.float64)
    n = table.sum()
    a = table.sum(axis=1)
    b = table.sum(axis=0)
    mi = 0.0
    for i, j in zip(*np.nonzero(table)):
        nij = table[i, j]
        mi += nij / n * log(n * nij / (a[i] * b[j]))
    return mi / log(base) if base else mi


def expected_mutual_info(a, b, base: float | None = None) -> float:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    emi = kernels.expected_mutual_info(a, b, int(a.sum()))
    return emi / log(base) if base else emi


def same_partition(u, v) -> bool:
    u, v = _check_pair(u, v)
    fwd: dict = {}
    bwd: dict = {}
    for x, y in zip(u, v):
        if fwd.setdefault(x, y) != y or bwd.setdefault(y, x) != x:
            return False
    return True


def ami_from_parts(mi: float, emi: float, hu: float, hv: float, identical: bool) -> float:
    denom = max(hu, hv) - emi
    if identical:
        return 1.0
    if abs(denom) < 1e-12:
        return 0.0
    return (mi - emi) / denom


def ami(u, v, base: float | None = None) -> float:
    """Adjusted mutual information between two labelings of the same items.

    Identical partitions (up to relabeling) score exactly 1.0. When both
    partitions are trivial and differ, the score is 0.0. Values can be
    slightly negative for partitions that agree less than chance.
    """
    c = contingency(u, v)
    return ami_from_parts(
        mutual_info(c.table, base),
        expected_mutual_info(c.a, c.b, base),
        entropy(c.a, base),
        entropy(c.b, base),
        same_partition(u, v),
    )


def sequence_score(per_frame) -> float:
    """Mean AMI over a sequence of ``(z, g)`` label pairs."""
    scores = [ami(z, g) for z, g in per_frame]
    if not scores:
        raise ValueError("sequence_score needs at least one frame")
    return float(np.mean(scores))
