"""Group-walking event: at least one cluster with three or more members."""

from __future__ import annotations

from dataclasses import dataclass

from .spectral import FrameClustering

MIN_GROUP_SIZE = 3


@dataclass(frozen=True)
class GroupEvent:
    frame: int
    active: bool
    groups: tuple  # ((label, (id, ...)), ...) for clusters of size >= 3


def group_members(ids, labels, min_size: int = MIN_GROUP_SIZE) -> tuple:
    clusters: dict = {}
    for tid, lab in sorted(zip(ids, labels)):
        clusters.setdefault(lab, []).append(tid)
    return tuple((lab, tuple(members)) for lab, members in sorted(clusters.items())
                 if len(members) >= min_size)


def detect_group_event(c: FrameClustering, frame: int = -1) -> GroupEvent:
    groups = group_members(c.ids, c.labels)
    return GroupEvent(frame, bool(groups), groups)
