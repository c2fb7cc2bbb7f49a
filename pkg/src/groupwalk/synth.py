"""Synthetic pedestrian scenarios with known group membership.

Groups walk in formation with a shared velocity; singletons walk alone.
A group can split part-way through into sub-groups with new velocities.
Ground truth gives one cluster label per object per frame.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .tracking import Detection

FORMATION_COLUMNS = 3


@dataclass(frozen=True)
class GroupSpec:
    size: int
    spawn: tuple
    velocity: tuple
    spacing: float = 40.0


@dataclass(frozen=True)
class SingletonSpec:
    spawn: tuple
    velocity: tuple


@dataclass(frozen=True)
class SplitSpec:
    """From ``frame`` on, ``group`` breaks into ``parts``.

    ``parts`` is a sequence of ``(member_indices, velocity)``; member indices
    are positions within the group, and together they must cover it.
    """

    frame: int
    group: int
    parts: tuple


@dataclass(frozen=True)
class ScenarioSpec:
    groups: tuple = ()
    singletons: tuple = ()
    frames: int = 100
    obs_noise: float = 0.0
    size_base: float = 40.0
    depth_scale: float | None = None  # per-frame growth factor of size and speed
    split_at: SplitSpec | None = None
    seed: int = 0

    def __post_init__(self):
        if self.frames < 1:
            raise ValueError("frames must be >= 1")
        if self.obs_noise < 0:
            raise ValueError("obs_noise must be >= 0")
        if not self.size_base > 0:
            raise ValueError("size_base must be > 0")
        if self.depth_scale is not None and not self.depth_scale > 0:
            raise ValueError("depth_scale must be > 0")
        if not self.groups and not self.singletons:
            raise ValueError("scenario has no objects")
        for g in self.groups:
            if g.size < 1:
                raise ValueError("group size must be >= 1")
        if self.split_at is not None:
            s = self.split_at
            if not 0 <= s.group < len(self.groups):
                raise ValueError(f"split refers to unknown group {s.group}")
            members = sorted(i for idx, _ in s.parts for i in idx)
            if members != list(range(self.groups[s.group].size)):
                raise ValueError("split parts must cover the group's members exactly once")


@dataclass
class Scenario:
    detections: list = field(default_factory=list)   # per frame: [Detection, ...]
    ground_truth: list = field(default_factory=list)  # per frame: {id: label}

    def frames(self):
        for f, dets in enumerate(self.detections):
            yield f, dets

    def truth(self) -> dict:
        return dict(enumerate(self.ground_truth))


def generate(spec: ScenarioSpec) -> Scenario:
    rng = np.random.default_rng(spec.seed)

    # Object table: id, start position, velocity, ground-truth label.
    pos, vel, label, ids = [], [], [], []
    member_of = {}
    next_id = 1
    for gi, g in enumerate(spec.groups):
        for k in range(g.size):
            col, row = k % FORMATION_COLUMNS, k // FORMATION_COLUMNS
            pos.append((g.spawn[0] + col * g.spacing, g.spawn[1] + row * g.spacing))
            vel.append(tuple(g.velocity))
            label.append(gi + 1)
            member_of[(gi, k)] = len(ids)
            ids.append(next_id)
            next_id += 1
    for si, s in enumerate(spec.singletons):
        pos.append(tuple(s.spawn))
        vel.append(tuple(s.velocity))
        label.append(len(spec.groups) + si + 1)
        ids.append(next_id)
        next_id += 1

    pos = np.array(pos, dtype=np.float64)
    vel = np.array(vel, dtype=np.float64)
    label = np.array(label)
    post_vel = vel.copy()
    post_label = label.copy()
    if spec.split_at is not None:
        s = spec.split_at
        fresh = int(label.max()) + 1
        for pi, (members, v) in enumerate(s.parts):
            for k in members:
                row = member_of[(s.group, k)]
                post_vel[row] = v
                post_label[row] = label[row] if pi == 0 else fresh
            if pi > 0:
                fresh += 1

    n = len(ids)
    wh_sigma = 0.1 * spec.obs_noise
    out = Scenario()
    for f in range(spec.frames):
        scale = spec.depth_scale ** f if spec.depth_scale is not None else 1.0
        split = spec.split_at is not None and f >= spec.split_at.frame
        v = post_vel if split else vel
        if f > 0:
            pos = pos + v * scale
        w = spec.size_base * scale
        h = 2.0 * spec.size_base * scale
        noise = rng.normal(0.0, 1.0, size=(n, 4))
        dets = []
        for i in range(n):
            dx, dy, dw, dh = noise[i]
            dets.append(Detection(
                f, ids[i],
                float(pos[i, 0] + spec.obs_noise * dx),
                float(pos[i, 1] + spec.obs_noise * dy),
                float(max(w + wh_sigma * dw, 1e-3)),
                float(max(h + wh_sigma * dh, 1e-3)),
            ))
        out.detections.append(dets)
        lab = post_label if split else label
        out.ground_truth.append({ids[i]: int(lab[i]) for i in range(n)})
    return out


def three_groups(seed: int = 0, frames: int = 100, obs_noise: float = 0.0) -> ScenarioSpec:
    """A walking 3-group, a 2-group and a lone pedestrian, well apart."""
    return ScenarioSpec(
        groups=(
            GroupSpec(3, (100.0, 100.0), (3.0, 0.0)),
            GroupSpec(2, (100.0, 500.0), (-2.0, 1.0)),
        ),
        singletons=(SingletonSpec((600.0, 300.0), (0.0, -3.0)),),
        frames=frames,
        obs_noise=obs_noise,
        seed=seed,
    )


def p5_split(seed: int = 0, frames: int = 200, obs_noise: float = 1.0,
             split_frame: int = 60) -> ScenarioSpec:
    """Six people walk together, then split into one, two and three."""
    return ScenarioSpec(
        groups=(GroupSpec(6, (200.0, 300.0), (2.0, 0.0)),),
        frames=frames,
        obs_noise=obs_noise,
        split_at=SplitSpec(split_frame, 0, (
            ((0, 1, 2), (2.0, -3.0)),
            ((3, 4), (1.0, 3.0)),
            ((5,), (5.0, 1.0)),
        )),
        seed=seed,
    )


def arena(seed: int = 0, frames: int = 150, obs_noise: float = 1.0,
          split_frame: int = 70) -> ScenarioSpec:
    """A 3-group among lone walkers that later breaks into three individuals."""
    return ScenarioSpec(
        groups=(GroupSpec(3, (150.0, 250.0), (2.5, 0.5)),),
        singletons=(
            SingletonSpec((700.0, 100.0), (-2.0, 1.0)),
            SingletonSpec((100.0, 600.0), (1.0, -2.5)),
        ),
        frames=frames,
        obs_noise=obs_noise,
        depth_scale=1.002,
        split_at=SplitSpec(split_frame, 0, (
            ((0,), (2.5, -3.0)),
            ((1,), (3.0, 3.0)),
            ((2,), (-2.5, 0.5)),
        )),
        seed=seed,
    )


def spec_from_dict(d: dict) -> ScenarioSpec:
    """Build a ScenarioSpec from plain JSON-style data."""
    d = dict(d)
    groups = tuple(GroupSpec(g["size"], tuple(g["spawn"]), tuple(g["velocity"]),
                             g.get("spacing", 40.0)) for g in d.pop("groups", ()))
    singles = tuple(SingletonSpec(tuple(s["spawn"]), tuple(s["velocity"]))
                    for s in d.pop("singletons", ()))
    split = d.pop("split_at", None)
    if split is not None:
        split = SplitSpec(split["frame"], split["group"],
                          tuple((tuple(p["members"]), tuple(p["velocity"]))
                                for p in split["parts"]))
    return ScenarioSpec(groups=groups, singletons=singles, split_at=split, **d)


PRESETS = {"three-groups": three_groups, "p5-split": p5_split, "arena": arena}
