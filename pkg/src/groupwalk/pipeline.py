"""Online engine: detections in, per-frame clusterings and group events out."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import AlignmentError, FormatError
from .evaluation import ami
from .events import GroupEvent, detect_group_event, group_members
from .similarity import SimilarityParams, divergence_matrix, graph_from_divergences
from .spectral import EIGENGAP_COEF, FrameClustering, spectral_cluster
from .tracking import KalmanConfig, step_frame

DEFAULT_A_GRID = (2.0, 4.0, 6.0, 8.0, 10.0)
# One value of b per decade.
DEFAULT_B_GRID = (10.0, 100.0, 1000.0)


@dataclass(frozen=True)
class RunConfig:
    params: SimilarityParams = field(default_factory=SimilarityParams)
    kalman: KalmanConfig = field(default_factory=KalmanConfig)
    eigengap_coef: float = EIGENGAP_COEF
    seed: int = 0
    max_gap: int = 10
    burn_in: int = 15

    def __post_init__(self):
        if not self.eigengap_coef > 0:
            raise ValueError("eigengap_coef must be > 0")
        if self.max_gap < 0:
            raise ValueError("max_gap must be >= 0")
        if self.burn_in < 0:
            raise ValueError("burn_in must be >= 0")


@dataclass(frozen=True)
class FrameResult:
    frame: int
    clustering: FrameClustering
    event: GroupEvent


@dataclass(frozen=True, eq=False)
class FrameDivergences:
    """Parameter-free per-frame quantities; similarity weights derive from these."""

    frame: int
    ids: tuple
    D: np.ndarray
    roots: np.ndarray


class Engine:
    """Stateful frame-by-frame processor. Feed frames in increasing order."""

    def __init__(self, config: RunConfig = RunConfig()):
        self.config = config
        self.tracks: dict = {}
        self.last_frame: int | None = None

    def divergences(self, frame: int, dets) -> FrameDivergences:
        if self.last_frame is not None and frame <= self.last_frame:
            raise FormatError(f"frame {frame} does not follow frame {self.last_frame}")
        cfg = self.config
        dets = list(dets)
        self.tracks = step_frame(self.tracks, dets, cfg.kalman, cfg.max_gap, frame=frame)
        self.last_frame = frame
        current = [self.tracks[d.id] for d in dets]
        if not current:
            return FrameDivergences(frame, (), np.zeros((0, 0)), np.zeros(0))
        ids, D, roots = divergence_matrix(current)
        return FrameDivergences(frame, ids, D, roots)

    def process(self, frame: int, dets) -> FrameResult:
        return cluster_frame(self.divergences(frame, dets), self.config)


def cluster_frame(fd: FrameDivergences, config: RunConfig) -> FrameResult:
    if not fd.ids:
        c = FrameClustering((), (), 0, ())
    else:
        g = graph_from_divergences(fd.ids, fd.D, fd.roots, config.params)
        c = spectral_cluster(g, config.eigengap_coef, config.seed)
    return FrameResult(fd.frame, c, detect_group_event(c, fd.frame))


def run(frames, config: RunConfig = RunConfig()):
    """Yield a FrameResult for each ``(frame, detections)`` item, online."""
    engine = Engine(config)
    for frame, dets in frames:
        yield engine.process(frame, dets)


def frame_divergences(frames, config: RunConfig = RunConfig()) -> list:
    engine = Engine(config)
    return [engine.divergences(frame, dets) for frame, dets in frames]


@dataclass
class EvalReport:
    mean_ami: float
    per_frame: list  # [(frame, ami), ...] over scored, non-empty frames
    precision: float
    recall: float
    scored_frames: int
    config: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "mean_ami": self.mean_ami,
            "precision": self.precision,
            "recall": self.recall,
            "scored_frames": self.scored_frames,
            "per_frame": [{"frame": f, "ami": s} for f, s in self.per_frame],
            **({"config": self.config} if self.config else {}),
        }


def score_results(results, truth: dict, burn_in: int = 0) -> EvalReport:
    """Compare pipeline output with ground truth ``{frame: {id: group}}``.

    Frames earlier than ``first frame + burn_in`` are not scored. Frames with
    no objects count toward event scores only.
    """
    results = list(results)
    out_frames = [r.frame for r in results]
    missing = sorted(set(truth) - set(out_frames))
    if missing:
        raise AlignmentError(f"ground truth has frames without detections: {missing[:5]}")
    if not results:
        raise AlignmentError("no frames to score")
    start = results[0].frame + burn_in
    per_frame = []
    tp = fp = fn = 0
    for r in results:
        gt = truth.get(r.frame, {})
        if set(gt) != set(r.clustering.ids):
            raise AlignmentError(
                f"frame {r.frame}: detection ids {sorted(r.clustering.ids)} "
                f"!= ground-truth ids {sorted(gt)}"
            )
        if r.frame < start:
            continue
        ids = r.clustering.ids
        g = [gt[i] for i in ids]
        truth_active = bool(group_members(ids, g))
        if r.event.active and truth_active:
            tp += 1
        elif r.event.active:
            fp += 1
        elif truth_active:
            fn += 1
        if ids:
            per_frame.append((r.frame, ami(r.clustering.labels, g)))
    if not per_frame:
        raise AlignmentError("no non-empty frames left to score after burn-in")
    precision = tp / (tp + fp) if tp + fp else 1.0
    recall = tp / (tp + fn) if tp + fn else 1.0
    mean = float(np.mean([s for _, s in per_frame]))
    return EvalReport(mean, per_frame, precision, recall, len(per_frame))


def _config_summary(config: RunConfig) -> dict:
    return {"a": config.params.a, "b": config.params.b,
            "eigengap_coef": config.eigengap_coef, "seed": config.seed,
            "burn_in": config.burn_in, "max_gap": config.max_gap}


def evaluate(frames, truth: dict, config: RunConfig = RunConfig()) -> EvalReport:
    report = score_results(run(frames, config), truth, config.burn_in)
    report.config = _config_summary(config)
    return report


def _sweep_cell(args):
    fds, truth, config = args
    report = score_results((cluster_frame(fd, config) for fd in fds), truth, config.burn_in)
    report.config = _config_summary(config)
    return report


def sweep(frames, truth: dict, a_grid=DEFAULT_A_GRID, b_grid=DEFAULT_B_GRID,
          config: RunConfig = RunConfig(), jobs: int = 1) -> list:
    """One EvalReport per (a, b), in row-major (a outer, b inner) order.

    Tracking and divergences do not depend on (a, b) and are computed once.
    """
    fds = frame_divergences(frames, config)
    cells = [(fds, truth, replace(config, params=SimilarityParams(a, b)))
             for a in a_grid for b in b_grid]
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_cell, cells))
    return [_sweep_cell(c) for c in cells]
