"""Per-object Kalman filtering of bounding boxes.

State layout is ``[x, y, w, h, vx, vy, vw, vh]`` in pixels and pixels/frame,
with a constant-velocity transition over a one-frame step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import FormatError, NumericError

STATE_DIM = 8
OBS_DIM = 4

_F = np.eye(STATE_DIM)
_F[:OBS_DIM, OBS_DIM:] = np.eye(OBS_DIM)
_H = np.hstack([np.eye(OBS_DIM), np.zeros((OBS_DIM, OBS_DIM))])
_I8 = np.eye(STATE_DIM)


@dataclass(frozen=True)
class Detection:
    """One observed box. ``(x, y)`` is the top-left corner in image pixels."""

    frame: int
    id: int
    x: float
    y: float
    w: float
    h: float

    def __post_init__(self):
        if not (self.w > 0 and self.h > 0):
            raise FormatError(
                f"frame {self.frame}, id {self.id}: box size must be positive "
                f"(w={self.w}, h={self.h})"
            )

    @property
    def z(self) -> np.ndarray:
        return np.array([self.x, self.y, self.w, self.h], dtype=np.float64)


@dataclass(frozen=True)
class KalmanConfig:
    meas_noise: float = 10.0
    proc_noise_pos: float = 10.0
    proc_noise_vel: float = 2.0
    init_cov_pos: float = 100.0
    init_cov_vel: float = 25.0

    def __post_init__(self):
        for name in ("meas_noise", "proc_noise_pos", "proc_noise_vel",
                     "init_cov_pos", "init_cov_vel"):
            if not getattr(self, name) > 0:
                raise ValueError(f"KalmanConfig.{name} must be > 0")

    @property
    def Q(self) -> np.ndarray:
        return np.diag([self.proc_noise_pos] * 4 + [self.proc_noise_vel] * 4)

    @property
    def R(self) -> np.ndarray:
        return self.meas_noise * np.eye(OBS_DIM)


@dataclass(frozen=True, eq=False)
class TrackState:
    """Gaussian posterior over the 8-D box state of one object."""

    id: int
    mean: np.ndarray
    cov: np.ndarray
    last_frame: int
    _chol: tuple | None = field(default=None, repr=False, compare=False)

    @property
    def width(self) -> float:
        return float(self.mean[2])

    @property
    def height(self) -> float:
        return float(self.mean[3])

    def cholesky(self):
        """Lower Cholesky factor of ``cov``, cached. Raises NumericError."""
        if self._chol is None:
            try:
                c = cho_factor(self.cov, lower=True, check_finite=True)
            except (np.linalg.LinAlgError, ValueError) as exc:
                raise NumericError(
                    f"track {self.id}: covariance is not positive-definite"
                ) from exc
            object.__setattr__(self, "_chol", c)
        return self._chol


def _symmetrize(P):
    return 0.5 * (P + P.T)


def init_track(det: Detection, cfg: KalmanConfig = KalmanConfig()) -> TrackState:
    mean = np.concatenate([det.z, np.zeros(OBS_DIM)])
    cov = np.diag([cfg.init_cov_pos] * 4 + [cfg.init_cov_vel] * 4)
    return TrackState(det.id, mean, cov, det.frame)


def predict(state: TrackState, frames_elapsed: int = 1,
            cfg: KalmanConfig = KalmanConfig()) -> TrackState:
    """Constant-velocity prediction, one step per elapsed frame."""
    if frames_elapsed < 1:
        raise ValueError("frames_elapsed must be >= 1")
    x = state.mean
    P = state.cov
    Q = cfg.Q
    for _ in range(frames_elapsed):
        x = _F @ x
        P = _symmetrize(_F @ P @ _F.T + Q)
    return TrackState(state.id, x, P, state.last_frame)


def update(state: TrackState, det: Detection,
           cfg: KalmanConfig = KalmanConfig()) -> TrackState:
    """Measurement update in Joseph form."""
    if det.id != state.id:
        raise ValueError(f"detection id {det.id} does not match track {state.id}")
    x, P = state.mean, state.cov
    R = cfg.R
    S = _symmetrize(_H @ P @ _H.T + R)
    try:
        Sc = cho_factor(S, lower=True)
    except np.linalg.LinAlgError as exc:
        raise NumericError(
            f"track {state.id}: innovation covariance is singular at frame {det.frame}"
        ) from exc
    K = cho_solve(Sc, _H @ P).T
    x = x + K @ (det.z - _H @ x)
    A = _I8 - K @ _H
    P = _symmetrize(A @ P @ A.T + K @ R @ K.T)
    return TrackState(state.id, x, P, det.frame)


def step_frame(tracks: dict, dets, cfg: KalmanConfig = KalmanConfig(),
               max_gap: int = 10, frame: int | None = None) -> dict:
    """Advance the track store by one frame of detections.

    Known ids are predicted to the detection frame and updated, new ids
    start fresh tracks, and tracks unseen for more than ``max_gap`` frames
    are dropped. Returns a new ``{id: TrackState}`` mapping.
    """
    dets = list(dets)
    frames = {d.frame for d in dets}
    if len(frames) > 1:
        raise FormatError(f"detections from several frames in one step: {sorted(frames)}")
    if frames:
        (det_frame,) = frames
        if frame is not None and frame != det_frame:
            raise FormatError(f"frame {frame}: detections carry frame {det_frame}")
        frame = det_frame
    seen = set()
    for d in dets:
        if d.id in seen:
            raise FormatError(f"frame {frame}: duplicate id {d.id}")
        seen.add(d.id)

    out = {}
    for d in dets:
        prev = tracks.get(d.id)
        if prev is not None and d.frame <= prev.last_frame:
            raise FormatError(
                f"frame {d.frame}: id {d.id} already updated at frame {prev.last_frame}"
            )
        if prev is None or d.frame - prev.last_frame > max_gap:
            out[d.id] = init_track(d, cfg)
        else:
            out[d.id] = update(predict(prev, d.frame - prev.last_frame, cfg), d, cfg)
    for tid, st in tracks.items():
        if tid in out:
            continue
        if frame is None or frame - st.last_frame <= max_gap:
            out[tid] = st
    return out
