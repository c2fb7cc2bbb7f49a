"""Line-oriented file formats.

Detections: ``frame,id,x,y,w,h`` per line. A line holding only a frame number
declares a frame without detections.
Ground truth: ``frame,id,group`` per line.
Output: one JSON object per frame.

Blank lines and lines starting with ``#`` are ignored, as is a header line
whose first field is ``frame``.
"""

from __future__ import annotations

import json

from .errors import FormatError
from .tracking import Detection

DETECTION_FIELDS = ("frame", "id", "x", "y", "w", "h")
TRUTH_FIELDS = ("frame", "id", "group")


def _records(lines):
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if parts[0] == "frame":
            continue
        yield lineno, parts


def _int(text, lineno, what):
    try:
        return int(text)
    except ValueError:
        raise FormatError(f"line {lineno}: {what} must be an integer, got {text!r}") from None


def _float(text, lineno, what):
    try:
        return float(text)
    except ValueError:
        raise FormatError(f"line {lineno}: {what} must be numeric, got {text!r}") from None


def read_detections(lines):
    """Yield ``(frame, [Detection, ...])`` in file order, one item per frame.

    Frames must appear in strictly increasing order with each frame's
    records contiguous.
    """
    current = None
    batch: list = []
    for lineno, parts in _records(lines):
        if len(parts) not in (1, len(DETECTION_FIELDS)):
            raise FormatError(
                f"line {lineno}: expected {len(DETECTION_FIELDS)} fields "
                f"({','.join(DETECTION_FIELDS)}), got {len(parts)}"
            )
        frame = _int(parts[0], lineno, "frame")
        if current is not None and frame < current:
            raise FormatError(f"line {lineno}: frame {frame} after frame {current}")
        if current is not None and frame != current:
            yield current, batch
            batch = []
        elif current is not None and frame == current and len(parts) == 1:
            raise FormatError(f"line {lineno}: frame {frame} declared twice")
        current = frame
        if len(parts) == 1:
            continue
        tid = _int(parts[1], lineno, "id")
        x, y, w, h = (_float(p, lineno, name) for p, name in zip(parts[2:], "xywh"))
        try:
            batch.append(Detection(frame, tid, x, y, w, h))
        except FormatError as exc:
            raise FormatError(f"line {lineno}: {exc}") from None
    if current is not None:
        yield current, batch


def read_ground_truth(lines) -> dict:
    """Return ``{frame: {id: group}}``."""
    truth: dict = {}
    for lineno, parts in _records(lines):
        if len(parts) != len(TRUTH_FIELDS):
            raise FormatError(
                f"line {lineno}: expected {len(TRUTH_FIELDS)} fields "
                f"({','.join(TRUTH_FIELDS)}), got {len(parts)}"
            )
        frame = _int(parts[0], lineno, "frame")
        tid = _int(parts[1], lineno, "id")
        group = _int(parts[2], lineno, "group")
        per = truth.setdefault(frame, {})
        if tid in per:
            raise FormatError(f"line {lineno}: frame {frame}: duplicate id {tid}")
        per[tid] = group
    return truth


def format_detection(d: Detection) -> str:
    return f"{d.frame},{d.id},{d.x!r},{d.y!r},{d.w!r},{d.h!r}"


def write_detections(frames, out) -> None:
    out.write(",".join(DETECTION_FIELDS) + "\n")
    for frame, dets in frames:
        if not dets:
            out.write(f"{frame}\n")
        for d in dets:
            out.write(format_detection(d) + "\n")


def write_ground_truth(truth, out) -> None:
    """``truth`` is an iterable of ``(frame, {id: group})``."""
    out.write(",".join(TRUTH_FIELDS) + "\n")
    for frame, per in truth:
        for tid in sorted(per):
            out.write(f"{frame},{tid},{per[tid]}\n")


def frame_record(result) -> dict:
    c = result.clustering
    return {
        "frame": result.frame,
        "ids": list(c.ids),
        "labels": list(c.labels),
        "m": c.m,
        "event": result.event.active,
        "groups": [{"label": lab, "members": list(members)}
                   for lab, members in result.event.groups],
    }


def format_frame(result) -> str:
    return json.dumps(frame_record(result), separators=(",", ":"))
