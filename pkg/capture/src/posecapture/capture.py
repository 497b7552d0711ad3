"""Capture loop: video source in, one landmark-frame JSON line out per frame.

The wire format is the consumer's contract, reproduced here rather than
imported so this adapter stays decoupled from the processing package:

    {"frame_index": int >= 0, "timestamp_ms": number,
     "landmarks": [{"name": str, "x": num, "y": num, "z": num,
                    "visibility": num}, ...]}

frame_index counts every decoded frame — a frame with no detection still
consumes an index and emits an empty landmark list.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import IO

import cv2


class SourceError(RuntimeError):
    """The video source could not be opened or read."""


@dataclass(frozen=True)
class CaptureConfig:
    source: str = "0"
    max_duration_s: float | None = None


def open_source(source: str) -> cv2.VideoCapture:
    """Open a device index (all-digit string) or a video file path."""
    capture = cv2.VideoCapture(int(source) if source.isdigit() else source)
    if not capture.isOpened():
        raise SourceError(f"cannot open video source {source!r}")
    return capture


def observation_to_dict(obs) -> dict:
    return {"name": obs.name, "x": obs.x, "y": obs.y, "z": obs.z,
            "visibility": obs.visibility}


def run_capture(config: CaptureConfig, backend, out: IO[str]) -> int:
    """Stream the source through the backend, writing JSONL; returns frame count."""
    capture = open_source(config.source)
    fps = capture.get(cv2.CAP_PROP_FPS) or 0.0
    frame_index = 0
    try:
        while True:
            # position is queried before the read so it names the frame
            # about to be decoded, not its successor
            timestamp_ms = capture.get(cv2.CAP_PROP_POS_MSEC)
            ok, frame = capture.read()
            if not ok:
                break
            if timestamp_ms <= 0.0 and frame_index > 0 and fps > 0.0:
                # some decoders report 0 throughout; fall back to the
                # container frame rate
                timestamp_ms = 1000.0 * frame_index / fps
            if (config.max_duration_s is not None
                    and timestamp_ms > 1000.0 * config.max_duration_s):
                break
            landmarks = backend.detect(frame)
            record = {
                "frame_index": frame_index,
                "timestamp_ms": timestamp_ms,
                "landmarks": [observation_to_dict(obs) for obs in landmarks],
            }
            out.write(json.dumps(record, separators=(",", ":")) + "\n")
            frame_index += 1
    finally:
        capture.release()
    return frame_index
