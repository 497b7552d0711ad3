"""Landmark-frame data model, JSONL wire format, and the per-frame pipeline loop.

A frame is one timestamped pose observation: a list of named landmarks with
normalized image coordinates and a visibility score. Frames where both
shoulders clear the visibility gate drive the geometry and estimation
modules; frames without a usable pose advance the filter's fallback path
and emit nothing.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from typing import Iterable, Iterator

from . import estimation, geometry
from .geometry import Quaternion, Vec3

LEFT_SHOULDER = "LEFT_SHOULDER"
RIGHT_SHOULDER = "RIGHT_SHOULDER"

# The 33-keypoint topology emitted by the pose model, in index order.
BLAZEPOSE_LANDMARK_NAMES = (
    "NOSE",
    "LEFT_EYE_INNER", "LEFT_EYE", "LEFT_EYE_OUTER",
    "RIGHT_EYE_INNER", "RIGHT_EYE", "RIGHT_EYE_OUTER",
    "LEFT_EAR", "RIGHT_EAR",
    "MOUTH_LEFT", "MOUTH_RIGHT",
    "LEFT_SHOULDER", "RIGHT_SHOULDER",
    "LEFT_ELBOW", "RIGHT_ELBOW",
    "LEFT_WRIST", "RIGHT_WRIST",
    "LEFT_PINKY", "RIGHT_PINKY",
    "LEFT_INDEX", "RIGHT_INDEX",
    "LEFT_THUMB", "RIGHT_THUMB",
    "LEFT_HIP", "RIGHT_HIP",
    "LEFT_KNEE", "RIGHT_KNEE",
    "LEFT_ANKLE", "RIGHT_ANKLE",
    "LEFT_HEEL", "RIGHT_HEEL",
    "LEFT_FOOT_INDEX", "RIGHT_FOOT_INDEX",
)


class FrameParseError(ValueError):
    """Malformed JSONL input; carries the 1-based line number when known."""

    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Landmark:
    name: str
    x: float
    y: float
    z: float
    visibility: float

    def position(self) -> Vec3:
        return Vec3(self.x, self.y, self.z)


@dataclass(frozen=True)
class LandmarkFrame:
    frame_index: int
    timestamp_ms: float
    landmarks: tuple[Landmark, ...]


@dataclass(frozen=True)
class PoseResult:
    frame_index: int
    quaternion: Quaternion
    theta_rad: float
    orientation_deg: float
    latency_us: int


@dataclass(frozen=True)
class PipelineConfig:
    min_visibility: float = 0.5
    measurement_uncertainty: float = estimation.DEFAULT_MEASUREMENT_UNCERTAINTY
    viability_threshold_deg: float = estimation.DEFAULT_VIABILITY_THRESHOLD_DEG
    normalize_angle: bool = False


def _require(obj: dict, key: str, line_number: int | None):
    if key not in obj:
        raise FrameParseError(f"{key} missing", line_number)
    return obj[key]


def _finite_number(value, key: str, line_number: int | None) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise FrameParseError(f"{key} is not a number", line_number)
    value = float(value)
    if not math.isfinite(value):
        raise FrameParseError(f"{key} is not finite", line_number)
    return value


def parse_frame(line: str, line_number: int | None = None) -> LandmarkFrame:
    """Decode one JSONL line into a LandmarkFrame.

    Unknown landmark names are preserved (downstream code ignores them);
    extra fields on any object are ignored. Malformed JSON, missing fields,
    or non-finite numbers raise FrameParseError naming the offending field.
    """
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise FrameParseError(f"invalid JSON ({exc.msg})", line_number) from exc
    if not isinstance(obj, dict):
        raise FrameParseError("frame is not a JSON object", line_number)

    frame_index = _require(obj, "frame_index", line_number)
    if isinstance(frame_index, bool) or not isinstance(frame_index, int):
        raise FrameParseError("frame_index is not an integer", line_number)
    if frame_index < 0:
        raise FrameParseError("frame_index is negative", line_number)
    raw_landmarks = _require(obj, "landmarks", line_number)
    timestamp_ms = _finite_number(
        _require(obj, "timestamp_ms", line_number), "timestamp_ms", line_number)
    if not isinstance(raw_landmarks, list):
        raise FrameParseError("landmarks is not an array", line_number)
    landmarks = []
    for i, raw in enumerate(raw_landmarks):
        if not isinstance(raw, dict):
            raise FrameParseError(f"landmarks[{i}] is not an object", line_number)
        name = _require(raw, "name", line_number)
        if not isinstance(name, str):
            raise FrameParseError(f"landmarks[{i}].name is not a string", line_number)
        landmarks.append(Landmark(
            name=name,
            x=_finite_number(_require(raw, "x", line_number), f"landmarks[{i}].x", line_number),
            y=_finite_number(_require(raw, "y", line_number), f"landmarks[{i}].y", line_number),
            z=_finite_number(_require(raw, "z", line_number), f"landmarks[{i}].z", line_number),
            visibility=_finite_number(
                _require(raw, "visibility", line_number),
                f"landmarks[{i}].visibility", line_number),
        ))
    return LandmarkFrame(frame_index, timestamp_ms, tuple(landmarks))


def select_shoulders(frame: LandmarkFrame,
                     min_visibility: float = 0.5) -> tuple[Vec3, Vec3] | None:
    """Left and right shoulder positions when both clear the visibility gate.

    Multi-person frames list the shoulder pair once per subject in order;
    the pair with the highest mean visibility that clears the gate wins.
    """
    lefts = [lm for lm in frame.landmarks if lm.name == LEFT_SHOULDER]
    rights = [lm for lm in frame.landmarks if lm.name == RIGHT_SHOULDER]
    best: tuple[Vec3, Vec3] | None = None
    best_score = -1.0
    for left, right in zip(lefts, rights):
        if left.visibility < min_visibility or right.visibility < min_visibility:
            continue
        score = 0.5 * (left.visibility + right.visibility)
        if score > best_score:
            best_score = score
            best = (left.position(), right.position())
    return best


def process_stream(frames: Iterable[LandmarkFrame],
                   config: PipelineConfig | None = None) -> Iterator[PoseResult]:
    """Algorithm loop: gate each frame on shoulder presence, emit pose results.

    Filter state persists across the stream; gated-out frames advance the
    filter's non-viable path without emitting.
    """
    config = config or PipelineConfig()
    state = estimation.FilterState(r=config.measurement_uncertainty)
    for frame in frames:
        start = time.perf_counter_ns()
        pair = select_shoulders(frame, config.min_visibility)
        if pair is None:
            state, _ = estimation.kalman_update(state, None, viable=False)
            continue
        rotation = geometry.build_rotation_matrix(*pair)
        quat = geometry.matrix_to_quaternion(rotation)
        state, orientation = estimation.orientation_pipeline_step(
            quat, state,
            viability_threshold_deg=config.viability_threshold_deg,
            normalize=config.normalize_angle,
        )
        theta = estimation.extract_theta(quat)
        latency_us = max(0, (time.perf_counter_ns() - start) // 1000)
        yield PoseResult(frame.frame_index, quat, theta, orientation, int(latency_us))


def _num(value: float) -> str:
    # 17 significant digits round-trips any double.
    return format(float(value), ".17g")


def frame_to_json(frame: LandmarkFrame) -> str:
    landmarks = ",".join(
        '{"name":%s,"x":%s,"y":%s,"z":%s,"visibility":%s}'
        % (json.dumps(lm.name), _num(lm.x), _num(lm.y), _num(lm.z), _num(lm.visibility))
        for lm in frame.landmarks
    )
    return '{"frame_index":%d,"timestamp_ms":%s,"landmarks":[%s]}' % (
        frame.frame_index, _num(frame.timestamp_ms), landmarks)


def result_to_json(result: PoseResult) -> str:
    q = result.quaternion
    return (
        '{"frame_index":%d,"quaternion":{"a":%s,"b":%s,"c":%s,"d":%s},'
        '"theta_rad":%s,"orientation_deg":%s,"latency_us":%d}'
        % (result.frame_index, _num(q.a), _num(q.b), _num(q.c), _num(q.d),
           _num(result.theta_rad), _num(result.orientation_deg), result.latency_us)
    )
