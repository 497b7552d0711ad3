"""Fuzzy pedestrian-intent prototype: trajectory window, extrapolation, states.

A rolling window of (time, pixel position, orientation) samples feeds a
constant-velocity least-squares fit. The fitted velocity, blended with the
latest filtered orientation through triangular membership functions,
yields soft memberships over five motion states. The state set, membership
shapes and anchor point are documented stand-ins; only the window length,
the 2-second horizon and the 50-pixel accuracy radius are fixed by the
problem statement.

Pixel conventions: u grows toward frame right, v toward frame bottom
(so positive dv/dt means the subject is growing toward the bottom of the
frame, i.e. approaching the camera).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

INTENT_LABELS = (
    "CROSSING_LEFT",
    "CROSSING_RIGHT",
    "APPROACHING",
    "RECEDING",
    "STATIONARY",
)

DEFAULT_WINDOW_CAPACITY = 48  # 2 s at the nominal 24 fps
DEFAULT_HORIZON_MS = 2000.0
DEFAULT_ACCURACY_RADIUS_PX = 50.0


@dataclass(frozen=True)
class TrajectorySample:
    timestamp_ms: float
    u: float
    v: float
    orientation_deg: float


class TrajectoryWindow:
    """Fixed-capacity rolling buffer of trajectory samples, oldest evicted first."""

    def __init__(self, capacity: int = DEFAULT_WINDOW_CAPACITY):
        if capacity < 2:
            raise ValueError("window capacity must be at least 2")
        self.capacity = capacity
        self._samples: deque[TrajectorySample] = deque(maxlen=capacity)

    def push(self, sample: TrajectorySample) -> None:
        if self._samples and sample.timestamp_ms <= self._samples[-1].timestamp_ms:
            raise ValueError("timestamps must be strictly increasing within a window")
        self._samples.append(sample)

    @property
    def samples(self) -> tuple[TrajectorySample, ...]:
        return tuple(self._samples)

    def __len__(self) -> int:
        return len(self._samples)


@dataclass(frozen=True)
class IntentState:
    label: str
    memberships: dict[str, float]


@dataclass(frozen=True)
class IntentConfig:
    """Membership-function constants; defaults keep tests deterministic."""

    stationary_full_speed_px_s: float = 5.0
    stationary_zero_speed_px_s: float = 20.0
    velocity_weight: float = 0.7
    orientation_weight: float = 0.3
    horizon_ms: float = DEFAULT_HORIZON_MS


def _fit_constant_velocity(window: TrajectoryWindow):
    """Least-squares line fit of (u, v) against time, relative to the newest sample.

    Returns (u_last_fit, v_last_fit, du_dt, dv_dt) with rates in px/ms.
    """
    samples = window.samples
    if len(samples) < 2:
        raise ValueError("need at least 2 samples to fit a trajectory")
    t_last = samples[-1].timestamp_ms
    ts = [s.timestamp_ms - t_last for s in samples]
    t_mean = sum(ts) / len(ts)
    u_mean = sum(s.u for s in samples) / len(samples)
    v_mean = sum(s.v for s in samples) / len(samples)
    denom = sum((t - t_mean) ** 2 for t in ts)
    du_dt = sum((t - t_mean) * (s.u - u_mean) for t, s in zip(ts, samples)) / denom
    dv_dt = sum((t - t_mean) * (s.v - v_mean) for t, s in zip(ts, samples)) / denom
    return u_mean - du_dt * t_mean, v_mean - dv_dt * t_mean, du_dt, dv_dt


def extrapolate(window: TrajectoryWindow, horizon_ms: float = DEFAULT_HORIZON_MS
                ) -> tuple[float, float]:
    """Predicted pixel position horizon_ms past the newest sample."""
    u0, v0, du_dt, dv_dt = _fit_constant_velocity(window)
    return u0 + du_dt * horizon_ms, v0 + dv_dt * horizon_ms


def _triangle(distance: float, half_width: float) -> float:
    return max(0.0, 1.0 - abs(distance) / half_width)


def _angle_diff(a_deg: float, b_deg: float) -> float:
    d = math.fmod(a_deg - b_deg, 360.0)
    if d > 180.0:
        d -= 360.0
    elif d < -180.0:
        d += 360.0
    return d


# Velocity-angle centers, atan2(dv, du) in degrees: right, down, up on frame.
_VELOCITY_CENTERS = {
    "CROSSING_LEFT": 180.0,
    "CROSSING_RIGHT": 0.0,
    "APPROACHING": 90.0,
    "RECEDING": -90.0,
}

# Orientation-agreement centers on the filtered angle scale, where 90 deg is
# facing the camera and 0 / 180 deg are the two profile views.
_ORIENTATION_CENTERS = {
    "CROSSING_LEFT": 180.0,
    "CROSSING_RIGHT": 0.0,
    "APPROACHING": 90.0,
    "RECEDING": 90.0,
}


def classify(window: TrajectoryWindow, frame_width_px: float = 1920.0,
             config: IntentConfig | None = None) -> IntentState:
    """Soft intent memberships from fitted pixel velocity and latest orientation.

    frame_width_px is accepted for callers that track multiple camera
    geometries; the default membership constants are absolute pixel speeds.
    Ties resolve in label declaration order.
    """
    config = config or IntentConfig()
    _, _, du_dt, dv_dt = _fit_constant_velocity(window)
    du_s, dv_s = du_dt * 1000.0, dv_dt * 1000.0  # px/s
    speed = math.hypot(du_s, dv_s)
    orientation = window.samples[-1].orientation_deg

    if speed <= config.stationary_full_speed_px_s:
        stationary = 1.0
    else:
        span = config.stationary_zero_speed_px_s - config.stationary_full_speed_px_s
        stationary = _triangle(speed - config.stationary_full_speed_px_s, span)
    motion = 1.0 - stationary

    velocity_angle = math.degrees(math.atan2(dv_s, du_s))
    memberships = {"STATIONARY": stationary}
    for label in INTENT_LABELS:
        if label == "STATIONARY":
            continue
        direction = _triangle(_angle_diff(velocity_angle, _VELOCITY_CENTERS[label]), 90.0)
        agreement = _triangle(_angle_diff(orientation, _ORIENTATION_CENTERS[label]), 90.0)
        memberships[label] = motion * (config.velocity_weight * direction
                                       + config.orientation_weight * agreement)

    best = max(INTENT_LABELS, key=lambda lbl: memberships[lbl])
    # max() already keeps the first of equals because INTENT_LABELS fixes order
    return IntentState(best, {lbl: memberships[lbl] for lbl in INTENT_LABELS})


def score_predictions(predicted, actual,
                      radius_px: float = DEFAULT_ACCURACY_RADIUS_PX) -> float:
    """Fraction of predicted points within radius_px of their actual point."""
    predicted = list(predicted)
    actual = list(actual)
    if len(predicted) != len(actual):
        raise ValueError("predicted and actual sequences differ in length")
    if not predicted:
        return 0.0
    hits = sum(
        1 for (pu, pv), (au, av) in zip(predicted, actual)
        if math.hypot(pu - au, pv - av) <= radius_px
    )
    return hits / len(predicted)


@dataclass(frozen=True)
class IntentRecord:
    frame_index: int
    label: str
    memberships: dict[str, float]
    u: float
    v: float
    predicted_u: float
    predicted_v: float


class IntentTracker:
    """Feeds pose results into a trajectory window and emits intent records.

    The anchor point is the midpoint of the two shoulder positions scaled
    into pixels. Frames without a usable shoulder pair leave the window
    untouched; records appear once the window holds two samples.
    """

    def __init__(self, frame_width_px: float = 1920.0,
                 frame_height_px: float = 1080.0,
                 min_visibility: float = 0.5,
                 window_capacity: int = DEFAULT_WINDOW_CAPACITY,
                 config: IntentConfig | None = None):
        self.frame_width_px = frame_width_px
        self.frame_height_px = frame_height_px
        self.min_visibility = min_visibility
        self.config = config or IntentConfig()
        self.window = TrajectoryWindow(window_capacity)

    def observe(self, frame, result) -> IntentRecord | None:
        """frame is a stream.LandmarkFrame, result the matching PoseResult."""
        from .stream import select_shoulders

        pair = select_shoulders(frame, self.min_visibility)
        if pair is None:
            return None
        samples = self.window.samples
        if samples and frame.timestamp_ms <= samples[-1].timestamp_ms:
            # some decoders repeat clock values; a sample that does not
            # advance time adds no trajectory information
            return None
        left, right = pair
        u = 0.5 * (left.x + right.x) * self.frame_width_px
        v = 0.5 * (left.y + right.y) * self.frame_height_px
        self.window.push(TrajectorySample(
            frame.timestamp_ms, u, v, result.orientation_deg))
        if len(self.window) < 2:
            return None
        state = classify(self.window, self.frame_width_px, self.config)
        pu, pv = extrapolate(self.window, self.config.horizon_ms)
        return IntentRecord(frame.frame_index, state.label, state.memberships,
                            u, v, pu, pv)


def record_to_json(record: IntentRecord) -> str:
    import json

    return json.dumps({
        "frame_index": record.frame_index,
        "label": record.label,
        "memberships": record.memberships,
        "u": record.u,
        "v": record.v,
        "predicted_u": record.predicted_u,
        "predicted_v": record.predicted_v,
    })
