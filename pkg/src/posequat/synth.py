"""Synthetic shoulder-landmark streams with known yaw, for accuracy checks.

The subject is an erect figure turning about the vertical (y) axis, so the
shoulder axis stays horizontal (zero y component). Yaw is the facing angle
the calibrated pipeline is designed to report, in [0, 180] degrees: the
degree calibration was fit empirically to one camera geometry, and this
generator defines the synthetic camera as the geometry under which that
calibration is exact. For a horizontal shoulder axis the
recovered half-angle depends only on the axis' depth component, and
solving half_angle = 45 + yaw/4 degrees (the inverse of the calibration)
gives

    dz = 1 - 2 * sin(yaw / 2),   dx = +sqrt(1 - dz^2),   dy = 0.

dz is derived here analytically, independent of the pipeline code, so a
bug anywhere in the frame construction, quaternion extraction or angle
transform breaks the generated-vs-recovered agreement. A 0 -> 180 sweep
moves dz monotonically from +1 to -1 (edge-on toward the camera, through
broadside at yaw 60, to edge-on away).

Noise draws are keyed on (seed, frame_index), so generation is
deterministic and each frame's jitter is independent of stream order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .geometry import Vec3
from .stream import LEFT_SHOULDER, RIGHT_SHOULDER, Landmark, LandmarkFrame


def constant_yaw(deg: float) -> Callable[[float], float]:
    return lambda t: deg


def linear_yaw_sweep(start_deg: float, end_deg: float,
                     duration_s: float) -> Callable[[float], float]:
    """Yaw profile sweeping linearly from start to end over the duration."""
    def profile(t: float) -> float:
        frac = min(max(t / duration_s, 0.0), 1.0)
        return start_deg + (end_deg - start_deg) * frac
    return profile


@dataclass
class SubjectModel:
    shoulder_half_width: float = 0.2
    center: Callable[[float], Vec3] = field(
        default=lambda t: Vec3(0.5, 0.5, 0.0))
    yaw_profile: Callable[[float], float] = field(default=constant_yaw(0.0))
    noise_sigma: float = 0.0

    def __post_init__(self):
        if self.shoulder_half_width <= 0.0:
            raise ValueError("shoulder_half_width must be positive")


def shoulder_direction(yaw_deg: float) -> Vec3:
    """Unit shoulder-axis direction for a facing angle in [0, 180] degrees.

    Horizontal by construction; the depth component inverts the degree
    calibration so the noiseless pipeline reports exactly yaw_deg.
    """
    if not 0.0 <= yaw_deg <= 180.0:
        raise ValueError("yaw must lie in [0, 180] degrees")
    dz = 1.0 - 2.0 * math.sin(math.radians(yaw_deg) / 2.0)
    dx = math.sqrt(max(0.0, 1.0 - dz * dz))
    return Vec3(dx, 0.0, dz)


def frame_count(fps: float, duration_s: float) -> int:
    return int(round(fps * duration_s))


def generate(subject: SubjectModel, fps: float, duration_s: float,
             seed: int) -> list[LandmarkFrame]:
    """Schema-valid shoulder frames for the subject, deterministic per seed."""
    if fps <= 0.0 or duration_s <= 0.0:
        raise ValueError("fps and duration_s must be positive")
    frames = []
    for i in range(frame_count(fps, duration_s)):
        t = i / fps
        center = subject.center(t)
        offset = shoulder_direction(subject.yaw_profile(t)).scaled(
            subject.shoulder_half_width)
        left = center + offset
        right = center - offset
        if subject.noise_sigma > 0.0:
            rng = np.random.default_rng([seed, i])
            n = rng.normal(0.0, subject.noise_sigma, 6)
            left = left + Vec3(n[0], n[1], n[2])
            right = right + Vec3(n[3], n[4], n[5])
        frames.append(LandmarkFrame(
            frame_index=i,
            timestamp_ms=1000.0 * i / fps,
            landmarks=(
                Landmark(LEFT_SHOULDER, left.x, left.y, left.z, 1.0),
                Landmark(RIGHT_SHOULDER, right.x, right.y, right.z, 1.0),
            ),
        ))
    return frames


def true_yaws(subject: SubjectModel, fps: float, duration_s: float) -> list[float]:
    """Ground-truth yaw per frame index, for the scoring sidecar."""
    if fps <= 0.0 or duration_s <= 0.0:
        raise ValueError("fps and duration_s must be positive")
    return [subject.yaw_profile(i / fps)
            for i in range(frame_count(fps, duration_s))]
