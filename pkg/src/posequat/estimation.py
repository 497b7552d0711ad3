"""Quaternion half-angle to orientation degrees, smoothed by a scalar Kalman filter.

The orientation measurement is the arccos of the quaternion scalar part
(the half-angle of the encoded rotation), pushed through a fixed affine
calibration into degrees. A one-dimensional Kalman filter with no process
noise smooths the stream, using the mean of a short window of recent raw
readings as the prediction; measurements that jump too far from that mean
are rejected and substituted by the mean itself. Rejected readings still
enter the window, so a burst of bad readings cannot lock the gate shut
against a genuinely changed orientation: within one window length the mean
re-centres on the new readings and the gate reopens.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .geometry import Quaternion

DEFAULT_MEASUREMENT_UNCERTAINTY = 0.5
DEFAULT_VIABILITY_THRESHOLD_DEG = 60.0
WINDOW_CAPACITY = 10


def extract_theta(q: Quaternion) -> float:
    """Rotation half-angle in radians, in [0, pi].

    The cosine argument is clamped so floating-point drift can never
    produce NaN. Raises ValueError on a zero-norm quaternion.
    """
    n = q.norm()
    if n < 1e-12:
        raise ValueError("cannot extract an angle from a zero-norm quaternion")
    return math.acos(max(-1.0, min(1.0, q.a / n)))


def theta_to_orientation(theta: float) -> float:
    """Affine calibration from half-angle radians to orientation degrees.

    Equivalent to 4 * degrees(theta) - 180; maps 0 -> -180 and pi/2 -> 180.
    No wrapping is applied; see normalize_orientation.
    """
    return theta * (180.0 ** 2 / math.pi) / 45.0 - 180.0


def normalize_orientation(deg: float) -> float:
    """Wrap an orientation angle into (-180, 180]."""
    wrapped = math.fmod(deg, 360.0)
    if wrapped > 180.0:
        wrapped -= 360.0
    elif wrapped <= -180.0:
        wrapped += 360.0
    return wrapped


@dataclass(frozen=True)
class FilterState:
    """Scalar Kalman state plus the window of recent raw readings.

    x is None until the first viable measurement arrives; it is then seeded
    directly from that measurement.
    """

    x: float | None = None
    p: float = 1.0
    r: float = DEFAULT_MEASUREMENT_UNCERTAINTY
    window: tuple[float, ...] = ()

    def window_mean(self) -> float | None:
        if not self.window:
            return None
        return sum(self.window) / len(self.window)


def is_viable(state: FilterState, z: float,
              threshold_deg: float = DEFAULT_VIABILITY_THRESHOLD_DEG) -> bool:
    """A reading is viable unless it strays too far from the recent window mean."""
    mean = state.window_mean()
    return mean is None or abs(z - mean) <= threshold_deg


def kalman_update(state: FilterState, z: float | None,
                  viable: bool) -> tuple[FilterState, float | None]:
    """One filter step; returns the new state and its estimate.

    The prediction is the mean of the window of recent raw readings (falling
    back to the previous estimate while the window is empty). Viable
    readings run the standard gain/state/covariance update against that
    prediction; non-viable readings are substituted by the prediction
    itself, which leaves the estimate at the window mean while the
    covariance still contracts. Every reading enters the window, viable or
    not. With an empty window and no reading the state is returned
    unchanged.
    """
    if viable and z is None:
        raise ValueError("a viable update requires a measurement")

    prediction = state.window_mean()
    if prediction is None:
        prediction = state.x

    if prediction is None:
        if not viable or z is None:
            return state, state.x
        # First reading ever: seed the estimate directly, covariance untouched.
        seeded = replace(state, x=z, window=(z,))
        return seeded, z

    measurement = z if viable else prediction
    k = state.p / (state.p + state.r)
    x = prediction + k * (measurement - prediction)
    p = (1.0 - k) * state.p
    window = state.window
    if z is not None:
        window = (window + (z,))[-WINDOW_CAPACITY:]
    return replace(state, x=x, p=p, window=window), x


def orientation_pipeline_step(
    q: Quaternion,
    state: FilterState,
    viability_threshold_deg: float = DEFAULT_VIABILITY_THRESHOLD_DEG,
    normalize: bool = False,
) -> tuple[FilterState, float]:
    """Quaternion in, filtered orientation degrees out."""
    theta = extract_theta(q)
    z = theta_to_orientation(theta)
    state, x = kalman_update(state, z, is_viable(state, z, viability_threshold_deg))
    assert x is not None  # a measurement is always available on this path
    return state, normalize_orientation(x) if normalize else x
