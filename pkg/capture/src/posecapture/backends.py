"""Pose-landmark backends: a real pose model and a marker detector for tests.

A backend turns one BGR video frame into a list of named landmark
observations in normalized image coordinates, or an empty list when no
subject is found. The downstream consumer is schema-driven and ignores
landmarks it does not know, so a backend only reports what it actually
measures.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# The 33-keypoint topology of the pose model, in model index order.
LANDMARK_NAMES = (
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


class BackendUnavailableError(RuntimeError):
    """The requested pose model could not be loaded."""


@dataclass(frozen=True)
class LandmarkObservation:
    name: str
    x: float
    y: float
    z: float
    visibility: float


class MarkerBackend:
    """Detects colored shoulder markers: red = left, green = right.

    Intended for synthetic test footage where the subject wears saturated
    markers. Reports only the two shoulders it can measure, with z = 0
    (a 2-D marker carries no depth) and visibility 1.0 when the blob is
    large enough to trust.
    """

    def __init__(self, min_area_px: int = 20):
        self.min_area_px = min_area_px

    def _centroid(self, mask: np.ndarray) -> tuple[float, float] | None:
        ys, xs = np.nonzero(mask)
        if len(xs) < self.min_area_px:
            return None
        return float(xs.mean()), float(ys.mean())

    def detect(self, frame_bgr: np.ndarray) -> list[LandmarkObservation]:
        b, g, r = frame_bgr[..., 0], frame_bgr[..., 1], frame_bgr[..., 2]
        red = (r > 150) & (g < 100) & (b < 100)
        green = (g > 150) & (r < 100) & (b < 100)
        left = self._centroid(red)
        right = self._centroid(green)
        if left is None or right is None:
            return []
        height, width = frame_bgr.shape[:2]
        return [
            LandmarkObservation("LEFT_SHOULDER",
                                left[0] / width, left[1] / height, 0.0, 1.0),
            LandmarkObservation("RIGHT_SHOULDER",
                                right[0] / width, right[1] / height, 0.0, 1.0),
        ]


class MediaPipePoseBackend:
    """Full 33-landmark pose model backend.

    Emits the model's normalized coordinates with the depth estimate passed
    through unmodified. Raises BackendUnavailableError when the mediapipe
    package or its model assets cannot be loaded.
    """

    def __init__(self, model_complexity: int = 1):
        try:
            import mediapipe as mp
        except ImportError as exc:
            raise BackendUnavailableError(
                "mediapipe is not installed; install the [mediapipe] extra"
            ) from exc
        try:
            self._pose = mp.solutions.pose.Pose(
                static_image_mode=False, model_complexity=model_complexity)
        except Exception as exc:  # model asset download/load failures
            raise BackendUnavailableError(f"pose model failed to load: {exc}") from exc

    def detect(self, frame_bgr: np.ndarray) -> list[LandmarkObservation]:
        rgb = frame_bgr[..., ::-1]
        output = self._pose.process(np.ascontiguousarray(rgb))
        if output.pose_landmarks is None:
            return []
        return [
            LandmarkObservation(name, lm.x, lm.y, lm.z, lm.visibility)
            for name, lm in zip(LANDMARK_NAMES, output.pose_landmarks.landmark)
        ]


def make_backend(name: str, model_complexity: int = 1):
    if name == "marker":
        return MarkerBackend()
    if name == "mediapipe":
        return MediaPipePoseBackend(model_complexity)
    raise ValueError(f"unknown backend {name!r}")
