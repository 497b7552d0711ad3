"""Video-to-landmark adapter emitting pose frames as JSON Lines."""

from .backends import (
    BackendUnavailableError,
    LandmarkObservation,
    MarkerBackend,
    MediaPipePoseBackend,
    make_backend,
)
from .capture import CaptureConfig, SourceError, open_source, run_capture

__all__ = [
    "BackendUnavailableError",
    "CaptureConfig",
    "LandmarkObservation",
    "MarkerBackend",
    "MediaPipePoseBackend",
    "SourceError",
    "make_backend",
    "open_source",
    "run_capture",
]
