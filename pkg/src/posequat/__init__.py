"""Shoulder-landmark streams to quaternions, filtered orientation, and intent."""

from .estimation import (
    FilterState,
    extract_theta,
    kalman_update,
    orientation_pipeline_step,
    theta_to_orientation,
)
from .geometry import (
    Quaternion,
    RotationMatrix,
    Vec3,
    build_rotation_matrix,
    matrix_to_quaternion,
    quaternion_to_matrix,
)
from .stream import (
    Landmark,
    LandmarkFrame,
    PipelineConfig,
    PoseResult,
    parse_frame,
    process_stream,
    select_shoulders,
)

__all__ = [
    "FilterState",
    "Landmark",
    "LandmarkFrame",
    "PipelineConfig",
    "PoseResult",
    "Quaternion",
    "RotationMatrix",
    "Vec3",
    "build_rotation_matrix",
    "extract_theta",
    "kalman_update",
    "matrix_to_quaternion",
    "orientation_pipeline_step",
    "parse_frame",
    "process_stream",
    "quaternion_to_matrix",
    "select_shoulders",
    "theta_to_orientation",
]
