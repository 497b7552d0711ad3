"""Vector, rotation-matrix and quaternion math for the shoulder-pair orientation frame.

The rotation frame is built with the camera look-at construction: the
shoulder difference vector becomes the z column, the world up direction
(0, 0, 1) crossed with it gives x, and z cross x closes the right-handed
frame. Both degenerate branches (coincident shoulders, shoulder axis
parallel to up) fall back to fixed axes so every input yields a valid
orthonormal frame.

All functions are pure and all types immutable; everything runs in 64-bit
floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Norm threshold deciding the degenerate branches of the frame construction.
EPS_DEGENERATE = 1e-9

# Scalar-part threshold below which the quaternion conversion switches to
# the largest-diagonal branch (rotation angle near pi).
EPS_QUAT_SINGULAR = 1e-6


@dataclass(frozen=True)
class Vec3:
    """3-component vector; landmark positions and rotation-matrix axes."""

    x: float
    y: float
    z: float

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def scaled(self, s: float) -> "Vec3":
        return Vec3(self.x * s, self.y * s, self.z * s)

    def dot(self, other: "Vec3") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "Vec3") -> "Vec3":
        return Vec3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def norm(self) -> float:
        return math.sqrt(self.dot(self))

    def is_finite(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.z)


@dataclass(frozen=True)
class RotationMatrix:
    """3x3 orthonormal matrix, row-major fields, columns [x_axis y_axis z_axis]."""

    r00: float
    r01: float
    r02: float
    r10: float
    r11: float
    r12: float
    r20: float
    r21: float
    r22: float

    @classmethod
    def from_columns(cls, x: Vec3, y: Vec3, z: Vec3) -> "RotationMatrix":
        return cls(x.x, y.x, z.x,
                   x.y, y.y, z.y,
                   x.z, y.z, z.z)

    def column_x(self) -> Vec3:
        return Vec3(self.r00, self.r10, self.r20)

    def column_y(self) -> Vec3:
        return Vec3(self.r01, self.r11, self.r21)

    def column_z(self) -> Vec3:
        return Vec3(self.r02, self.r12, self.r22)

    def trace(self) -> float:
        return self.r00 + self.r11 + self.r22

    def rows(self) -> tuple[tuple[float, float, float], ...]:
        return (
            (self.r00, self.r01, self.r02),
            (self.r10, self.r11, self.r12),
            (self.r20, self.r21, self.r22),
        )

    def determinant(self) -> float:
        return (
            self.r00 * (self.r11 * self.r22 - self.r12 * self.r21)
            - self.r01 * (self.r10 * self.r22 - self.r12 * self.r20)
            + self.r02 * (self.r10 * self.r21 - self.r11 * self.r20)
        )


@dataclass(frozen=True)
class Quaternion:
    """Hamilton quaternion a + bi + cj + dk, scalar part first."""

    a: float
    b: float
    c: float
    d: float

    def norm(self) -> float:
        return math.sqrt(self.a * self.a + self.b * self.b
                         + self.c * self.c + self.d * self.d)


def difference_axis(left: Vec3, right: Vec3) -> Vec3:
    """Raw z-axis direction: componentwise left minus right."""
    return left - right


def normalize_z(z_vec: Vec3) -> Vec3:
    """Unit z axis; coincident-shoulder degenerate input falls back to (0, -1, 0)."""
    n = z_vec.norm()
    if n < EPS_DEGENERATE:
        return Vec3(0.0, -1.0, 0.0)
    return z_vec.scaled(1.0 / n)


def build_x_axis(z_hat: Vec3) -> Vec3:
    """Unit x axis from up cross z; falls back to (1, 0, 0) when they are parallel."""
    x = Vec3(0.0, 0.0, 1.0).cross(z_hat)
    n = x.norm()
    if n < EPS_DEGENERATE:
        return Vec3(1.0, 0.0, 0.0)
    return x.scaled(1.0 / n)


def build_rotation_matrix(left: Vec3, right: Vec3) -> RotationMatrix:
    """Orthonormal frame from a shoulder pair; total on all finite inputs."""
    z_hat = normalize_z(difference_axis(left, right))
    x_hat = build_x_axis(z_hat)
    y_hat = z_hat.cross(x_hat)
    return RotationMatrix.from_columns(x_hat, y_hat, z_hat)


def matrix_to_quaternion(r: RotationMatrix) -> Quaternion:
    """Quaternion for an orthonormal rotation matrix, sign-canonicalized to a >= 0.

    The scalar-dominant formula divides by the scalar part; when the trace is
    near -1 (rotation by pi) that division is ill-conditioned, so the
    conversion switches to the branch keyed on the largest diagonal element.
    """
    a = 0.5 * math.sqrt(abs(1.0 + r.trace()))
    if a >= EPS_QUAT_SINGULAR:
        inv = 1.0 / (4.0 * a)
        b = (r.r21 - r.r12) * inv
        c = (r.r02 - r.r20) * inv
        d = (r.r10 - r.r01) * inv
    elif r.r00 >= r.r11 and r.r00 >= r.r22:
        b = 0.5 * math.sqrt(abs(1.0 + r.r00 - r.r11 - r.r22))
        inv = 1.0 / (4.0 * b)
        a = (r.r21 - r.r12) * inv
        c = (r.r01 + r.r10) * inv
        d = (r.r02 + r.r20) * inv
    elif r.r11 >= r.r22:
        c = 0.5 * math.sqrt(abs(1.0 + r.r11 - r.r00 - r.r22))
        inv = 1.0 / (4.0 * c)
        a = (r.r02 - r.r20) * inv
        b = (r.r01 + r.r10) * inv
        d = (r.r12 + r.r21) * inv
    else:
        d = 0.5 * math.sqrt(abs(1.0 + r.r22 - r.r00 - r.r11))
        inv = 1.0 / (4.0 * d)
        a = (r.r10 - r.r01) * inv
        b = (r.r02 + r.r20) * inv
        c = (r.r12 + r.r21) * inv

    n = math.sqrt(a * a + b * b + c * c + d * d)
    a, b, c, d = a / n, b / n, c / n, d / n
    if a < 0.0:
        a, b, c, d = -a, -b, -c, -d
    return Quaternion(a, b, c, d)


def quaternion_to_matrix(q: Quaternion) -> RotationMatrix:
    """Rotation matrix of a unit quaternion; the round-trip oracle.

    Raises ValueError when the input norm deviates from 1 by more than 1e-3.
    """
    n = q.norm()
    if abs(n - 1.0) > 1e-3:
        raise ValueError(f"quaternion norm {n} is not within 1e-3 of 1")
    a, b, c, d = q.a / n, q.b / n, q.c / n, q.d / n
    return RotationMatrix(
        1.0 - 2.0 * (c * c + d * d), 2.0 * (b * c - a * d), 2.0 * (b * d + a * c),
        2.0 * (b * c + a * d), 1.0 - 2.0 * (b * b + d * d), 2.0 * (c * d - a * b),
        2.0 * (b * d - a * c), 2.0 * (c * d + a * b), 1.0 - 2.0 * (b * b + c * c),
    )
