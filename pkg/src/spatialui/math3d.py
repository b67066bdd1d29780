"""3D value types and rigid-transform math.

Conventions: right-handed coordinates, +y up, -z forward, units in meters.
Quaternions are stored (x, y, z, w) and kept unit-norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidArgumentError

_UNIT_EPS = 1e-6
# Skip renormalization when the norm is already this close to 1; keeps
# identity composition bit-exact, which layout round-tripping relies on.
_RENORM_EPS = 1e-12


@dataclass(frozen=True)
class Vec3:
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "Vec3":
        return Vec3(-self.x, -self.y, -self.z)

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

    def normalized(self) -> "Vec3":
        n = self.norm()
        if n == 0.0:
            raise InvalidArgumentError("cannot normalize a zero vector")
        return Vec3(self.x / n, self.y / n, self.z / n)

    def is_finite(self) -> bool:
        return all(map(math.isfinite, (self.x, self.y, self.z)))


@dataclass(frozen=True)
class Quat:
    """Unit quaternion (x, y, z, w); identity is (0, 0, 0, 1)."""

    x: float = 0.0
    y: float = 0.0
    z: float = 0.0
    w: float = 1.0

    @staticmethod
    def identity() -> "Quat":
        return Quat(0.0, 0.0, 0.0, 1.0)

    @staticmethod
    def from_axis_angle(axis: Vec3, angle_rad: float) -> "Quat":
        a = axis.normalized()
        half = 0.5 * angle_rad
        s = math.sin(half)
        return Quat(a.x * s, a.y * s, a.z * s, math.cos(half))

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z + self.w * self.w)

    def normalized(self) -> "Quat":
        n2 = self.x * self.x + self.y * self.y + self.z * self.z + self.w * self.w
        if abs(n2 - 1.0) <= _RENORM_EPS:
            return self
        n = math.sqrt(n2)
        if n == 0.0:
            raise InvalidArgumentError("cannot normalize a zero quaternion")
        return Quat(self.x / n, self.y / n, self.z / n, self.w / n)

    def conjugate(self) -> "Quat":
        return Quat(-self.x, -self.y, -self.z, self.w)

    def mul(self, other: "Quat") -> "Quat":
        ax, ay, az, aw = self.x, self.y, self.z, self.w
        bx, by, bz, bw = other.x, other.y, other.z, other.w
        return Quat(
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
            aw * bw - ax * bx - ay * by - az * bz,
        )

    def rotate(self, v: Vec3) -> Vec3:
        # v' = v + w*t + qv x t, t = 2 qv x v. Exact for the identity quaternion.
        qv = Vec3(self.x, self.y, self.z)
        t = qv.cross(v).scaled(2.0)
        return v + t.scaled(self.w) + qv.cross(t)

    def to_matrix(self) -> tuple[tuple[float, float, float], ...]:
        """Row-major 3x3 rotation matrix (body -> world)."""
        x, y, z, w = self.x, self.y, self.z, self.w
        return (
            (1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)),
            (2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)),
            (2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)),
        )

    def dot(self, other: "Quat") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z + self.w * other.w

    def is_unit(self, eps: float = _UNIT_EPS) -> bool:
        return abs(self.norm() - 1.0) <= eps


@dataclass(frozen=True)
class Pose:
    """Rigid transform: rotation followed by translation."""

    position: Vec3 = Vec3()
    rotation: Quat = Quat()

    @staticmethod
    def identity() -> "Pose":
        return Pose()

    @staticmethod
    def from_xyz(x: float, y: float, z: float, rotation: Quat | None = None) -> "Pose":
        return Pose(Vec3(x, y, z), rotation if rotation is not None else Quat.identity())

    def transform_point(self, p: Vec3) -> Vec3:
        return self.position + self.rotation.rotate(p)

    def transform_direction(self, d: Vec3) -> Vec3:
        return self.rotation.rotate(d)


def compose(parent: Pose, child: Pose) -> Pose:
    """Parent-then-child composition; the result maps child-local into parent's frame."""
    return Pose(
        parent.position + parent.rotation.rotate(child.position),
        parent.rotation.mul(child.rotation).normalized(),
    )


def inverse(pose: Pose) -> Pose:
    inv_rot = pose.rotation.conjugate()
    return Pose(inv_rot.rotate(-pose.position), inv_rot)


@dataclass(frozen=True)
class Ray:
    origin: Vec3
    direction: Vec3

    def __post_init__(self):
        n = self.direction.norm()
        if not math.isfinite(n) or abs(n - 1.0) > _UNIT_EPS:
            raise InvalidArgumentError(f"ray direction must be unit length, got norm {n}")

    def point_at(self, t: float) -> Vec3:
        return self.origin + self.direction.scaled(t)


@dataclass(frozen=True)
class Obb:
    """Oriented box: center pose plus strictly positive half extents."""

    center: Pose
    half_extents: Vec3

    def __post_init__(self):
        h = self.half_extents
        if not (h.is_finite() and h.x > 0 and h.y > 0 and h.z > 0):
            raise InvalidArgumentError(f"half extents must be positive and finite, got {h}")


def ray_intersect_obb(ray: Ray, obb: Obb) -> float | None:
    """Smallest t >= 0 whose ray point lies on or inside the box, or None.

    A ray starting inside returns 0.0. Slab test in the box's local frame.
    """
    inv = inverse(obb.center)
    o = inv.transform_point(ray.origin)
    d = inv.transform_direction(ray.direction)
    h = obb.half_extents

    t_min = 0.0
    t_max = math.inf
    for oc, dc, hc in ((o.x, d.x, h.x), (o.y, d.y, h.y), (o.z, d.z, h.z)):
        if abs(dc) < 1e-12:
            if abs(oc) > hc:
                return None
            continue
        t1 = (-hc - oc) / dc
        t2 = (hc - oc) / dc
        if t1 > t2:
            t1, t2 = t2, t1
        t_min = max(t_min, t1)
        t_max = min(t_max, t2)
        if t_min > t_max:
            return None
    return t_min


def point_obb_distance(point: Vec3, obb: Obb) -> float:
    """Euclidean distance from a point to the box (0 when inside)."""
    p = inverse(obb.center).transform_point(point)
    h = obb.half_extents
    dx = max(abs(p.x) - h.x, 0.0)
    dy = max(abs(p.y) - h.y, 0.0)
    dz = max(abs(p.z) - h.z, 0.0)
    return math.sqrt(dx * dx + dy * dy + dz * dz)
