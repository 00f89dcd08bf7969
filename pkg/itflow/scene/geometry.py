"""Box geometry for the headless scene.

Objects are oriented boxes; every query goes through their world axis-aligned
bounds, which is conservative for rotated boxes.
"""
import math

from dataclasses import dataclass

import numpy as np

from itflow.utils.quaternion import (
    IDENTITY,
    NORM_TOLERANCE,
    as_tuple,
    quat_norm,
    quat_rotate,
    quat_to_matrix,
)

# Ray hits closer than this are considered simultaneous
TIE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class Transform:
    position: tuple = (0.0, 0.0, 0.0)
    orientation: tuple = IDENTITY

    def __post_init__(self):
        position = as_tuple(self.position)
        orientation = as_tuple(self.orientation)
        if len(position) != 3 or len(orientation) != 4:
            raise ValueError(f"Bad transform {position}, {orientation}")
        if not all(math.isfinite(c) for c in position + orientation):
            raise ValueError(f"Transform must be finite, got {position}, {orientation}")
        if abs(quat_norm(orientation) - 1.0) > NORM_TOLERANCE:
            raise ValueError(f"Transform orientation {orientation} is not unit length")
        object.__setattr__(self, "position", position)
        object.__setattr__(self, "orientation", orientation)

    @classmethod
    def from_locator(cls, locator):
        return cls(locator.position, locator.orientation)

    def to_locator(self):
        from itflow.flowcore.samples import Locator

        return Locator(self.position, self.orientation)

    def to_dict(self):
        return {"pos": list(self.position), "orient": list(self.orientation)}


@dataclass(frozen=True)
class WorldAABB:
    min: tuple
    max: tuple

    def __post_init__(self):
        lo, hi = as_tuple(self.min), as_tuple(self.max)
        if any(a > b for a, b in zip(lo, hi)):
            raise ValueError(f"AABB min {lo} exceeds max {hi}")
        object.__setattr__(self, "min", lo)
        object.__setattr__(self, "max", hi)

    @property
    def center(self):
        return (np.asarray(self.min) + np.asarray(self.max)) / 2.0

    @property
    def extents(self):
        return (np.asarray(self.max) - np.asarray(self.min)) / 2.0

    def corners(self):
        return [
            (x, y, z)
            for x in (self.min[0], self.max[0])
            for y in (self.min[1], self.max[1])
            for z in (self.min[2], self.max[2])
        ]


def world_aabb(transform, half_extents):
    """Axis-aligned bound of the oriented box (<transform>, <half_extents>).

    Per world axis j the extent is sum_i |R[j, i]| * h[i].

    :returns: WorldAABB.
    """
    rotation = np.abs(quat_to_matrix(transform.orientation))
    extents = rotation @ np.asarray(half_extents, dtype=np.float64)
    center = np.asarray(transform.position, dtype=np.float64)
    return WorldAABB(as_tuple(center - extents), as_tuple(center + extents))


def box_corners(transform, half_extents):
    """The 8 world-space corners of an oriented box"""
    h = np.asarray(half_extents, dtype=np.float64)
    center = np.asarray(transform.position, dtype=np.float64)
    corners = []
    for sx in (-1.0, 1.0):
        for sy in (-1.0, 1.0):
            for sz in (-1.0, 1.0):
                local = h * np.array([sx, sy, sz])
                corners.append(center + quat_rotate(transform.orientation, local))
    return corners


def overlap(a, b):
    """Closed-interval overlap of two AABBs: touching faces overlap"""
    return all(a.min[i] <= b.max[i] and b.min[i] <= a.max[i] for i in range(3))


def ray_aabb(origin, direction, box):
    """Slab test of a ray against an AABB.

    :returns: entry parameter t >= 0 (0 when the origin is inside), or None.
    """
    t_near, t_far = 0.0, math.inf
    for axis in range(3):
        o, d = float(origin[axis]), float(direction[axis])
        lo, hi = box.min[axis], box.max[axis]
        if d == 0.0:
            if o < lo or o > hi:
                return None
            continue
        t0 = (lo - o) / d
        t1 = (hi - o) / d
        if t0 > t1:
            t0, t1 = t1, t0
        t_near = max(t_near, t0)
        t_far = min(t_far, t1)
        if t_near > t_far:
            return None
    return t_near


def nearest_hit(origin, direction, boxes):
    """Nearest ray hit among <boxes>.

    :param boxes: mapping id -> WorldAABB.
    :returns: (id, t) or None. Hits within TIE_TOLERANCE go to the smallest id.
    """
    best = None
    for object_id in sorted(boxes):
        t = ray_aabb(origin, direction, boxes[object_id])
        if t is None:
            continue
        if best is None or t < best[1] - TIE_TOLERANCE:
            best = (object_id, t)
    return best


def frustum_planes(viewpoint, fov, aspect, near, far):
    """Inward-facing planes (normal, offset) of the view frustum; a point p is
    inside a plane when normal . p + offset >= 0. The viewpoint looks along its
    local -z with +y up.
    """
    rotation = quat_to_matrix(viewpoint.orientation)
    eye = np.asarray(viewpoint.position, dtype=np.float64)
    half_v = math.radians(fov) / 2.0
    half_h = math.atan(math.tan(half_v) * aspect)
    local = [
        (np.array([0.0, 0.0, -1.0]), -near),
        (np.array([0.0, 0.0, 1.0]), far),
        (np.array([math.cos(half_h), 0.0, -math.sin(half_h)]), 0.0),
        (np.array([-math.cos(half_h), 0.0, -math.sin(half_h)]), 0.0),
        (np.array([0.0, math.cos(half_v), -math.sin(half_v)]), 0.0),
        (np.array([0.0, -math.cos(half_v), -math.sin(half_v)]), 0.0),
    ]
    planes = []
    for normal, offset in local:
        n = rotation @ normal
        # offset is expressed relative to the eye, move it to world space
        planes.append((n, offset - float(n @ eye)))
    return planes


def aabb_in_frustum(box, planes):
    """Conservative AABB/frustum test: False only when the box is entirely
    outside one of the planes.
    """
    center, extents = box.center, box.extents
    for normal, offset in planes:
        radius = float(np.abs(normal) @ extents)
        if float(normal @ center) + offset < -radius:
            return False
    return True
