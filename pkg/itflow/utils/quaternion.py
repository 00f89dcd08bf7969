"""Quaternion helpers.

Conventions: quaternions are (w, x, y, z), rotations are active and right-handed,
angles given to the public helpers are in degrees. Composition ``quat_multiply(a, b)``
applies ``b`` first, then ``a``.
"""
import numpy as np

IDENTITY = (1.0, 0.0, 0.0, 0.0)
FORWARD = np.array([0.0, 0.0, -1.0])
NORM_TOLERANCE = 1e-9

_AXES = {
    "x": np.array([1.0, 0.0, 0.0]),
    "y": np.array([0.0, 1.0, 0.0]),
    "z": np.array([0.0, 0.0, 1.0]),
}


def as_tuple(v):
    return tuple(float(c) for c in v)


def quat_norm(q):
    return float(np.linalg.norm(np.asarray(q, dtype=np.float64)))


def quat_normalize(q):
    q = np.asarray(q, dtype=np.float64)
    n = np.linalg.norm(q)
    if n == 0.0:
        raise ValueError("Cannot normalise a zero quaternion")
    return as_tuple(q / n)


def quat_conjugate(q):
    w, x, y, z = q
    return (float(w), -float(x), -float(y), -float(z))


def quat_multiply(a, b):
    """Hamilton product a * b"""
    w1, x1, y1, z1 = a
    w2, x2, y2, z2 = b
    return (
        w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
        w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
        w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
        w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
    )


def quat_from_axis_angle(axis, degrees):
    """Rotation of <degrees> about <axis> ("x", "y", "z" or a 3-vector)"""
    if isinstance(axis, str):
        axis = _AXES[axis]
    axis = np.asarray(axis, dtype=np.float64)
    n = np.linalg.norm(axis)
    if n == 0.0:
        raise ValueError("Rotation axis must be non-zero")
    half = np.deg2rad(degrees) / 2.0
    s = np.sin(half) / n
    return as_tuple((np.cos(half), axis[0] * s, axis[1] * s, axis[2] * s))


def quat_to_matrix(q):
    """3x3 rotation matrix of a unit quaternion"""
    w, x, y, z = (float(c) for c in q)
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def quat_rotate(q, v):
    """Rotate the 3-vector <v> by <q>"""
    return quat_to_matrix(q) @ np.asarray(v, dtype=np.float64)


def forward(q):
    """Pointing direction of an orientation: <q> applied to (0, 0, -1)"""
    d = quat_rotate(q, FORWARD)
    return d / np.linalg.norm(d)


def yaw_quat(degrees):
    """Rotation about the vertical (y) axis"""
    return quat_from_axis_angle("y", degrees)


def yaw_of(q):
    """Heading angle (degrees) of <q> about y, measured from -z towards -x"""
    d = forward(q)
    return float(np.rad2deg(np.arctan2(-d[0], -d[2])))
