"""Quaternion and rotation helpers shared by the simulator and the filter.

Conventions: quaternions are scalar-first ``[w, x, y, z]``, Hamilton product,
and map body frame to world frame (``v_world = rotate(q, v_body)``).
Rotation vectors use the angle-axis exponential map.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def quat_normalize(q):
    return q / np.sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3])


@njit(cache=True)
def quat_multiply(a, b):
    w = a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
    x = a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2]
    y = a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1]
    z = a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]
    return np.array([w, x, y, z])


@njit(cache=True)
def quat_conjugate(q):
    return np.array([q[0], -q[1], -q[2], -q[3]])


@njit(cache=True)
def quat_to_matrix(q):
    """Rotation matrix R such that R @ v_body = v_world."""
    w, x, y, z = q[0], q[1], q[2], q[3]
    R = np.empty((3, 3))
    R[0, 0] = 1.0 - 2.0 * (y * y + z * z)
    R[0, 1] = 2.0 * (x * y - w * z)
    R[0, 2] = 2.0 * (x * z + w * y)
    R[1, 0] = 2.0 * (x * y + w * z)
    R[1, 1] = 1.0 - 2.0 * (x * x + z * z)
    R[1, 2] = 2.0 * (y * z - w * x)
    R[2, 0] = 2.0 * (x * z - w * y)
    R[2, 1] = 2.0 * (y * z + w * x)
    R[2, 2] = 1.0 - 2.0 * (x * x + y * y)
    return R


@njit(cache=True)
def quat_rotate(q, v):
    """Rotate a body-frame vector into the world frame."""
    return quat_to_matrix(q) @ v


@njit(cache=True)
def quat_rotate_inverse(q, v):
    """Rotate a world-frame vector into the body frame."""
    return quat_to_matrix(q).T @ v


@njit(cache=True)
def rotvec_to_quat(phi):
    """Exponential map: rotation vector (radians) to unit quaternion."""
    angle = np.sqrt(phi[0] * phi[0] + phi[1] * phi[1] + phi[2] * phi[2])
    q = np.empty(4)
    if angle < 1e-12:
        # second-order series keeps the map smooth through zero
        q[0] = 1.0 - angle * angle / 8.0
        half = 0.5 - angle * angle / 48.0
        q[1] = phi[0] * half
        q[2] = phi[1] * half
        q[3] = phi[2] * half
        return quat_normalize(q)
    half = 0.5 * angle
    s = np.sin(half) / angle
    q[0] = np.cos(half)
    q[1] = phi[0] * s
    q[2] = phi[1] * s
    q[3] = phi[2] * s
    return q


@njit(cache=True)
def quat_to_rotvec(q):
    """Logarithm map, inverse of :func:`rotvec_to_quat`."""
    qn = quat_normalize(q)
    w = qn[0]
    if w < 0.0:
        qn = -qn
        w = qn[0]
    vec_norm = np.sqrt(qn[1] * qn[1] + qn[2] * qn[2] + qn[3] * qn[3])
    if vec_norm < 1e-12:
        return 2.0 * qn[1:]
    angle = 2.0 * np.arctan2(vec_norm, w)
    return qn[1:] * (angle / vec_norm)


@njit(cache=True)
def skew(v):
    S = np.zeros((3, 3))
    S[0, 1] = -v[2]
    S[0, 2] = v[1]
    S[1, 0] = v[2]
    S[1, 2] = -v[0]
    S[2, 0] = -v[1]
    S[2, 1] = v[0]
    return S


def quat_angle_between(a, b):
    """Angle in radians between two orientations."""
    return float(np.linalg.norm(quat_to_rotvec(quat_multiply(quat_conjugate(a), b))))
