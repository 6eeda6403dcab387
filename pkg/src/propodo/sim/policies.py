"""Excitation policies that drive trajectory generation.

Each policy produces thruster commands at the actuator rate from the current
true state. They exist to cover the reachable state space: random
piecewise-constant pushes, band-limited smooth excitation, attitude holding
at random setpoints, station keeping, and square-waypoint following.
"""

from __future__ import annotations

import numpy as np

from .._rotations import quat_conjugate, quat_multiply, quat_rotate_inverse, quat_to_rotvec
from .params import VehicleParams


def commands_for_wrench(wrench, params: VehicleParams) -> np.ndarray:
    """Least-squares thruster commands realizing a body wrench at nominal
    voltage (inverts the signed-quadratic thrust law, no clipping)."""
    forces = np.linalg.pinv(params.allocation_matrix) @ np.asarray(wrench, dtype=float)
    return np.sign(forces) * np.sqrt(np.abs(forces) / params.thrust_coefficient)


class ExcitationPolicy:
    """Base class: seeded, stateful command generators."""

    name = "base"

    def __init__(self, params: VehicleParams):
        self.params = params

    def reset(self, rng: np.random.Generator, initial_state) -> None:
        self.rng = rng

    def command(self, t: float, state) -> np.ndarray:
        raise NotImplementedError


class PiecewiseConstantPolicy(ExcitationPolicy):
    """Random translational pushes plus yaw twist, each held 1-5 s.

    Magnitudes are drawn so the speed distribution reaches most of the
    drag-limited envelope.
    """

    name = "piecewise"

    def __init__(self, params, force_scale: float = 19.0, yaw_scale: float = 1.2,
                 jitter: float = 0.08):
        super().__init__(params)
        self.force_scale = force_scale
        self.yaw_scale = yaw_scale
        self.jitter = jitter

    def reset(self, rng, initial_state):
        super().reset(rng, initial_state)
        self._until = 0.0
        self._u = np.zeros(self.params.J)

    def _redraw(self):
        rng = self.rng
        direction = rng.standard_normal(3)
        direction /= max(np.linalg.norm(direction), 1e-9)
        magnitude = rng.uniform(0.05, 1.0) ** 0.6  # bias toward strong pushes
        wrench = np.zeros(6)
        wrench[:3] = self.force_scale * magnitude * direction
        wrench[5] = self.yaw_scale * rng.uniform(-1.0, 1.0)
        u = commands_for_wrench(wrench, self.params)
        u = u + self.jitter * rng.uniform(-1.0, 1.0, size=self.params.J)
        return u

    def command(self, t, state):
        if t >= self._until:
            self._u = self._redraw()
            self._until = t + self.rng.uniform(1.0, 5.0)
        return self._u.copy()


class SmoothExcitationPolicy(ExcitationPolicy):
    """Band-limited multi-sine excitation per wrench channel."""

    name = "smooth"

    def __init__(self, params, force_scale: float = 11.0, yaw_scale: float = 1.0,
                 n_tones: int = 4, f_lo: float = 0.02, f_hi: float = 0.25):
        super().__init__(params)
        self.force_scale = force_scale
        self.yaw_scale = yaw_scale
        self.n_tones = n_tones
        self.f_lo = f_lo
        self.f_hi = f_hi

    def reset(self, rng, initial_state):
        super().reset(rng, initial_state)
        n = self.n_tones
        self._freqs = rng.uniform(self.f_lo, self.f_hi, size=(4, n))
        self._phases = rng.uniform(0.0, 2.0 * np.pi, size=(4, n))
        amps = rng.uniform(0.2, 1.0, size=(4, n))
        self._amps = amps / amps.sum(axis=1, keepdims=True)

    def command(self, t, state):
        channels = np.sum(
            self._amps * np.sin(2.0 * np.pi * self._freqs * t + self._phases), axis=1
        )
        wrench = np.zeros(6)
        wrench[:3] = self.force_scale * channels[:3]
        wrench[5] = self.yaw_scale * channels[3]
        return commands_for_wrench(wrench, self.params)


class AttitudeHoldPolicy(ExcitationPolicy):
    """PD attitude hold at random roll/pitch/yaw setpoints with mild
    translational pushes layered on top."""

    name = "attitude_hold"

    def __init__(self, params, kp: float = 3.0, kd: float = 0.8,
                 max_tilt_deg: float = 25.0, force_scale: float = 7.0):
        super().__init__(params)
        self.kp = kp
        self.kd = kd
        self.max_tilt = np.radians(max_tilt_deg)
        self.force_scale = force_scale

    def reset(self, rng, initial_state):
        super().reset(rng, initial_state)
        self._until = 0.0
        self._q_set = initial_state.orientation.copy()
        self._push_until = 0.0
        self._push = np.zeros(3)

    def _redraw_setpoint(self):
        from .._rotations import rotvec_to_quat

        rng = self.rng
        rotvec = np.array(
            [
                rng.uniform(-self.max_tilt, self.max_tilt),
                rng.uniform(-self.max_tilt, self.max_tilt),
                rng.uniform(-np.pi, np.pi),
            ]
        )
        return rotvec_to_quat(rotvec)

    def command(self, t, state):
        rng = self.rng
        if t >= self._until:
            self._q_set = self._redraw_setpoint()
            self._until = t + rng.uniform(5.0, 15.0)
        if t >= self._push_until:
            direction = rng.standard_normal(3)
            direction /= max(np.linalg.norm(direction), 1e-9)
            self._push = self.force_scale * rng.uniform(0.0, 1.0) * direction
            self._push_until = t + rng.uniform(2.0, 6.0)
        err = quat_to_rotvec(quat_multiply(quat_conjugate(state.orientation), self._q_set))
        torque = self.kp * err - self.kd * state.angular_velocity_body
        wrench = np.concatenate([self._push, torque])
        return commands_for_wrench(wrench, self.params)


class StationKeepingPolicy(ExcitationPolicy):
    """Hold the starting pose with a low-gain PD loop plus a small dither so
    the actuator channels stay alive."""

    name = "station_keeping"

    def __init__(self, params, kp_pos: float = 8.0, kd_pos: float = 14.0,
                 kp_att: float = 2.0, kd_att: float = 0.6, dither: float = 0.02):
        super().__init__(params)
        self.kp_pos = kp_pos
        self.kd_pos = kd_pos
        self.kp_att = kp_att
        self.kd_att = kd_att
        self.dither = dither

    def reset(self, rng, initial_state):
        super().reset(rng, initial_state)
        self._p_ref = initial_state.position.copy()
        self._q_ref = initial_state.orientation.copy()

    def command(self, t, state):
        pos_err_body = quat_rotate_inverse(state.orientation, self._p_ref - state.position)
        force = self.kp_pos * pos_err_body - self.kd_pos * state.linear_velocity_body
        att_err = quat_to_rotvec(quat_multiply(quat_conjugate(state.orientation), self._q_ref))
        torque = self.kp_att * att_err - self.kd_att * state.angular_velocity_body
        u = commands_for_wrench(np.concatenate([force, torque]), self.params)
        return u + self.dither * self.rng.uniform(-1.0, 1.0, size=self.params.J)


class WaypointSquarePolicy(ExcitationPolicy):
    """Follow the vertices of a horizontal square at fixed depth under PD
    position control; mirrors a closed-loop waypoint mission."""

    name = "waypoint_square"

    def __init__(self, params, edge_m: float = 2.0, depth_m: float = 0.8,
                 kp_pos: float = 10.0, kd_pos: float = 16.0,
                 kp_att: float = 2.5, kd_att: float = 0.7, capture_m: float = 0.25):
        super().__init__(params)
        self.edge = edge_m
        self.depth = depth_m
        self.kp_pos = kp_pos
        self.kd_pos = kd_pos
        self.kp_att = kp_att
        self.kd_att = kd_att
        self.capture = capture_m

    def reset(self, rng, initial_state):
        super().reset(rng, initial_state)
        e = self.edge
        z = -self.depth
        origin = initial_state.position
        self._corners = origin + np.array(
            [[0.0, 0.0, 0.0], [e, 0.0, 0.0], [e, e, 0.0], [0.0, e, 0.0]]
        )
        self._corners[:, 2] = z
        self._idx = 0
        self._q_ref = initial_state.orientation.copy()

    def command(self, t, state):
        target = self._corners[self._idx]
        if np.linalg.norm(target - state.position) < self.capture:
            self._idx = (self._idx + 1) % len(self._corners)
            target = self._corners[self._idx]
        pos_err_body = quat_rotate_inverse(state.orientation, target - state.position)
        force = self.kp_pos * pos_err_body - self.kd_pos * state.linear_velocity_body
        att_err = quat_to_rotvec(quat_multiply(quat_conjugate(state.orientation), self._q_ref))
        torque = self.kp_att * att_err - self.kd_att * state.angular_velocity_body
        return commands_for_wrench(np.concatenate([force, torque]), self.params)


POLICY_CLASSES = {
    cls.name: cls
    for cls in (
        PiecewiseConstantPolicy,
        SmoothExcitationPolicy,
        AttitudeHoldPolicy,
        StationKeepingPolicy,
        WaypointSquarePolicy,
    )
}


def make_policy(name: str, params: VehicleParams, **kwargs) -> ExcitationPolicy:
    if name not in POLICY_CLASSES:
        raise ValueError(f"unknown policy {name!r}, expected one of {sorted(POLICY_CLASSES)}")
    return POLICY_CLASSES[name](params, **kwargs)
