"""6-DOF rigid-body dynamics with added mass, drag, buoyancy and thrusters.

Body velocity and angular rate are integrated with RK4 over each step (the
restoring wrench held at the step-start attitude); the quaternion advances by
the exponential map of the step-start angular rate and position uses the
updated velocity. The reported body acceleration is the effective discrete
value (delta-v over dt plus the transport term), which makes strapdown
integration of the noise-free sensor stream reproduce the simulated
trajectory exactly.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .._rotations import quat_multiply, quat_normalize, quat_rotate, quat_to_matrix, rotvec_to_quat
from .params import VehicleParams


@njit(cache=True)
def _thruster_forces(u, battery_v, coeff, v_nom):
    # signed quadratic in command, linear in voltage ratio
    return coeff * (battery_v / v_nom) * u * np.abs(u)


@njit(cache=True)
def _nu_dot(v, w, q, wrench, m_trans, m_rot, lin_drag, quad_drag, b_off, b_ratio, mass, g_mag):
    """Body-frame acceleration of (v, omega) for the current state."""
    speed = np.sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])
    rate = np.sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2])

    drag_f = -(lin_drag[:3] + quad_drag[:3] * speed) * v
    drag_m = -(lin_drag[3:] + quad_drag[3:] * rate) * w

    # restoring: weight at CM, buoyancy at b_off; both along world Z
    Rt = quat_to_matrix(q).T
    z_body = Rt @ np.array([0.0, 0.0, 1.0])
    f_rest = (b_ratio - 1.0) * mass * g_mag * z_body
    f_buoy = b_ratio * mass * g_mag * z_body
    tau_rest = np.cross(b_off, f_buoy)

    mv = m_trans * v
    coriolis_f = -np.cross(w, mv)
    coriolis_m = np.cross(mv, v) + np.cross(m_rot * w, w)

    v_dot = (wrench[:3] + f_rest + coriolis_f + drag_f) / m_trans
    w_dot = (wrench[3:] + tau_rest + coriolis_m + drag_m) / m_rot
    return v_dot, w_dot


@njit(cache=True)
def _step_core(
    p, q, v, w, u, battery_v, dt,
    mass, inertia, added, lin_drag, quad_drag, alloc, coeff, v_nom, b_off, b_ratio, g_mag,
):
    """One integration step; returns new state and effective body accel."""
    m_trans = mass + added[:3]
    m_rot = inertia + added[3:]

    forces = _thruster_forces(u, battery_v, coeff, v_nom)
    wrench = alloc @ forces

    # RK4 on (v, w) with attitude and commands frozen over the step
    k1v, k1w = _nu_dot(v, w, q, wrench, m_trans, m_rot, lin_drag, quad_drag, b_off, b_ratio, mass, g_mag)
    k2v, k2w = _nu_dot(v + 0.5 * dt * k1v, w + 0.5 * dt * k1w, q, wrench, m_trans, m_rot, lin_drag, quad_drag, b_off, b_ratio, mass, g_mag)
    k3v, k3w = _nu_dot(v + 0.5 * dt * k2v, w + 0.5 * dt * k2w, q, wrench, m_trans, m_rot, lin_drag, quad_drag, b_off, b_ratio, mass, g_mag)
    k4v, k4w = _nu_dot(v + dt * k3v, w + dt * k3w, q, wrench, m_trans, m_rot, lin_drag, quad_drag, b_off, b_ratio, mass, g_mag)

    v_new = v + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    w_new = w + (dt / 6.0) * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)

    q_new = quat_normalize(quat_multiply(q, rotvec_to_quat(w * dt)))
    p_new = p + quat_rotate(q_new, v_new) * dt

    # effective discrete acceleration seen by the accelerometer model
    accel_body = (v_new - v) / dt + np.cross(w, v)
    return p_new, q_new, v_new, w_new, accel_body


def _params_pack(params: VehicleParams, gravity_mag: float):
    return (
        params.mass,
        params.inertia_diag,
        params.added_mass_diag,
        params.linear_drag_diag,
        params.quadratic_drag_diag,
        params.allocation_matrix,
        params.thrust_coefficient,
        params.nominal_voltage,
        params.buoyancy_offset,
        params.buoyancy_ratio,
        gravity_mag,
    )


def thruster_force(u: float, battery_v: float, params: VehicleParams) -> float:
    """Force of one thruster for a normalized command at a given voltage.

    Signed quadratic in the command, scaled linearly by the voltage ratio:
    ``F = thrust_coefficient * (V / V_nominal) * u * |u|``.
    """
    if abs(u) > 1.0:
        raise ValueError(f"command magnitude {abs(u):.3f} exceeds 1")
    if battery_v <= 0.0:
        raise ValueError(f"battery voltage must be positive, got {battery_v}")
    return float(
        params.thrust_coefficient * (battery_v / params.nominal_voltage) * u * abs(u)
    )


def step_dynamics(state, commands, params: VehicleParams, battery_v: float, dt: float,
                  gravity_mag: float = 9.81):
    """Advance the rigid-body state by one step.

    Returns the new state and the effective body-frame acceleration (without
    the gravity reaction) that the IMU model consumes.
    """
    from .trajectory import RigidBodyState  # local import avoids cycle

    if not 0.0 < dt <= 0.01:
        raise ValueError(f"dt must be in (0, 0.01], got {dt}")
    for name in ("position", "orientation", "linear_velocity_body", "angular_velocity_body"):
        value = getattr(state, name)
        if not np.all(np.isfinite(value)):
            raise ValueError(f"non-finite state field: {name} = {value}")
    commands = np.asarray(commands, dtype=float)
    if commands.shape != (params.J,):
        raise ValueError(f"expected {params.J} commands, got shape {commands.shape}")
    q = state.orientation
    if abs(np.linalg.norm(q) - 1.0) > 1e-6:
        raise ValueError("orientation quaternion is not normalized")

    p_new, q_new, v_new, w_new, accel = _step_core(
        state.position, q, state.linear_velocity_body, state.angular_velocity_body,
        commands, battery_v, dt, *_params_pack(params, gravity_mag),
    )
    new_state = RigidBodyState(p_new, q_new, v_new, w_new)
    for name in ("position", "orientation", "linear_velocity_body", "angular_velocity_body"):
        value = getattr(new_state, name)
        if not np.all(np.isfinite(value)):
            raise ValueError(f"non-finite state field after step: {name} = {value}")
    return new_state, accel


def battery_step(voltage: float, instantaneous_power: float, dt: float, cfg) -> float:
    """Advance the open-circuit battery voltage while discharging.

    The open-circuit voltage drops proportionally to the energy consumed and
    never rises; the load-sag component is applied at measurement time by the
    trajectory generator.
    """
    if not cfg.cutoff_voltage <= voltage <= cfg.max_voltage:
        raise ValueError(
            f"voltage {voltage:.3f} outside [{cfg.cutoff_voltage}, {cfg.max_voltage}]"
        )
    if instantaneous_power < 0:
        raise ValueError("power draw cannot be negative")
    return voltage - cfg.discharge_slope * instantaneous_power * dt
