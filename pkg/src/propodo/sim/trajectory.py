"""Trajectory generation: closed-loop rollout of dynamics, sensors and policy.

A trajectory is a pure function of (policy, duration, seed, parameters):
policies run at the actuator rate (20 Hz), dynamics and IMU at 200 Hz, and
every stochastic term draws from seed-split generator streams.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .. import config as cfgmod
from .._rotations import quat_rotate_inverse
from .dynamics import _step_core, battery_step
from .params import BatteryConfig, ImuNoiseParams, SimRates, VehicleParams
from .policies import ExcitationPolicy
from .sensors import ImuBiasState

log = logging.getLogger(__name__)


@dataclass
class RigidBodyState:
    """Pose and twist of the vehicle; velocity and rates are body-frame."""

    position: np.ndarray = field(default_factory=lambda: np.zeros(3))
    orientation: np.ndarray = field(default_factory=lambda: np.array([1.0, 0.0, 0.0, 0.0]))
    linear_velocity_body: np.ndarray = field(default_factory=lambda: np.zeros(3))
    angular_velocity_body: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=float)
        self.orientation = np.asarray(self.orientation, dtype=float)
        self.linear_velocity_body = np.asarray(self.linear_velocity_body, dtype=float)
        self.angular_velocity_body = np.asarray(self.angular_velocity_body, dtype=float)

    def copy(self) -> "RigidBodyState":
        return RigidBodyState(
            self.position.copy(),
            self.orientation.copy(),
            self.linear_velocity_body.copy(),
            self.angular_velocity_body.copy(),
        )


@dataclass
class ImuSeries:
    t: np.ndarray
    accel: np.ndarray  # (n, 3)
    gyro: np.ndarray  # (n, 3)


@dataclass
class ActuatorSeries:
    t: np.ndarray
    commands: np.ndarray  # (n, J)
    battery_voltage: np.ndarray  # (n,)


@dataclass
class BarometerSeries:
    t: np.ndarray
    depth: np.ndarray  # m, positive down


@dataclass
class GroundTruthSeries:
    t: np.ndarray
    position: np.ndarray  # (n, 3) world
    orientation: np.ndarray  # (n, 4) wxyz body->world
    velocity_body: np.ndarray  # (n, 3)
    omega_body: np.ndarray  # (n, 3)


@dataclass
class BiasSeries:
    t: np.ndarray
    accel_bias: np.ndarray  # (n, 3)
    gyro_bias: np.ndarray  # (n, 3)


@dataclass
class TrajectoryRecord:
    imu: ImuSeries
    actuators: ActuatorSeries
    barometer: BarometerSeries
    ground_truth: GroundTruthSeries
    true_biases: BiasSeries
    meta: dict

    @property
    def J(self) -> int:
        return self.actuators.commands.shape[1]

    @property
    def duration(self) -> float:
        return float(self.ground_truth.t[-1] - self.ground_truth.t[0])

    def path_length(self) -> float:
        return float(np.sum(np.linalg.norm(np.diff(self.ground_truth.position, axis=0), axis=1)))

    def speeds(self) -> np.ndarray:
        return np.linalg.norm(self.ground_truth.velocity_body, axis=1)


@njit(cache=True)
def _rollout_block(
    p, q, v, w, ba, bg, u, battery_v, dt, n_sub, draws,
    accel_std, gyro_std, walk_a_std, walk_g_std, gravity_w,
    mass, inertia, added, lin_drag, quad_drag, alloc, coeff, v_nom, b_off, b_ratio, g_mag,
):
    """Advance n_sub IMU-rate steps under constant commands, emitting IMU
    samples. draws is (n_sub, 12): accel noise, gyro noise, bias walks."""
    accels = np.empty((n_sub, 3))
    gyros = np.empty((n_sub, 3))
    sqrt_dt = np.sqrt(dt)
    for i in range(n_sub):
        # gravity reaction at the pre-step attitude
        Rt_g = quat_rotate_inverse(q, gravity_w)
        gyros[i] = w + bg + gyro_std * draws[i, 3:6]
        p, q, v, w, accel_eff = _step_core(
            p, q, v, w, u, battery_v, dt,
            mass, inertia, added, lin_drag, quad_drag, alloc, coeff, v_nom, b_off, b_ratio, g_mag,
        )
        accels[i] = accel_eff + ba - Rt_g + accel_std * draws[i, 0:3]
        ba = ba + walk_a_std * sqrt_dt * draws[i, 6:9]
        bg = bg + walk_g_std * sqrt_dt * draws[i, 9:12]
    return p, q, v, w, ba, bg, accels, gyros


def generate_trajectory(
    policy: ExcitationPolicy,
    duration: float,
    seed: int | np.random.SeedSequence,
    params: VehicleParams,
    noise: ImuNoiseParams,
    battery: BatteryConfig | None = None,
    rates: SimRates | None = None,
    depth_noise_std: float = 0.01,
    initial_state: RigidBodyState | None = None,
) -> TrajectoryRecord:
    """Simulate one trajectory and its full sensor suite.

    Deterministic in (policy config, duration, seed, parameters). Commands
    outside [-1, 1] are clamped and counted. Reaching the battery cutoff
    truncates the trajectory and flags it in the metadata.
    """
    if duration < 30.0:
        raise ValueError(f"duration must be >= 30 s, got {duration}")
    battery = battery or BatteryConfig()
    rates = rates or SimRates()
    n_sub = rates.substeps
    dt = rates.imu_dt
    tick_dt = rates.tick_dt
    n_ticks = int(round(duration * rates.tick_rate_hz))

    seed_seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    policy_ss, imu_ss, baro_ss = seed_seq.spawn(3)
    imu_rng = np.random.default_rng(imu_ss)
    baro_rng = np.random.default_rng(baro_ss)

    state = (initial_state or RigidBodyState(position=np.array([0.0, 0.0, -0.5]))).copy()
    policy.reset(np.random.default_rng(policy_ss), state)
    bias = ImuBiasState.initial(noise, imu_rng)
    g_mag = float(np.linalg.norm(noise.gravity_w))

    J = params.J
    imu_t = np.empty(n_ticks * n_sub)
    imu_accel = np.empty((n_ticks * n_sub, 3))
    imu_gyro = np.empty((n_ticks * n_sub, 3))
    act_t = np.empty(n_ticks)
    act_u = np.empty((n_ticks, J))
    act_v = np.empty(n_ticks)
    baro_d = np.empty(n_ticks)
    gt_t = np.empty(n_ticks + 1)
    gt_p = np.empty((n_ticks + 1, 3))
    gt_q = np.empty((n_ticks + 1, 4))
    gt_v = np.empty((n_ticks + 1, 3))
    gt_w = np.empty((n_ticks + 1, 3))
    bias_a = np.empty((n_ticks, 3))
    bias_g = np.empty((n_ticks, 3))

    p, q = state.position.copy(), state.orientation.copy()
    v, w = state.linear_velocity_body.copy(), state.angular_velocity_body.copy()
    v_oc = battery.initial_voltage
    clamp_count = 0
    truncated = False
    ticks_done = 0

    for m in range(n_ticks):
        t = m * tick_dt
        state = RigidBodyState(p, q, v, w)
        u = np.asarray(policy.command(t, state), dtype=float)
        over = np.abs(u) > 1.0
        if np.any(over):
            clamp_count += int(np.sum(over))
            u = np.clip(u, -1.0, 1.0)
        power = battery.power_draw(u)
        k_v = v_oc - battery.sag_coeff * power

        act_t[m] = t
        act_u[m] = u
        act_v[m] = k_v
        baro_d[m] = -p[2] + depth_noise_std * baro_rng.standard_normal()
        gt_t[m] = t
        gt_p[m], gt_q[m], gt_v[m], gt_w[m] = p, q, v, w
        bias_a[m], bias_g[m] = bias.accel_bias, bias.gyro_bias

        draws = imu_rng.standard_normal((n_sub, 12))
        p, q, v, w, ba, bg, accels, gyros = _rollout_block(
            p, q, v, w, bias.accel_bias, bias.gyro_bias, u, k_v, dt, n_sub, draws,
            noise.accel_noise_std, noise.gyro_noise_std,
            noise.accel_bias_walk_std, noise.gyro_bias_walk_std, noise.gravity_w,
            params.mass, params.inertia_diag, params.added_mass_diag,
            params.linear_drag_diag, params.quadratic_drag_diag,
            params.allocation_matrix, params.thrust_coefficient, params.nominal_voltage,
            params.buoyancy_offset, params.buoyancy_ratio, g_mag,
        )
        bias.accel_bias, bias.gyro_bias = ba, bg
        sl = slice(m * n_sub, (m + 1) * n_sub)
        imu_t[sl] = t + dt * np.arange(n_sub)
        imu_accel[sl] = accels
        imu_gyro[sl] = gyros

        ticks_done = m + 1
        v_oc = battery_step(max(v_oc, battery.cutoff_voltage), power, tick_dt, battery)
        if v_oc <= battery.cutoff_voltage:
            truncated = True
            log.warning("battery cutoff reached at t=%.1f s; trajectory truncated", t)
            break

    n = ticks_done
    gt_t[n] = n * tick_dt
    gt_p[n], gt_q[n], gt_v[n], gt_w[n] = p, q, v, w

    if clamp_count:
        log.info("policy %s: clamped %d thruster commands to [-1, 1]", policy.name, clamp_count)

    meta = {
        "schema_version": cfgmod.SCHEMA_VERSION,
        "seed": seed_seq.entropy,
        "spawn_key": list(seed_seq.spawn_key),
        "duration_s": n * tick_dt,
        "policy": policy.name,
        "thruster_count": J,
        "imu_rate_hz": rates.imu_rate_hz,
        "tick_rate_hz": rates.tick_rate_hz,
        "depth_noise_std": depth_noise_std,
        "truncated": truncated,
        "clamped_commands": clamp_count,
        "vehicle": cfgmod.to_plain(params),
        "imu_noise": cfgmod.to_plain(noise),
        "battery": cfgmod.to_plain(battery),
        "units": {
            "position": "m", "velocity": "m/s", "accel": "m/s^2",
            "gyro": "rad/s", "depth": "m (positive down)", "voltage": "V", "time": "s",
        },
    }
    k = n * n_sub
    return TrajectoryRecord(
        imu=ImuSeries(imu_t[:k], imu_accel[:k], imu_gyro[:k]),
        actuators=ActuatorSeries(act_t[:n], act_u[:n], act_v[:n]),
        barometer=BarometerSeries(act_t[:n].copy(), baro_d[:n]),
        ground_truth=GroundTruthSeries(gt_t[: n + 1], gt_p[: n + 1], gt_q[: n + 1], gt_v[: n + 1], gt_w[: n + 1]),
        true_biases=BiasSeries(act_t[:n].copy(), bias_a[:n], bias_g[:n]),
        meta=meta,
    )
