"""Sensor models: IMU with bias random walks, barometric depth."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .._rotations import quat_rotate_inverse
from .params import ImuNoiseParams


@dataclass
class ImuSample:
    t: float
    accel: np.ndarray  # m/s^2, body frame, includes gravity reaction
    gyro: np.ndarray  # rad/s, body frame


@dataclass
class ImuBiasState:
    """Current accelerometer/gyro biases; advanced in place by sample_imu."""

    accel_bias: np.ndarray = field(default_factory=lambda: np.zeros(3))
    gyro_bias: np.ndarray = field(default_factory=lambda: np.zeros(3))

    @classmethod
    def initial(cls, noise: ImuNoiseParams, rng: np.random.Generator) -> "ImuBiasState":
        draws = rng.standard_normal(6)
        return cls(
            accel_bias=noise.accel_bias_init_std * draws[:3],
            gyro_bias=noise.gyro_bias_init_std * draws[3:],
        )


def sample_imu(t, true_state, true_accel_body, bias_state, noise: ImuNoiseParams,
               rng: np.random.Generator, dt: float = 0.005) -> ImuSample:
    """Produce one IMU sample and advance the bias random walk.

    The accelerometer reads the specific force: body acceleration plus bias
    and noise, minus the body-frame gravity vector (a level stationary unit
    reads +9.81 on Z). Biases step by a Gaussian walk with std scaled by
    sqrt(dt); the sample uses the pre-step bias.
    """
    draws = rng.standard_normal(12)
    g_body = quat_rotate_inverse(true_state.orientation, noise.gravity_w)
    accel = (
        np.asarray(true_accel_body, dtype=float)
        + bias_state.accel_bias
        - g_body
        + noise.accel_noise_std * draws[0:3]
    )
    gyro = (
        true_state.angular_velocity_body
        + bias_state.gyro_bias
        + noise.gyro_noise_std * draws[3:6]
    )
    sqrt_dt = np.sqrt(dt)
    bias_state.accel_bias = bias_state.accel_bias + noise.accel_bias_walk_std * sqrt_dt * draws[6:9]
    bias_state.gyro_bias = bias_state.gyro_bias + noise.gyro_bias_walk_std * sqrt_dt * draws[9:12]
    return ImuSample(t=float(t), accel=accel, gyro=gyro)


def sample_barometer_depth(position_w, depth_noise_std: float, rng: np.random.Generator) -> float:
    """Depth reading, positive down: -(world Z) plus Gaussian noise."""
    return float(-position_w[2] + depth_noise_std * rng.standard_normal())
