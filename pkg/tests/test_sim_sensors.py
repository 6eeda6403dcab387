import numpy as np
import pytest
from scipy import stats
from scipy.spatial.transform import Rotation

from propodo._rotations import quat_multiply, quat_rotate, rotvec_to_quat
from propodo.sim import (
    ImuBiasState,
    ImuNoiseParams,
    RigidBodyState,
    VehicleParams,
    generate_trajectory,
    make_policy,
    sample_imu,
)


def zero_noise():
    return ImuNoiseParams().zero_noise()


def test_stationary_level_reads_gravity_reaction():
    sample = sample_imu(
        0.0, RigidBodyState(), np.zeros(3), ImuBiasState(), zero_noise(), np.random.default_rng(0)
    )
    np.testing.assert_allclose(sample.accel, [0.0, 0.0, 9.81], atol=1e-12)
    np.testing.assert_allclose(sample.gyro, 0.0, atol=1e-15)


def test_rolled_vehicle_sees_gravity_on_y():
    q = rotvec_to_quat(np.array([np.pi / 2, 0.0, 0.0]))  # +90 deg roll about X
    state = RigidBodyState(orientation=q)
    sample = sample_imu(0.0, state, np.zeros(3), ImuBiasState(), zero_noise(), np.random.default_rng(0))
    # independent oracle: rotate the gravity reaction with scipy
    R = Rotation.from_quat([q[1], q[2], q[3], q[0]])
    expected = -R.inv().apply([0.0, 0.0, -9.81])
    np.testing.assert_allclose(sample.accel, expected, atol=1e-12)
    assert abs(sample.accel[1] - 9.81) < 1e-9
    assert abs(sample.accel[0]) < 1e-9 and abs(sample.accel[2]) < 1e-9


def test_noise_std_monte_carlo():
    noise = ImuNoiseParams(
        accel_bias_walk_std=np.zeros(3),
        gyro_bias_walk_std=np.zeros(3),
        accel_bias_init_std=np.zeros(3),
        gyro_bias_init_std=np.zeros(3),
    )
    rng = np.random.default_rng(42)
    state = RigidBodyState()
    n = 100_000
    acc = np.empty((n, 3))
    for i in range(n):
        acc[i] = sample_imu(0.0, state, np.zeros(3), ImuBiasState(), noise, rng).accel
    emp = acc.std(axis=0)
    np.testing.assert_allclose(emp, noise.accel_noise_std, rtol=0.05)


def test_zero_noise_is_deterministic_function_of_truth():
    params = VehicleParams()
    rec1 = generate_trajectory(make_policy("piecewise", params), 40.0, 5, params, zero_noise())
    rec2 = generate_trajectory(make_policy("piecewise", params), 40.0, 5, params, zero_noise())
    assert np.array_equal(rec1.imu.accel, rec2.imu.accel)
    assert np.array_equal(rec1.imu.gyro, rec2.imu.gyro)


def _rot_matrix(q):
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def test_dead_reckoning_oracle_zero_noise():
    """Strapdown integration of the noise-free IMU stream reproduces the
    ground-truth trajectory within 0.1% of path length."""
    params = VehicleParams()
    rec = generate_trajectory(
        make_policy("piecewise", params), 60.0, 11, params, zero_noise(), depth_noise_std=0.0
    )
    g_w = np.array([0.0, 0.0, -9.81])
    dt = 1.0 / rec.meta["imu_rate_hz"]
    gt = rec.ground_truth
    p = gt.position[0].copy()
    q = gt.orientation[0].copy()
    v = gt.velocity_body[0].copy()
    for k in range(len(rec.imu.t)):
        # body-frame acceleration: specific force plus gravity in body frame
        a = rec.imu.accel[k] + _rot_matrix(q).T @ g_w
        w = rec.imu.gyro[k]
        v = v + (a - np.cross(w, v)) * dt
        q = quat_multiply(q, rotvec_to_quat(w * dt))
        q = q / np.linalg.norm(q)
        p = p + _rot_matrix(q) @ v * dt
    err = np.linalg.norm(p - gt.position[-1])
    assert err < 1e-3 * rec.path_length()


def test_quaternion_norm_over_long_rollout():
    params = VehicleParams()
    rec = generate_trajectory(
        make_policy("piecewise", params), 5000.0, 3, params, zero_noise()
    )  # 10^6 IMU-rate steps
    norms = np.linalg.norm(rec.ground_truth.orientation, axis=1)
    assert np.max(np.abs(norms - 1.0)) < 1e-9


def test_barometer_noise_chi2():
    params = VehicleParams()
    sigma = 0.01
    rec = generate_trajectory(
        make_policy("piecewise", params), 550.0, 13, params, zero_noise(), depth_noise_std=sigma
    )
    z = rec.ground_truth.position[:-1, 2]
    resid = rec.barometer.depth + z
    n = len(resid)
    assert n >= 10_000
    chi2 = np.sum((resid / sigma) ** 2)
    lo, hi = stats.chi2.ppf([0.025, 0.975], df=n)
    assert lo < chi2 < hi


def test_bias_walk_advances_biases():
    noise = ImuNoiseParams()
    rng = np.random.default_rng(0)
    bias = ImuBiasState()
    state = RigidBodyState()
    for _ in range(200):
        sample_imu(0.0, state, np.zeros(3), bias, noise, rng)
    assert np.linalg.norm(bias.accel_bias) > 0
    assert np.linalg.norm(bias.gyro_bias) > 0
