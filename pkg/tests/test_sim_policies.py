import numpy as np
import pytest

from propodo.sim import ImuNoiseParams, VehicleParams, generate_trajectory, make_policy


@pytest.fixture(scope="module")
def params():
    return VehicleParams()


@pytest.fixture(scope="module")
def noise():
    return ImuNoiseParams()


def test_same_seed_reproduces_record_bitwise(params, noise):
    a = generate_trajectory(make_policy("piecewise", params), 40.0, 21, params, noise)
    b = generate_trajectory(make_policy("piecewise", params), 40.0, 21, params, noise)
    assert np.array_equal(a.imu.accel, b.imu.accel)
    assert np.array_equal(a.actuators.commands, b.actuators.commands)
    assert np.array_equal(a.actuators.battery_voltage, b.actuators.battery_voltage)
    assert np.array_equal(a.barometer.depth, b.barometer.depth)
    assert np.array_equal(a.ground_truth.position, b.ground_truth.position)
    assert np.array_equal(a.true_biases.accel_bias, b.true_biases.accel_bias)


def test_piecewise_speed_histogram(params, noise):
    rec = generate_trajectory(make_policy("piecewise", params), 300.0, 2, params, noise)
    speeds = rec.speeds()
    assert speeds.min() >= 0.0
    assert speeds.max() <= 0.8
    assert np.mean(speeds > 0.5) >= 0.05


def test_station_keeping_is_quiet(params, noise):
    rec = generate_trajectory(make_policy("station_keeping", params), 120.0, 2, params, noise)
    rms = np.sqrt(np.mean(rec.speeds() ** 2))
    assert rms < 0.05


def test_waypoint_square_visits_corners(params, noise):
    rec = generate_trajectory(make_policy("waypoint_square", params), 240.0, 2, params, noise)
    pos = rec.ground_truth.position
    # reaches both far corners of the 2 m square
    assert pos[:, 0].max() > 1.5
    assert pos[:, 1].max() > 1.5
    assert rec.path_length() > 10.0


def test_attitude_hold_tilts_the_vehicle(params, noise):
    rec = generate_trajectory(make_policy("attitude_hold", params), 120.0, 2, params, noise)
    q = rec.ground_truth.orientation
    # tilt angle between body z and world z
    tilt = np.arccos(np.clip(1 - 2 * (q[:, 1] ** 2 + q[:, 2] ** 2), -1, 1))
    assert np.degrees(tilt).max() > 10.0


def test_all_streams_cover_same_span(params, noise):
    rec = generate_trajectory(make_policy("smooth", params), 45.0, 2, params, noise)
    assert rec.imu.t[0] == 0.0
    assert rec.actuators.t[0] == 0.0
    assert abs(rec.imu.t[-1] - (45.0 - 1 / 200.0)) < 1e-9
    assert abs(rec.ground_truth.t[-1] - 45.0) < 1e-9
    assert len(rec.barometer.t) == len(rec.actuators.t)
    dt = np.diff(rec.imu.t)
    assert np.all(dt > 0)
    np.testing.assert_allclose(dt, 1 / 200.0, atol=1e-9)


def test_duration_precondition(params, noise):
    with pytest.raises(ValueError, match="duration"):
        generate_trajectory(make_policy("piecewise", params), 10.0, 2, params, noise)


def test_unknown_policy_name(params):
    with pytest.raises(ValueError, match="unknown policy"):
        make_policy("teleport", params)
