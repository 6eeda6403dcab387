import numpy as np
import pytest

from propodo.config import SCHEMA_VERSION
from propodo.dataio import (
    DatasetError,
    NormStats,
    SupervisedSequence,
    align_to_network_rate,
    compute_norm_stats,
    read_dataset,
    read_trajectory,
    sample_windows,
    split_records,
    target_velocities,
    write_dataset,
    write_trajectory,
)
from propodo.sim import (
    ActuatorSeries,
    BarometerSeries,
    BiasSeries,
    GroundTruthSeries,
    ImuNoiseParams,
    ImuSeries,
    TrajectoryRecord,
    VehicleParams,
    generate_trajectory,
    make_policy,
)


def synthetic_record(duration=30.0, J=8, accel_fn=None):
    """Hand-built record with analytically known IMU content."""
    imu_rate, tick_rate = 200.0, 20.0
    n_ticks = int(duration * tick_rate)
    n_imu = int(duration * imu_rate)
    imu_t = np.arange(n_imu) / imu_rate
    accel = np.zeros((n_imu, 3))
    if accel_fn is not None:
        accel[:, 0] = accel_fn(imu_t)
    act_t = np.arange(n_ticks) / tick_rate
    gt_t = np.arange(n_ticks + 1) / tick_rate
    quat = np.zeros((n_ticks + 1, 4))
    quat[:, 0] = 1.0
    rng = np.random.default_rng(0)
    meta = {
        "schema_version": SCHEMA_VERSION,
        "imu_rate_hz": imu_rate,
        "tick_rate_hz": tick_rate,
        "thruster_count": J,
    }
    return TrajectoryRecord(
        imu=ImuSeries(imu_t, accel, np.zeros((n_imu, 3))),
        actuators=ActuatorSeries(act_t, rng.uniform(-1, 1, (n_ticks, J)), np.full(n_ticks, 16.0)),
        barometer=BarometerSeries(act_t.copy(), np.zeros(n_ticks)),
        ground_truth=GroundTruthSeries(
            gt_t, rng.standard_normal((n_ticks + 1, 3)), quat,
            rng.standard_normal((n_ticks + 1, 3)), np.zeros((n_ticks + 1, 3)),
        ),
        true_biases=BiasSeries(act_t.copy(), np.zeros((n_ticks, 3)), np.zeros((n_ticks, 3))),
        meta=meta,
    )


@pytest.fixture(scope="module")
def sim_record():
    params = VehicleParams()
    return generate_trajectory(make_policy("piecewise", params), 60.0, 8, params, ImuNoiseParams())


# ---------------------------------------------------------------- alignment


def test_constant_imu_passes_through():
    rec = synthetic_record(accel_fn=lambda t: np.full_like(t, 2.5))
    aligned = align_to_network_rate(rec)
    np.testing.assert_allclose(aligned.values[:, 0], 2.5, atol=1e-12)


@pytest.mark.parametrize("freq", [60.0, 100.0])
def test_sinusoid_matches_analytic_boxcar(freq):
    phase = 0.7
    rec = synthetic_record(accel_fn=lambda t: np.sin(2 * np.pi * freq * t + phase))
    aligned = align_to_network_rate(rec)
    # closed-form mean of N samples of a sinusoid ending at each tick
    dt, N = 1 / 200.0, 10
    for i in range(0, len(aligned), 37):
        t_a = aligned.t[i]
        t0 = t_a - (N - 1) * dt
        z = np.exp(2j * np.pi * freq * dt)
        if abs(z - 1.0) < 1e-12:
            expected = np.sin(2 * np.pi * freq * t0 + phase)
        else:
            geom = (1 - z**N) / (1 - z) / N
            expected = np.imag(np.exp(1j * (2 * np.pi * freq * t0 + phase)) * geom)
        assert abs(aligned.values[i, 0] - expected) < 1e-9


def test_output_timestamps_are_actuator_timestamps():
    rec = synthetic_record()
    aligned = align_to_network_rate(rec)
    # first tick has no preceding 50 ms window and is dropped
    assert len(aligned) == len(rec.actuators.t) - 1
    np.testing.assert_array_equal(aligned.t, rec.actuators.t[1:])


def test_alignment_channel_order(sim_record):
    aligned = align_to_network_rate(sim_record)
    J = sim_record.J
    assert aligned.n_channels == 7 + J
    i = 100
    m = np.searchsorted(sim_record.actuators.t, aligned.t[i])
    np.testing.assert_array_equal(aligned.values[i, 6 : 6 + J], sim_record.actuators.commands[m])
    assert aligned.values[i, 6 + J] == sim_record.actuators.battery_voltage[m]


def test_alignment_rejects_gappy_window(sim_record):
    rec = sim_record
    import copy

    broken = copy.deepcopy(rec)
    # knock out IMU samples inside one averaging window
    keep = np.ones(len(broken.imu.t), dtype=bool)
    keep[2001:2004] = False
    broken.imu.t = broken.imu.t[keep]
    broken.imu.accel = broken.imu.accel[keep]
    broken.imu.gyro = broken.imu.gyro[keep]
    aligned_full = align_to_network_rate(rec)
    aligned_broken = align_to_network_rate(broken)
    assert len(aligned_broken) == len(aligned_full) - 1


def test_targets_match_rotated_world_velocity(sim_record):
    aligned = align_to_network_rate(sim_record)
    targets = target_velocities(sim_record, aligned)
    gt = sim_record.ground_truth
    idx = np.searchsorted(gt.t, aligned.t - 1e-9)
    for k in range(0, len(idx), 101):
        i = idx[k]
        w, x, y, z = gt.orientation[i]
        R = np.array(
            [
                [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
                [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
                [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
            ]
        )
        v_world = R @ gt.velocity_body[i]
        np.testing.assert_allclose(targets[k], R.T @ v_world, atol=1e-12)


# ---------------------------------------------------------------- norm stats


def _sequences(record, name="traj"):
    return [SupervisedSequence.from_record(record, name)]


def test_norm_stats_self_normalization(sim_record):
    seqs = _sequences(sim_record)
    windows = sample_windows(seqs, 120, np.random.default_rng(0))
    stats = compute_norm_stats(windows)
    x = np.concatenate([stats.normalize_inputs(w.inputs) for w in windows])
    y = np.concatenate([stats.normalize_targets(w.targets) for w in windows])
    assert np.max(np.abs(x.mean(axis=0))) < 1e-10
    np.testing.assert_allclose(x.std(axis=0), 1.0, atol=1e-10)
    assert np.max(np.abs(y.mean(axis=0))) < 1e-10
    np.testing.assert_allclose(y.std(axis=0), 1.0, atol=1e-10)


def test_norm_stats_doubled_dataset_invariant(sim_record):
    windows = sample_windows(_sequences(sim_record), 120, np.random.default_rng(1))
    s1 = compute_norm_stats(windows)
    s2 = compute_norm_stats(windows + windows)
    np.testing.assert_allclose(s1.input_mean, s2.input_mean, atol=1e-12)
    np.testing.assert_allclose(s1.input_std, s2.input_std, atol=1e-12)


def test_norm_stats_zero_variance_channel_errors(sim_record):
    windows = sample_windows(_sequences(sim_record), 120, np.random.default_rng(2))
    for w in windows:
        w.inputs = w.inputs.copy()
        w.inputs[:, 7] = 0.0  # motor_1 channel
    with pytest.raises(ValueError, match="motor_1"):
        compute_norm_stats(windows)


def test_norm_stats_requires_enough_windows(sim_record):
    windows = sample_windows(_sequences(sim_record), 10, np.random.default_rng(3))
    with pytest.raises(ValueError, match="100"):
        compute_norm_stats(windows)


def test_normalize_denormalize_identity():
    stats = NormStats(np.zeros(15), np.full(15, 2.0), np.array([0.1, -0.2, 0.3]), np.full(3, 0.4))
    y = np.random.default_rng(0).standard_normal((50, 3))
    np.testing.assert_allclose(stats.denormalize_targets(stats.normalize_targets(y)), y, atol=1e-12)


# ------------------------------------------------------------------ windows


def test_sample_windows_zero_count(sim_record):
    assert sample_windows(_sequences(sim_record), 0, np.random.default_rng(0)) == []


def test_sample_windows_deterministic(sim_record):
    seqs = _sequences(sim_record)
    w1 = sample_windows(seqs, 50, np.random.default_rng(7))
    w2 = sample_windows(seqs, 50, np.random.default_rng(7))
    assert [w.start_time for w in w1] == [w.start_time for w in w2]


def test_sample_windows_exhaustion_errors(sim_record):
    seqs = _sequences(sim_record)
    with pytest.raises(ValueError, match="start positions"):
        sample_windows(seqs, 10**6, np.random.default_rng(0))


def test_split_by_trajectory_is_disjoint():
    ids = [f"traj_{i:03d}" for i in range(10)]
    train, val = split_records(ids, 0.25, np.random.default_rng(5))
    assert set(train) & set(val) == set()
    assert sorted(train + val) == ids


# ------------------------------------------------------------------ dataset


def test_round_trip_bitwise(tmp_path, sim_record):
    write_trajectory(sim_record, tmp_path / "traj_000")
    back = read_trajectory(tmp_path / "traj_000")
    assert np.array_equal(back.imu.accel, sim_record.imu.accel)
    assert np.array_equal(back.imu.gyro, sim_record.imu.gyro)
    assert np.array_equal(back.actuators.commands, sim_record.actuators.commands)
    assert np.array_equal(back.actuators.battery_voltage, sim_record.actuators.battery_voltage)
    assert np.array_equal(back.barometer.depth, sim_record.barometer.depth)
    assert np.array_equal(back.ground_truth.position, sim_record.ground_truth.position)
    assert np.array_equal(back.ground_truth.orientation, sim_record.ground_truth.orientation)
    assert np.array_equal(back.true_biases.gyro_bias, sim_record.true_biases.gyro_bias)


def test_truncated_file_errors(tmp_path, sim_record):
    d = write_trajectory(sim_record, tmp_path / "traj_000")
    imu = d / "imu.csv"
    text = imu.read_text()
    imu.write_text(text[: len(text) // 2].rsplit("\n", 1)[0])
    with pytest.raises(DatasetError, match="imu.csv"):
        read_trajectory(d)


def test_version_mismatch_rejected(tmp_path, sim_record):
    d = write_trajectory(sim_record, tmp_path / "traj_000")
    meta = (d / "meta.json").read_text().replace(f'"schema_version": {SCHEMA_VERSION}', '"schema_version": 999')
    (d / "meta.json").write_text(meta)
    with pytest.raises(DatasetError, match="schema version"):
        read_trajectory(d)


def test_nonmonotone_timestamps_rejected(tmp_path, sim_record):
    d = write_trajectory(sim_record, tmp_path / "traj_000")
    path = d / "barometer.csv"
    lines = path.read_text().splitlines()
    lines[5], lines[6] = lines[6], lines[5]
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(DatasetError, match="non-monotone"):
        read_trajectory(d)


def test_missing_column_rejected(tmp_path, sim_record):
    d = write_trajectory(sim_record, tmp_path / "traj_000")
    path = d / "barometer.csv"
    path.write_text(path.read_text().replace("t,depth", "t,pressure"))
    with pytest.raises(DatasetError, match="depth"):
        read_trajectory(d)


def test_six_thruster_schema(tmp_path):
    alloc = VehicleParams().allocation_matrix[:, :6]
    params = VehicleParams(thruster_count=6, allocation_matrix=alloc)
    rec = generate_trajectory(make_policy("piecewise", params), 30.0, 3, params, ImuNoiseParams())
    write_dataset([rec], tmp_path)
    back = read_dataset(tmp_path)["traj_000"]
    assert back.meta["thruster_count"] == 6
    aligned = align_to_network_rate(back)
    assert aligned.n_channels == 13  # 7 + J
