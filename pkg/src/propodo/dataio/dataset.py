"""On-disk dataset schema: one directory per trajectory, columnar CSV per
stream plus a JSON metadata file.

Layout::

    <root>/traj_000/imu.csv            t, ax, ay, az, gx, gy, gz
    <root>/traj_000/actuators.csv      t, u0..u{J-1}, voltage
    <root>/traj_000/barometer.csv      t, depth
    <root>/traj_000/ground_truth.csv   t, px..pz, qw..qz, vx..vz, wx..wz
    <root>/traj_000/biases.csv         t, bax..baz, bgx..bgz   (optional)
    <root>/traj_000/meta.json

Floats are written with shortest round-trip repr, so a write/read cycle is
bitwise lossless. The ground-truth velocity columns are the reference
body-frame velocity; for ingested real logs they carry the external
reference estimate instead of simulator truth.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import polars as pl

from ..config import SCHEMA_VERSION, load_json, save_json
from ..sim.trajectory import (
    ActuatorSeries,
    BarometerSeries,
    BiasSeries,
    GroundTruthSeries,
    ImuSeries,
    TrajectoryRecord,
)


class DatasetError(ValueError):
    """Raised when an on-disk dataset fails validation."""


def _write_csv(path: Path, columns: dict):
    pl.DataFrame(columns).write_csv(path)


def _read_csv(path: Path, required: list[str]) -> pl.DataFrame:
    if not path.is_file():
        raise DatasetError(f"{path}: missing stream file")
    try:
        df = pl.read_csv(path)
    except Exception as err:  # polars reports the offending row
        raise DatasetError(f"{path}: {err}") from err
    missing = [c for c in required if c not in df.columns]
    if missing:
        raise DatasetError(f"{path}: missing columns {missing}")
    t = df["t"].to_numpy()
    if len(t) == 0:
        raise DatasetError(f"{path}: empty stream")
    if np.any(np.diff(t) <= 0):
        bad = int(np.flatnonzero(np.diff(t) <= 0)[0]) + 2  # header + 1-based
        raise DatasetError(f"{path}: non-monotone timestamps near line {bad}")
    return df


def write_trajectory(record: TrajectoryRecord, directory) -> Path:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    imu = record.imu
    _write_csv(
        d / "imu.csv",
        {
            "t": imu.t,
            "ax": imu.accel[:, 0], "ay": imu.accel[:, 1], "az": imu.accel[:, 2],
            "gx": imu.gyro[:, 0], "gy": imu.gyro[:, 1], "gz": imu.gyro[:, 2],
        },
    )
    act = record.actuators
    cols = {"t": act.t}
    for j in range(act.commands.shape[1]):
        cols[f"u{j}"] = act.commands[:, j]
    cols["voltage"] = act.battery_voltage
    _write_csv(d / "actuators.csv", cols)
    _write_csv(d / "barometer.csv", {"t": record.barometer.t, "depth": record.barometer.depth})
    gt = record.ground_truth
    _write_csv(
        d / "ground_truth.csv",
        {
            "t": gt.t,
            "px": gt.position[:, 0], "py": gt.position[:, 1], "pz": gt.position[:, 2],
            "qw": gt.orientation[:, 0], "qx": gt.orientation[:, 1],
            "qy": gt.orientation[:, 2], "qz": gt.orientation[:, 3],
            "vx": gt.velocity_body[:, 0], "vy": gt.velocity_body[:, 1], "vz": gt.velocity_body[:, 2],
            "wx": gt.omega_body[:, 0], "wy": gt.omega_body[:, 1], "wz": gt.omega_body[:, 2],
        },
    )
    b = record.true_biases
    if len(b.t):
        _write_csv(
            d / "biases.csv",
            {
                "t": b.t,
                "bax": b.accel_bias[:, 0], "bay": b.accel_bias[:, 1], "baz": b.accel_bias[:, 2],
                "bgx": b.gyro_bias[:, 0], "bgy": b.gyro_bias[:, 1], "bgz": b.gyro_bias[:, 2],
            },
        )
    save_json(record.meta, d / "meta.json")
    return d


def read_trajectory(directory) -> TrajectoryRecord:
    d = Path(directory)
    meta_path = d / "meta.json"
    if not meta_path.is_file():
        raise DatasetError(f"{meta_path}: missing metadata")
    meta = load_json(meta_path)
    version = meta.get("schema_version")
    if version != SCHEMA_VERSION:
        raise DatasetError(f"{meta_path}: schema version {version}, expected {SCHEMA_VERSION}")
    J = int(meta["thruster_count"])

    imu_df = _read_csv(d / "imu.csv", ["t", "ax", "ay", "az", "gx", "gy", "gz"])
    act_cols = ["t"] + [f"u{j}" for j in range(J)] + ["voltage"]
    act_df = _read_csv(d / "actuators.csv", act_cols)
    baro_df = _read_csv(d / "barometer.csv", ["t", "depth"])
    gt_cols = ["t", "px", "py", "pz", "qw", "qx", "qy", "qz", "vx", "vy", "vz", "wx", "wy", "wz"]
    gt_df = _read_csv(d / "ground_truth.csv", gt_cols)

    bias_path = d / "biases.csv"
    if bias_path.is_file():
        b_df = _read_csv(bias_path, ["t", "bax", "bay", "baz", "bgx", "bgy", "bgz"])
        biases = BiasSeries(
            t=b_df["t"].to_numpy(),
            accel_bias=b_df[["bax", "bay", "baz"]].to_numpy(),
            gyro_bias=b_df[["bgx", "bgy", "bgz"]].to_numpy(),
        )
    else:
        biases = BiasSeries(t=np.empty(0), accel_bias=np.empty((0, 3)), gyro_bias=np.empty((0, 3)))

    n_ticks = len(act_df)
    substeps = int(round(meta["imu_rate_hz"] / meta["tick_rate_hz"]))
    if len(imu_df) != n_ticks * substeps:
        raise DatasetError(
            f"{d / 'imu.csv'}: {len(imu_df)} rows inconsistent with "
            f"{n_ticks} actuator ticks x {substeps} substeps"
        )
    if len(gt_df) != n_ticks + 1:
        raise DatasetError(f"{d / 'ground_truth.csv'}: expected {n_ticks + 1} rows, got {len(gt_df)}")

    return TrajectoryRecord(
        imu=ImuSeries(
            t=imu_df["t"].to_numpy(),
            accel=imu_df[["ax", "ay", "az"]].to_numpy(),
            gyro=imu_df[["gx", "gy", "gz"]].to_numpy(),
        ),
        actuators=ActuatorSeries(
            t=act_df["t"].to_numpy(),
            commands=act_df[[f"u{j}" for j in range(J)]].to_numpy(),
            battery_voltage=act_df["voltage"].to_numpy(),
        ),
        barometer=BarometerSeries(t=baro_df["t"].to_numpy(), depth=baro_df["depth"].to_numpy()),
        ground_truth=GroundTruthSeries(
            t=gt_df["t"].to_numpy(),
            position=gt_df[["px", "py", "pz"]].to_numpy(),
            orientation=gt_df[["qw", "qx", "qy", "qz"]].to_numpy(),
            velocity_body=gt_df[["vx", "vy", "vz"]].to_numpy(),
            omega_body=gt_df[["wx", "wy", "wz"]].to_numpy(),
        ),
        true_biases=biases,
        meta=meta,
    )


def write_dataset(records: dict[str, TrajectoryRecord] | list[TrajectoryRecord], root) -> Path:
    """Write a set of trajectories; list input gets traj_### names."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    if isinstance(records, list):
        records = {f"traj_{i:03d}": rec for i, rec in enumerate(records)}
    for name, rec in records.items():
        write_trajectory(rec, root / name)
    save_json({"schema_version": SCHEMA_VERSION, "trajectories": sorted(records)}, root / "dataset.json")
    return root


def read_dataset(root) -> dict[str, TrajectoryRecord]:
    root = Path(root)
    index = root / "dataset.json"
    if index.is_file():
        names = load_json(index)["trajectories"]
    else:
        names = sorted(p.name for p in root.iterdir() if (p / "meta.json").is_file())
    if not names:
        raise DatasetError(f"{root}: no trajectories found")
    return {name: read_trajectory(root / name) for name in names}
