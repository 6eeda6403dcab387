"""Time alignment of the 200 Hz IMU stream to the 20 Hz network rate.

For every actuator timestamp the IMU channels are the mean of the samples in
the preceding 50 ms window (a 10-sample boxcar at the nominal rates), while
thruster commands and battery voltage are taken as-is. The stacked input
vector is ordered [accel(3), gyro(3), commands(J), voltage(1)].
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

log = logging.getLogger(__name__)

IMU_CHANNELS = 6
EXTRA_CHANNELS = 1  # battery voltage


@dataclass
class ProprioVector:
    """One stacked proprioceptive input sample; length 7+J."""

    values: np.ndarray
    t: float


@dataclass
class AlignedStream:
    """Columnar sequence of proprioceptive vectors at the network rate."""

    t: np.ndarray  # (n,)
    values: np.ndarray  # (n, 7+J)

    def __len__(self) -> int:
        return len(self.t)

    def __getitem__(self, i: int) -> ProprioVector:
        return ProprioVector(values=self.values[i], t=float(self.t[i]))

    def __iter__(self):
        for i in range(len(self.t)):
            yield self[i]

    @property
    def n_channels(self) -> int:
        return self.values.shape[1]


def input_channel_names(J: int) -> list[str]:
    return (
        ["accel_x", "accel_y", "accel_z", "gyro_x", "gyro_y", "gyro_z"]
        + [f"motor_{j}" for j in range(J)]
        + ["battery_v"]
    )


def align_to_network_rate(record, window_s: float = 0.05, max_gap_s: float = 0.10) -> AlignedStream:
    """Stack IMU, thruster and battery channels at the actuator timestamps.

    Ticks whose averaging window is not fully covered by IMU samples, or that
    contain a gap larger than ``max_gap_s``, are rejected and logged (the
    first actuator tick has no preceding window and is always dropped).
    """
    imu_t = record.imu.t
    act = record.actuators
    n_expected = int(round(window_s * record.meta["imu_rate_hz"]))
    J = act.commands.shape[1]

    rows = []
    times = []
    rejected = 0
    eps = 1e-9
    for m in range(len(act.t)):
        t_a = act.t[m]
        left = np.searchsorted(imu_t, t_a - window_s + eps, side="left")
        right = np.searchsorted(imu_t, t_a + eps, side="left")
        seg_t = imu_t[left:right]
        if len(seg_t) != n_expected or (len(seg_t) > 1 and np.max(np.diff(seg_t)) > max_gap_s):
            rejected += 1
            continue
        accel = record.imu.accel[left:right].mean(axis=0)
        gyro = record.imu.gyro[left:right].mean(axis=0)
        row = np.empty(IMU_CHANNELS + J + EXTRA_CHANNELS)
        row[0:3] = accel
        row[3:6] = gyro
        row[6 : 6 + J] = act.commands[m]
        row[6 + J] = act.battery_voltage[m]
        rows.append(row)
        times.append(t_a)

    if rejected > 1:  # the first tick is expected to drop
        log.warning("alignment rejected %d ticks with incomplete IMU windows", rejected - 1)
    if not rows:
        raise ValueError("no actuator tick had a complete IMU window")
    return AlignedStream(t=np.array(times), values=np.vstack(rows))


def target_velocities(record, aligned: AlignedStream, tol_s: float = 1e-6) -> np.ndarray:
    """Ground-truth body-frame velocity at each aligned timestamp."""
    gt_t = record.ground_truth.t
    idx = np.searchsorted(gt_t, aligned.t - tol_s, side="left")
    if np.any(idx >= len(gt_t)) or np.any(np.abs(gt_t[idx] - aligned.t) > tol_s):
        raise ValueError("aligned timestamps do not match ground-truth samples")
    return record.ground_truth.velocity_body[idx]
