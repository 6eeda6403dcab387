"""Normalization statistics and training-window sampling.

Windows are fixed-length slices (300 steps, 15 s at 20 Hz) of the aligned
input stream paired with ground-truth body-frame velocities. The train /
validation split is by trajectory so no validation window shares a source
with training data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .alignment import AlignedStream, align_to_network_rate, input_channel_names, target_velocities

SEQ_LEN = 300
MIN_STATS_WINDOWS = 100
STD_FLOOR = 1e-8


@dataclass
class NormStats:
    """Per-channel input statistics and 3-channel velocity-target statistics,
    computed from the training split only."""

    input_mean: np.ndarray
    input_std: np.ndarray
    target_mean: np.ndarray
    target_std: np.ndarray

    def __post_init__(self):
        for name in ("input_mean", "input_std", "target_mean", "target_std"):
            setattr(self, name, np.asarray(getattr(self, name), dtype=float))
        if np.any(self.input_std <= STD_FLOOR) or np.any(self.target_std <= STD_FLOOR):
            raise ValueError("normalization stds must exceed the floor")

    def normalize_inputs(self, x: np.ndarray) -> np.ndarray:
        return (x - self.input_mean) / self.input_std

    def normalize_targets(self, y: np.ndarray) -> np.ndarray:
        return (y - self.target_mean) / self.target_std

    def denormalize_targets(self, y: np.ndarray) -> np.ndarray:
        return y * self.target_std + self.target_mean

    @property
    def n_channels(self) -> int:
        return len(self.input_mean)


@dataclass
class TrainingWindow:
    """15 s of consecutive aligned inputs and body-frame velocity targets."""

    inputs: np.ndarray  # (SEQ_LEN, 7+J)
    targets: np.ndarray  # (SEQ_LEN, 3)
    source_id: str
    start_time: float

    def __post_init__(self):
        if self.inputs.shape[0] != SEQ_LEN or self.targets.shape != (SEQ_LEN, 3):
            raise ValueError(
                f"window must be {SEQ_LEN} steps, got inputs {self.inputs.shape}, "
                f"targets {self.targets.shape}"
            )
        if not (np.all(np.isfinite(self.inputs)) and np.all(np.isfinite(self.targets))):
            raise ValueError("window contains non-finite values")


@dataclass
class SupervisedSequence:
    """One trajectory's aligned inputs with velocity targets."""

    source_id: str
    t: np.ndarray
    inputs: np.ndarray  # (n, 7+J)
    targets: np.ndarray  # (n, 3)

    @classmethod
    def from_record(cls, record, source_id: str) -> "SupervisedSequence":
        aligned = align_to_network_rate(record)
        return cls(
            source_id=source_id,
            t=aligned.t,
            inputs=aligned.values,
            targets=target_velocities(record, aligned),
        )

    def n_window_starts(self, seq_len: int = SEQ_LEN) -> int:
        return max(len(self.t) - seq_len + 1, 0)

    def window(self, start: int, seq_len: int = SEQ_LEN) -> TrainingWindow:
        return TrainingWindow(
            inputs=self.inputs[start : start + seq_len],
            targets=self.targets[start : start + seq_len],
            source_id=self.source_id,
            start_time=float(self.t[start]),
        )


def compute_norm_stats(windows: list[TrainingWindow]) -> NormStats:
    """Per-channel mean/std over every timestep of the training windows."""
    if len(windows) < MIN_STATS_WINDOWS:
        raise ValueError(f"need >= {MIN_STATS_WINDOWS} windows, got {len(windows)}")
    x = np.concatenate([w.inputs for w in windows], axis=0)
    y = np.concatenate([w.targets for w in windows], axis=0)
    x_std = x.std(axis=0)
    dead = np.flatnonzero(x_std <= STD_FLOOR)
    if dead.size:
        names = input_channel_names(x.shape[1] - 7)
        raise ValueError(f"zero-variance input channel: {names[dead[0]]}")
    y_std = y.std(axis=0)
    if np.any(y_std <= STD_FLOOR):
        axis = "xyz"[int(np.flatnonzero(y_std <= STD_FLOOR)[0])]
        raise ValueError(f"zero-variance velocity target channel: v_{axis}")
    return NormStats(x.mean(axis=0), x_std, y.mean(axis=0), y_std)


def sample_windows(
    sequences: list[SupervisedSequence],
    count: int,
    rng: np.random.Generator,
    seq_len: int = SEQ_LEN,
) -> list[TrainingWindow]:
    """Draw ``count`` distinct windows with uniformly random start offsets."""
    starts = [(i, s) for i, seq in enumerate(sequences) for s in range(seq.n_window_starts(seq_len))]
    if count > len(starts):
        raise ValueError(f"requested {count} windows but only {len(starts)} start positions exist")
    if count == 0:
        return []
    chosen = rng.choice(len(starts), size=count, replace=False)
    return [sequences[starts[k][0]].window(starts[k][1], seq_len) for k in sorted(chosen)]


def split_records(ids: list[str], val_fraction: float, rng: np.random.Generator):
    """Split trajectory ids into train/validation sets (by trajectory)."""
    if not 0.0 < val_fraction < 1.0:
        raise ValueError("val_fraction must be in (0, 1)")
    ids = list(ids)
    n_val = max(1, int(round(val_fraction * len(ids))))
    if n_val >= len(ids):
        raise ValueError("validation split would consume every trajectory")
    perm = rng.permutation(len(ids))
    val = sorted(ids[i] for i in perm[:n_val])
    train = sorted(ids[i] for i in perm[n_val:])
    return train, val
