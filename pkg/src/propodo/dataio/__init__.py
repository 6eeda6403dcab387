"""Dataset schema, stream alignment, normalization and window sampling."""

from .alignment import (
    AlignedStream,
    ProprioVector,
    align_to_network_rate,
    input_channel_names,
    target_velocities,
)
from .dataset import DatasetError, read_dataset, read_trajectory, write_dataset, write_trajectory
from .windows import (
    SEQ_LEN,
    NormStats,
    SupervisedSequence,
    TrainingWindow,
    compute_norm_stats,
    sample_windows,
    split_records,
)

__all__ = [
    "AlignedStream",
    "DatasetError",
    "NormStats",
    "ProprioVector",
    "SEQ_LEN",
    "SupervisedSequence",
    "TrainingWindow",
    "align_to_network_rate",
    "compute_norm_stats",
    "input_channel_names",
    "read_dataset",
    "read_trajectory",
    "sample_windows",
    "split_records",
    "target_velocities",
    "write_dataset",
    "write_trajectory",
]
