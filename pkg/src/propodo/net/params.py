"""Network parameter containers and initialization.

Architecture: a stack of GRU layers (default 3, hidden 40) fed by the
normalized proprioceptive vector, 50% inverted dropout on the last GRU
output, and two parallel linear heads producing the velocity mean and the
per-axis log-std. Gate order in the stacked weight rows is (reset, update,
candidate), with the recurrent bias applied inside the reset product.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..dataio.windows import NormStats

HIDDEN_SIZE = 40
N_LAYERS = 3
DROPOUT_RATE = 0.5


@dataclass
class GruLayerParams:
    w_ih: np.ndarray  # (3h, in)
    w_hh: np.ndarray  # (3h, h)
    b_ih: np.ndarray  # (3h,)
    b_hh: np.ndarray  # (3h,)

    def __post_init__(self):
        h3, _ = self.w_ih.shape
        if h3 % 3 != 0 or self.w_hh.shape != (h3, h3 // 3):
            raise ValueError("inconsistent GRU layer shapes")
        if self.b_ih.shape != (h3,) or self.b_hh.shape != (h3,):
            raise ValueError("inconsistent GRU bias shapes")
        for a in (self.w_ih, self.w_hh, self.b_ih, self.b_hh):
            if not np.all(np.isfinite(a)):
                raise ValueError("non-finite GRU parameters")

    @property
    def hidden_size(self) -> int:
        return self.w_hh.shape[1]

    @property
    def input_size(self) -> int:
        return self.w_ih.shape[1]


@dataclass
class ModelParams:
    layers: list[GruLayerParams]
    w_v: np.ndarray  # (3, h) velocity head
    b_v: np.ndarray
    w_u: np.ndarray  # (3, h) log-std head
    b_u: np.ndarray
    norm_stats: NormStats
    dropout_rate: float = DROPOUT_RATE
    input_mask: np.ndarray | None = None  # 0/1 per channel, applied post-normalization

    @property
    def hidden_size(self) -> int:
        return self.layers[0].hidden_size

    @property
    def n_layers(self) -> int:
        return len(self.layers)

    @property
    def input_size(self) -> int:
        return self.layers[0].input_size

    def param_items(self) -> list[tuple[str, np.ndarray]]:
        """Flat (name, array) view over every trainable tensor, fixed order."""
        items = []
        for i, layer in enumerate(self.layers):
            items += [
                (f"layer{i}.w_ih", layer.w_ih),
                (f"layer{i}.w_hh", layer.w_hh),
                (f"layer{i}.b_ih", layer.b_ih),
                (f"layer{i}.b_hh", layer.b_hh),
            ]
        items += [("w_v", self.w_v), ("b_v", self.b_v), ("w_u", self.w_u), ("b_u", self.b_u)]
        return items

    def copy(self) -> "ModelParams":
        return ModelParams(
            layers=[
                GruLayerParams(l.w_ih.copy(), l.w_hh.copy(), l.b_ih.copy(), l.b_hh.copy())
                for l in self.layers
            ],
            w_v=self.w_v.copy(),
            b_v=self.b_v.copy(),
            w_u=self.w_u.copy(),
            b_u=self.b_u.copy(),
            norm_stats=self.norm_stats,
            dropout_rate=self.dropout_rate,
            input_mask=None if self.input_mask is None else self.input_mask.copy(),
        )


@dataclass
class HiddenState:
    """Per-layer carried GRU state; zero at every sequence start."""

    h: np.ndarray  # (n_layers, hidden)

    @classmethod
    def zeros(cls, n_layers: int = N_LAYERS, hidden: int = HIDDEN_SIZE) -> "HiddenState":
        return cls(h=np.zeros((n_layers, hidden)))

    def copy(self) -> "HiddenState":
        return HiddenState(self.h.copy())


@dataclass
class Prediction:
    v_hat: np.ndarray  # m/s, body frame
    u_hat: np.ndarray  # log-std, m/s units

    def variance(self) -> np.ndarray:
        """Per-axis velocity variance, (m/s)^2."""
        return np.exp(2.0 * self.u_hat)


@dataclass
class TrainConfig:
    batch: int = 128
    lr: float = 1e-3
    milestones: tuple = (1500, 2500, 3500)
    gamma: float = 0.2
    loss_switch_iter: int = 3000
    total_iters: int = 4000
    seed: int = 0
    seq_len: int = 300
    val_interval: int = 100
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8

    def __post_init__(self):
        self.milestones = tuple(self.milestones)
        if not self.loss_switch_iter < self.total_iters:
            raise ValueError("loss_switch_iter must precede total_iters")
        if any(b <= a for a, b in zip(self.milestones, self.milestones[1:])):
            raise ValueError("milestones must be strictly increasing")


def count_params(params: ModelParams) -> int:
    return int(sum(a.size for _, a in params.param_items()))


def init_model(
    n_channels: int,
    stats: NormStats,
    rng: np.random.Generator,
    hidden: int = HIDDEN_SIZE,
    n_layers: int = N_LAYERS,
    dropout_rate: float = DROPOUT_RATE,
    input_mask: np.ndarray | None = None,
) -> ModelParams:
    """Uniform +-1/sqrt(h) weight init, zero biases, seed-controlled."""
    bound = 1.0 / np.sqrt(hidden)
    layers = []
    in_size = n_channels
    for _ in range(n_layers):
        layers.append(
            GruLayerParams(
                w_ih=rng.uniform(-bound, bound, size=(3 * hidden, in_size)),
                w_hh=rng.uniform(-bound, bound, size=(3 * hidden, hidden)),
                b_ih=np.zeros(3 * hidden),
                b_hh=np.zeros(3 * hidden),
            )
        )
        in_size = hidden
    return ModelParams(
        layers=layers,
        w_v=rng.uniform(-bound, bound, size=(3, hidden)),
        b_v=np.zeros(3),
        w_u=rng.uniform(-bound, bound, size=(3, hidden)),
        b_u=np.zeros(3),
        norm_stats=stats,
        dropout_rate=dropout_rate,
        input_mask=None if input_mask is None else np.asarray(input_mask, dtype=float),
    )
