"""Forward evaluation: reference GRU cell, single-step API, batched unroll.

Deployment uses the single-step API exclusively; the temporal context lives
in the carried hidden state, so one input produces one output. The batched
unroll exists for training and for bulk evaluation and matches the
single-step path to floating-point roundoff.
"""

from __future__ import annotations

import numpy as np

from ..dataio.alignment import ProprioVector, input_channel_names
from .kernels import gru_layer_forward
from .params import GruLayerParams, HiddenState, ModelParams, Prediction


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def gru_cell_forward(x: np.ndarray, h: np.ndarray, p: GruLayerParams) -> np.ndarray:
    """One GRU cell step.

    r = sigma(W_r x + b_ir + U_r h + b_hr)
    z = sigma(W_z x + b_iz + U_z h + b_hz)
    n = tanh(W_n x + b_in + r * (U_n h + b_hn))
    h' = (1 - z) * n + z * h
    """
    H = p.hidden_size
    gi = p.w_ih @ x + p.b_ih
    gh = p.w_hh @ h + p.b_hh
    r = _sigmoid(gi[:H] + gh[:H])
    z = _sigmoid(gi[H : 2 * H] + gh[H : 2 * H])
    n = np.tanh(gi[2 * H :] + r * gh[2 * H :])
    return (1.0 - z) * n + z * h


def normalized_input(params: ModelParams, values: np.ndarray) -> np.ndarray:
    """Normalize (and channel-mask) a raw input vector or batch."""
    x = params.norm_stats.normalize_inputs(values)
    if params.input_mask is not None:
        x = x * params.input_mask
    return x


def forward(
    p_t: ProprioVector | np.ndarray,
    h_prev: HiddenState,
    params: ModelParams,
    mode: str = "eval",
    rng: np.random.Generator | None = None,
) -> tuple[Prediction, HiddenState]:
    """Single-step inference: normalize, run the GRU stack, apply the heads.

    The velocity head is denormalized to m/s; the log-std head is shifted by
    the per-axis log target std so the implied variance is in (m/s)^2. In
    train mode the last GRU output passes through inverted dropout.
    """
    values = p_t.values if isinstance(p_t, ProprioVector) else np.asarray(p_t, dtype=float)
    if not np.all(np.isfinite(values)):
        names = input_channel_names(len(values) - 7)
        bad = int(np.flatnonzero(~np.isfinite(values))[0])
        raise ValueError(f"non-finite input channel: {names[bad]}")
    if mode not in ("train", "eval"):
        raise ValueError(f"mode must be 'train' or 'eval', got {mode!r}")

    x = normalized_input(params, values)
    h_new = np.empty_like(h_prev.h)
    for i, layer in enumerate(params.layers):
        h_new[i] = gru_cell_forward(x, h_prev.h[i], layer)
        x = h_new[i]

    d = x
    if mode == "train" and params.dropout_rate > 0.0:
        if rng is None:
            raise ValueError("train mode requires an rng for the dropout mask")
        keep = 1.0 - params.dropout_rate
        d = d * (rng.random(d.shape) >= params.dropout_rate) / keep

    stats = params.norm_stats
    v_hat = stats.target_std * (params.w_v @ d + params.b_v) + stats.target_mean
    u_hat = (params.w_u @ d + params.b_u) + np.log(stats.target_std)
    return Prediction(v_hat=v_hat, u_hat=u_hat), HiddenState(h=h_new)


def unroll_normalized(
    params: ModelParams,
    x_norm: np.ndarray,
    dropout_mask: np.ndarray | None = None,
):
    """Run the GRU stack over a normalized batch, time-major (T, B, C).

    Returns normalized head outputs (v, u) and the per-layer caches used by
    the backward pass: (layer_inputs, hidden_seqs, gate caches, head input).
    """
    T, B, _ = x_norm.shape
    caches = []
    layer_in = x_norm
    for layer in params.layers:
        gi = (layer_in.reshape(T * B, -1) @ layer.w_ih.T + layer.b_ih).reshape(T, B, -1)
        h0 = np.zeros((B, layer.hidden_size))
        hs, r_c, z_c, n_c, ghn_c = gru_layer_forward(
            gi, h0, np.ascontiguousarray(layer.w_hh.T), layer.b_hh
        )
        caches.append((layer_in, hs, r_c, z_c, n_c, ghn_c, h0))
        layer_in = hs

    d = layer_in if dropout_mask is None else layer_in * dropout_mask
    flat = d.reshape(T * B, -1)
    v_norm = (flat @ params.w_v.T + params.b_v).reshape(T, B, 3)
    u_norm = (flat @ params.w_u.T + params.b_u).reshape(T, B, 3)
    return v_norm, u_norm, caches, d


def predict_sequence(params: ModelParams, inputs: np.ndarray):
    """Bulk eval-mode inference over one raw input sequence (N, channels).

    Returns (v_hat, u_hat) arrays in m/s units, matching step-by-step
    forward() with a carried hidden state.
    """
    x = normalized_input(params, np.asarray(inputs, dtype=float))
    v_norm, u_norm, _, _ = unroll_normalized(params, x[:, None, :])
    stats = params.norm_stats
    v_hat = stats.target_std * v_norm[:, 0, :] + stats.target_mean
    u_hat = u_norm[:, 0, :] + np.log(stats.target_std)
    return v_hat, u_hat
