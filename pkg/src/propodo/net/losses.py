"""Training losses over batches of 3-axis velocity residuals.

Both losses average over every sample in the batch (all leading dimensions).
During training they operate in normalized target space; the math is
space-agnostic. The Gaussian negative log-likelihood drops constant terms
and assumes a diagonal covariance exp(2u) per axis.
"""

from __future__ import annotations

import numpy as np


def _flatten(v):
    v = np.asarray(v, dtype=float)
    return v.reshape(-1, v.shape[-1])


def loss_mse(v: np.ndarray, v_hat: np.ndarray) -> float:
    """Mean over samples of the squared residual norm."""
    v, v_hat = _flatten(v), _flatten(v_hat)
    if v.shape != v_hat.shape:
        raise ValueError(f"shape mismatch {v.shape} vs {v_hat.shape}")
    return float(np.mean(np.sum((v - v_hat) ** 2, axis=-1)))


def loss_gnll(v: np.ndarray, v_hat: np.ndarray, u_hat: np.ndarray) -> float:
    """Mean over samples of sum_axis [u + (v - v_hat)^2 / (2 exp(2u))]."""
    v, v_hat, u_hat = _flatten(v), _flatten(v_hat), _flatten(u_hat)
    if not v.shape == v_hat.shape == u_hat.shape:
        raise ValueError("shape mismatch between targets, means and log-stds")
    per_axis = u_hat + (v - v_hat) ** 2 * np.exp(-2.0 * u_hat) / 2.0
    return float(np.mean(np.sum(per_axis, axis=-1)))


def loss_and_grads(kind: str, v: np.ndarray, v_hat: np.ndarray, u_hat: np.ndarray):
    """Loss plus gradients wrt (v_hat, u_hat); shapes preserved."""
    n = int(np.prod(v.shape[:-1]))
    resid = v - v_hat
    if kind == "mse":
        loss = float(np.sum(resid**2) / n)
        d_v = -2.0 * resid / n
        d_u = np.zeros_like(u_hat)
    elif kind == "gnll":
        inv_var = np.exp(-2.0 * u_hat)
        loss = float(np.sum(u_hat + 0.5 * resid**2 * inv_var) / n)
        d_v = -resid * inv_var / n
        d_u = (1.0 - resid**2 * inv_var) / n
    else:
        raise ValueError(f"unknown loss kind {kind!r}")
    return loss, d_v, d_u
