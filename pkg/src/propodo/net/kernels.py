"""Compiled GRU sequence kernels for training-time unrolls.

The input-to-hidden products and all weight-gradient reductions are large
single GEMMs handled by the callers in numpy; these kernels run the
sequential recurrence (and its exact reverse pass) over a whole batch.
Array layout is time-major: (T, B, features).
"""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def gru_layer_forward(gi, h0, w_hhT, b_hh):
    """Scan one GRU layer over a sequence.

    gi: (T, B, 3h) precomputed x @ w_ih.T + b_ih, gate order (r, z, n).
    Returns the hidden sequence and the gate caches needed for backward.
    """
    T, B, H3 = gi.shape
    H = H3 // 3
    hs = np.empty((T, B, H))
    r_c = np.empty((T, B, H))
    z_c = np.empty((T, B, H))
    n_c = np.empty((T, B, H))
    ghn_c = np.empty((T, B, H))
    h = h0.copy()
    for t in range(T):
        gh = h @ w_hhT
        for b in range(B):
            for k in range(H):
                r = 1.0 / (1.0 + math.exp(-(gi[t, b, k] + gh[b, k] + b_hh[k])))
                z = 1.0 / (1.0 + math.exp(-(gi[t, b, H + k] + gh[b, H + k] + b_hh[H + k])))
                ghn = gh[b, 2 * H + k] + b_hh[2 * H + k]
                n = math.tanh(gi[t, b, 2 * H + k] + r * ghn)
                r_c[t, b, k] = r
                z_c[t, b, k] = z
                n_c[t, b, k] = n
                ghn_c[t, b, k] = ghn
                hv = (1.0 - z) * n + z * h[b, k]
                h[b, k] = hv
                hs[t, b, k] = hv
    return hs, r_c, z_c, n_c, ghn_c


@njit(cache=True)
def gru_layer_backward(d_hs, hs, r_c, z_c, n_c, ghn_c, h0, w_hh):
    """Exact reverse pass of gru_layer_forward.

    d_hs: (T, B, h) loss gradient wrt each emitted hidden state.
    Returns per-step gate pre-activation gradients dgi/dgh (for the weight
    GEMMs outside) and the gradient wrt the initial hidden state.
    """
    T, B, H = d_hs.shape
    dgi = np.empty((T, B, 3 * H))
    dgh = np.empty((T, B, 3 * H))
    dh = np.zeros((B, H))
    for t in range(T - 1, -1, -1):
        for b in range(B):
            for k in range(H):
                d = d_hs[t, b, k] + dh[b, k]
                r = r_c[t, b, k]
                z = z_c[t, b, k]
                n = n_c[t, b, k]
                hp = h0[b, k] if t == 0 else hs[t - 1, b, k]
                dn = d * (1.0 - z)
                dz = d * (hp - n)
                dpre_n = dn * (1.0 - n * n)
                dr = dpre_n * ghn_c[t, b, k]
                dpre_r = dr * r * (1.0 - r)
                dpre_z = dz * z * (1.0 - z)
                dgi[t, b, k] = dpre_r
                dgi[t, b, H + k] = dpre_z
                dgi[t, b, 2 * H + k] = dpre_n
                dgh[t, b, k] = dpre_r
                dgh[t, b, H + k] = dpre_z
                dgh[t, b, 2 * H + k] = dpre_n * r
                dh[b, k] = d * z
        dh += dgh[t] @ w_hh
    return dgi, dgh, dh
