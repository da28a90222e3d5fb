"""Vectorized kernel-matrix assembly (pure numpy fallback path).

Each function returns the matrix K[p, j] = kernel(points[p], nodes[j]).
The arithmetic mirrors _kernel_scalar operation for operation so that this
path and the numba path agree bitwise.
"""

import numpy as np


def _branches0(T, S):
    wl = 1.0 - T
    lower = S * S * wl * wl * (3.0 * T - S - 2.0 * T * S) / 6.0
    wu = 1.0 - S
    upper = T * T * wu * wu * (3.0 * S - T - 2.0 * T * S) / 6.0
    return lower, upper


def _branches1(T, S):
    wl = T - 1.0
    lower = (-(S * S * (2.0 * T - 2.0) * (S - 3.0 * T + 2.0 * S * T)) / 6.0
             - (S * S * (2.0 * S - 3.0) * wl * wl) / 6.0)
    wu = S - 1.0
    upper = (-(T * T * (2.0 * S + 1.0) * wu * wu) / 6.0
             - (T * wu * wu * (T - 3.0 * S + 2.0 * S * T)) / 3.0)
    return lower, upper


def _branches2(T, S):
    lower = (-(S * S * (S - 3.0 * T + 2.0 * S * T)) / 3.0
             - (S * S * (2.0 * S - 3.0) * (2.0 * T - 2.0)) / 3.0)
    wu = S - 1.0
    upper = (-(wu * wu * (T - 3.0 * S + 2.0 * S * T)) / 3.0
             - (2.0 * T * (2.0 * S + 1.0) * wu * wu) / 3.0)
    return lower, upper


def matrix(order, points, nodes):
    T = points[:, None]
    S = nodes[None, :]
    if order == 0:
        lower, upper = _branches0(T, S)
        return np.where(S <= T, lower, upper)
    if order == 1:
        lower, upper = _branches1(T, S)
        return np.where(S <= T, lower, upper)
    if order == 2:
        lower, upper = _branches2(T, S)
        return np.where(S <= T, lower, upper)
    lower = S * S * (3.0 - 2.0 * S)
    if order == 3:
        return np.where(S <= T, lower, lower - 1.0)
    # seam-averaged third derivative
    out = np.where(S < T, lower, lower - 1.0)
    seam = np.broadcast_to(S == T, out.shape)
    out[seam] = np.broadcast_to(lower - 0.5, out.shape)[seam]
    return out
