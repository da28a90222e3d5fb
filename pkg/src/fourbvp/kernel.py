"""Green kernel of the clamped fourth-order problem and its t-derivatives.

Orders 0..3 address G, dG/dt, d2G/dt2, d3G/dt3; the constant G3_STAR
addresses the seam-averaged third derivative used by quadrature through the
jump at s = t.  The integral bounds

    int_0^1 |G_i(t,s)| ds <= M_i,
    M_0 = 1/384,  M_1 = 1/(72 sqrt 3),  M_2 = 1/12,  M_3 = 1/2

drive the contraction analysis in fourbvp.analysis.
"""

import math

import numpy as np

from . import _backend, _kernel_scalar

G3_STAR = 4

M0 = 1.0 / 384.0
M1 = 1.0 / (72.0 * math.sqrt(3.0))
M2 = 1.0 / 12.0
M3 = 0.5

_CONSTANTS = (M0, M1, M2, M3)

_SCALAR = {
    0: _kernel_scalar.green0,
    1: _kernel_scalar.green1,
    2: _kernel_scalar.green2,
    3: _kernel_scalar.green3,
    G3_STAR: _kernel_scalar.green3_star,
}

_BACKEND = _backend.select_backend()
if _BACKEND == "numba":
    from . import _kernel_numba as _impl
else:
    from . import _kernel_numpy as _impl


class KernelDomainError(ValueError):
    """An evaluation point lies outside [0,1] beyond the allowed epsilon."""


def backend() -> str:
    """Name of the active matrix-assembly backend ('numba' or 'numpy')."""
    return _BACKEND


def _check_order(order):
    if order not in _SCALAR:
        raise ValueError(f"kernel order must be 0..3 or G3_STAR, got {order!r}")


def _clip_scalar(x, name, eps):
    if not (-eps <= x <= 1.0 + eps):
        raise KernelDomainError(f"{name}={x!r} outside [0,1] (eps={eps:g})")
    return min(max(x, 0.0), 1.0)


def _clip_array(x, name, eps):
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.size and (x.min() < -eps or x.max() > 1.0 + eps):
        bad = x[(x < -eps) | (x > 1.0 + eps)][0]
        raise KernelDomainError(f"{name} contains {bad!r} outside [0,1] (eps={eps:g})")
    return np.clip(x, 0.0, 1.0)


def eval_kernel(order, t, s, eps=1e-12):
    """Kernel value at a single point.

    Order 3 returns the left-limit branch at s == t; request G3_STAR for
    the seam-averaged value.
    """
    _check_order(order)
    t = _clip_scalar(float(t), "t", eps)
    s = _clip_scalar(float(s), "s", eps)
    return _SCALAR[order](t, s)


def kernel_constant(order):
    """The bound M_i on the integral of |G_i(t, .)|."""
    if order == G3_STAR:
        order = 3
    if order not in (0, 1, 2, 3):
        raise ValueError(f"kernel order must be 0..3, got {order!r}")
    return _CONSTANTS[order]


def kernel_matrix(order, points, nodes, eps=1e-12):
    """Matrix K[p, j] = kernel(points[p], nodes[j]) on the active backend."""
    _check_order(order)
    points = _clip_array(points, "points", eps)
    nodes = _clip_array(nodes, "nodes", eps)
    return _impl.matrix(order, points, nodes)


def integral_abs_kernel(order, t, n_quad):
    """Trapezoidal approximation of the integral of |G_order(t, s)| ds.

    Order 3 integrates the seam-averaged kernel, matching what the solver's
    quadrature actually sums.
    """
    if n_quad < 2:
        raise ValueError(f"n_quad must be >= 2, got {n_quad}")
    if order == 3:
        order = G3_STAR
    nodes = np.linspace(0.0, 1.0, n_quad + 1)
    row = kernel_matrix(order, np.array([float(t)]), nodes)[0]
    weights = np.full(n_quad + 1, 1.0 / n_quad)
    weights[0] = weights[-1] = 0.5 / n_quad
    return float(weights @ np.abs(row))
