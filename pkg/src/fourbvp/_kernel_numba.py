"""JIT-compiled kernel-matrix assembly (default hot path).

Compiles the shared scalar branch formulas with numba and assembles the
point-by-node matrices in nested loops.  Importing this module requires
numba; fourbvp.kernel falls back to _kernel_numpy when it is missing or
when FOURBVP_BACKEND=numpy.
"""

import numpy as np
from numba import njit

from . import _kernel_scalar

_green0 = njit(cache=True)(_kernel_scalar.green0)
_green1 = njit(cache=True)(_kernel_scalar.green1)
_green2 = njit(cache=True)(_kernel_scalar.green2)
_green3 = njit(cache=True)(_kernel_scalar.green3)
_green3_star = njit(cache=True)(_kernel_scalar.green3_star)


@njit(cache=True)
def _fill(order, points, nodes, out):
    for p in range(points.size):
        t = points[p]
        for j in range(nodes.size):
            s = nodes[j]
            if order == 0:
                out[p, j] = _green0(t, s)
            elif order == 1:
                out[p, j] = _green1(t, s)
            elif order == 2:
                out[p, j] = _green2(t, s)
            elif order == 3:
                out[p, j] = _green3(t, s)
            else:
                out[p, j] = _green3_star(t, s)


def matrix(order, points, nodes):
    out = np.empty((points.size, nodes.size))
    _fill(order, points, nodes, out)
    return out
