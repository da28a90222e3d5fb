"""Discrete fixed-point iteration for the delayed fourth-order problem.

One iteration maps a grid right-hand side Psi to the nine grid functions

    U, Y, V, Z         kernel quadrature at the nodes t_i
    Ubar, ..., Zbar    the same quadrature at the delayed points phi_m(t_i)

using trapezoidal sums against the Green kernel and its derivatives (the
seam-averaged third-derivative kernel in the Z rows), plus the boundary
interpolant g and its derivatives; Psi is then refreshed by evaluating f on
the nine-tuple at every node.  Iterations repeat until the max-norm of
successive U differs by at most tol.

Delayed evaluation points are generally off-grid; the kernels and g are
closed-form in their first argument, so those rows are evaluated
analytically with no interpolation.  All kernel rows depend only on the
grid and the delays, so they are assembled once per solve (an O(N^2)
matrix per kernel order) and reused across iterations; each iteration then
costs eight mat-vecs plus one sweep of f evaluations.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernel
from .hermite import CubicPoly, derivative, hermite_interpolant
from .problem import Problem, validate_delays

_STATE_ORDERS = (0, 1, 2, kernel.G3_STAR)


class DelayRangeError(ValueError):
    """A delay map leaves [0,1] at some grid node."""

    def __init__(self, violation):
        self.violation = violation
        super().__init__(
            f"phi{violation.delay}(t_{violation.index}) = {violation.value!r} "
            f"outside [0,1] (t = {violation.t!r})")


class FEvaluationError(ValueError):
    """f failed at a grid node; carries the node and the nine-tuple."""

    def __init__(self, index, t, values, cause):
        self.index = index
        self.t = t
        self.values = tuple(values)
        self.cause = cause
        super().__init__(
            f"f evaluation failed at node {index} (t = {t!r}): {cause}; "
            f"state {self.values!r}")


class IterationDivergedError(RuntimeError):
    """Non-finite grid values appeared; carries the iteration index."""

    def __init__(self, iteration, detail=""):
        self.iteration = iteration
        extra = f": {detail}" if detail else ""
        super().__init__(f"iteration {iteration} produced non-finite values{extra}")


@dataclass(frozen=True)
class Grid:
    """Uniform nodes t_i = i/N on [0,1]."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"grid size must be >= 2, got {self.n}")

    @property
    def h(self) -> float:
        return 1.0 / self.n

    @cached_property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.n + 1)


@dataclass(frozen=True)
class SolveOptions:
    n: int = 100
    tol: float = 1e-14
    max_iter: int = 100

    def __post_init__(self):
        if not (self.tol > 0.0):
            raise ValueError(f"tol must be positive, got {self.tol!r}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")


@dataclass
class GridFunctionSet:
    """The nine grid vectors of one iteration."""

    psi: np.ndarray
    u: np.ndarray
    ubar: np.ndarray
    y: np.ndarray
    ybar: np.ndarray
    v: np.ndarray
    vbar: np.ndarray
    z: np.ndarray
    zbar: np.ndarray

    def state_arrays(self):
        return (self.u, self.ubar, self.y, self.ybar,
                self.v, self.vbar, self.z, self.zbar)


@dataclass
class Solution:
    """Converged grid functions plus the iteration record."""

    grid: Grid
    final: GridFunctionSet
    iterations: int                     # K: number of sweeps performed
    history: list = field(default_factory=list)       # |U_k - U_{k-1}|, k >= 2
    psi_history: list = field(default_factory=list)   # |Psi_k - Psi_{k-1}|
    converged: bool = False
    error: float | None = None          # |U_K - u|      when exact known
    error1: float | None = None         # |Y_K - u'|     when exact known

    @property
    def d(self) -> float | None:
        """|Psi_1 - Psi_0|, the first-step norm of the a-priori schedule."""
        return self.psi_history[0] if self.psi_history else None


def quadrature_weights(grid: Grid) -> np.ndarray:
    """Trapezoid weights rho_j: 1/2 at the ends, 1 inside."""
    rho = np.ones(grid.n + 1)
    rho[0] = rho[-1] = 0.5
    return rho


def max_norm_diff(a, b) -> float:
    """max_i |a_i - b_i| over the grid."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - b)))


def init_psi(problem: Problem, grid: Grid) -> np.ndarray:
    """Psi_0(t_i) = f(t_i, 0, ..., 0)."""
    zeros = (0.0,) * 8
    out = np.empty(grid.n + 1)
    for i, t in enumerate(grid.nodes):
        out[i] = _eval_f(problem, i, float(t), zeros)
    return out


def apply_kernel_row(order, eval_point, psi, grid: Grid, rho=None) -> float:
    """Single quadrature row: sum_j h rho_j G_order(eval_point, t_j) psi_j.

    Order 3 always sums the seam-averaged kernel, on or off the grid.
    """
    if rho is None:
        rho = quadrature_weights(grid)
    if order == 3:
        order = kernel.G3_STAR
    row = kernel.kernel_matrix(order, np.array([float(eval_point)]), grid.nodes)[0]
    return float((grid.h * rho * row) @ np.asarray(psi))


def _eval_f(problem, i, t, values):
    try:
        result = problem.f(t, *values)
    except (ArithmeticError, ValueError) as exc:
        raise FEvaluationError(i, t, values, exc) from exc
    return result


def update_psi(problem: Problem, gfs: GridFunctionSet, grid: Grid) -> np.ndarray:
    """Psi_{k+1}(t_i) = f(t_i, U_i, Ubar_i, ..., Zbar_i)."""
    state = gfs.state_arrays()
    out = np.empty(grid.n + 1)
    for i, t in enumerate(grid.nodes):
        out[i] = _eval_f(problem, i, float(t), tuple(float(a[i]) for a in state))
    return out


class DiscreteOperator:
    """Kernel rows and boundary-interpolant values for one (problem, grid).

    on_rows[m] and delay_rows[m] carry the quadrature weights folded in, so
    a sweep is g-vector + matrix @ psi per grid function.
    """

    def __init__(self, grid, poly, on_rows, delay_rows, g_on, g_delay):
        self.grid = grid
        self.poly = poly
        self.on_rows = on_rows
        self.delay_rows = delay_rows
        self.g_on = g_on
        self.g_delay = g_delay

    @classmethod
    def build(cls, problem: Problem, grid: Grid) -> "DiscreteOperator":
        violations = validate_delays(problem, grid)
        if violations:
            raise DelayRangeError(violations[0])
        nodes = grid.nodes
        w = grid.h * quadrature_weights(grid)
        poly = hermite_interpolant(problem.boundary)
        xi = [np.clip(np.array([float(problem.phi[m](t)) for t in nodes]), 0.0, 1.0)
              for m in range(4)]
        on_rows, delay_rows, g_on, g_delay = [], [], [], []
        for m, order in enumerate(_STATE_ORDERS):
            gm = derivative(poly, m)
            on_rows.append(kernel.kernel_matrix(order, nodes, nodes) * w)
            delay_rows.append(kernel.kernel_matrix(order, xi[m], nodes) * w)
            g_on.append(gm(nodes))
            g_delay.append(gm(xi[m]))
        return cls(grid, poly, on_rows, delay_rows, g_on, g_delay)

    def apply(self, psi: np.ndarray) -> GridFunctionSet:
        on = [self.g_on[m] + self.on_rows[m] @ psi for m in range(4)]
        bar = [self.g_delay[m] + self.delay_rows[m] @ psi for m in range(4)]
        return GridFunctionSet(psi, on[0], bar[0], on[1], bar[1],
                               on[2], bar[2], on[3], bar[3])


def sweep(problem: Problem, psi, grid: Grid, op: DiscreteOperator | None = None) -> GridFunctionSet:
    """All nine grid functions produced by one right-hand side Psi_k."""
    psi = np.asarray(psi, dtype=np.float64)
    if psi.shape != (grid.n + 1,):
        raise ValueError(f"psi must have length {grid.n + 1}, got {psi.shape}")
    if op is None:
        op = DiscreteOperator.build(problem, grid)
    return op.apply(psi)


def _check_finite(gfs: GridFunctionSet, iteration: int):
    for name in ("psi", "u", "ubar", "y", "ybar", "v", "vbar", "z", "zbar"):
        vec = getattr(gfs, name)
        if not np.all(np.isfinite(vec)):
            raise IterationDivergedError(iteration, f"grid function {name}")


def solve(problem: Problem, opts: SolveOptions = SolveOptions()) -> Solution:
    """Iterate to the fixed point and report errors against any exact solution.

    The reported iteration count K is the number of sweeps performed; the
    initial sweep of Psi_0 counts as iteration 1.  Non-convergence within
    max_iter returns a Solution flagged converged=False; non-finite values
    abort with the iteration index.
    """
    grid = Grid(opts.n)
    op = DiscreteOperator.build(problem, grid)
    psi = init_psi(problem, grid)
    gfs = op.apply(psi)
    k = 1
    _check_finite(gfs, k)
    history: list = []
    psi_history: list = []
    converged = False
    while not converged and k < opts.max_iter:
        psi_new = update_psi(problem, gfs, grid)
        gfs_new = op.apply(psi_new)
        k += 1
        _check_finite(gfs_new, k)
        psi_history.append(max_norm_diff(psi_new, psi))
        diff = max_norm_diff(gfs_new.u, gfs.u)
        history.append(diff)
        psi, gfs = psi_new, gfs_new
        converged = diff <= opts.tol

    error = error1 = None
    if problem.exact is not None:
        exact_u = np.array([problem.exact.u(t) for t in grid.nodes])
        exact_du = np.array([problem.exact.du(t) for t in grid.nodes])
        error = max_norm_diff(gfs.u, exact_u)
        error1 = max_norm_diff(gfs.y, exact_du)

    return Solution(grid=grid, final=gfs, iterations=k, history=history,
                    psi_history=psi_history, converged=converged,
                    error=error, error1=error1)
