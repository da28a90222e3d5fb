"""Solver for fully fourth-order functional boundary value problems.

u''''(t) = f(t, u, u(phi0), u', u'(phi1), u'', u''(phi2), u''', u'''(phi3))
on [0,1] with u(0), u(1), u'(0), u'(1) prescribed, solved by fixed-point
iteration on the right-hand side through the closed-form Green kernel and
trapezoidal quadrature.
"""

from .analysis import (AprioriSchedule, ConditionsReport, apriori_schedule,
                       boundary_norms, check_conditions, contraction_factor,
                       domain_envelope, empirical_order, sampled_bound_check)
from .hermite import BoundaryData, CubicPoly, derivative, hermite_interpolant, sup_norm
from .kernel import (G3_STAR, eval_kernel, integral_abs_kernel, kernel_constant,
                     kernel_matrix)
from .problem import (AnalysisData, ExactSolution, Problem, builtin,
                      builtin_names, load_config, load_config_file,
                      validate_delays)
from .solver import (Grid, GridFunctionSet, Solution, SolveOptions,
                     apply_kernel_row, init_psi, max_norm_diff,
                     quadrature_weights, solve, sweep, update_psi)

__version__ = "0.1.0"

__all__ = [
    "AnalysisData", "AprioriSchedule", "BoundaryData", "ConditionsReport",
    "CubicPoly", "ExactSolution", "G3_STAR", "Grid", "GridFunctionSet",
    "Problem", "Solution", "SolveOptions", "apply_kernel_row",
    "apriori_schedule", "boundary_norms", "builtin", "builtin_names",
    "check_conditions", "contraction_factor", "derivative", "domain_envelope",
    "empirical_order", "eval_kernel", "hermite_interpolant", "init_psi",
    "integral_abs_kernel", "kernel_constant", "kernel_matrix", "load_config",
    "load_config_file", "max_norm_diff", "quadrature_weights",
    "sampled_bound_check", "solve", "sup_norm", "sweep", "update_psi",
    "validate_delays",
]
