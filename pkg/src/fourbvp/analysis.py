"""Sufficient-condition audit, a-priori error schedules, convergence orders.

The solvability conditions checked here: the delays stay in [0,1], |f| is
bounded by M on the box domain

    |u|, |ubar|   <= |g|_sup   + M_0 M
    |y|, |ybar|   <= |g'|_sup  + M_1 M
    |v|, |vbar|   <= |g''|_sup + M_2 M
    |z|, |zbar|   <= |g'''|_sup+ M_3 M,

and f is Lipschitz there with coefficients L_0..L_7, giving the
contraction factor

    q = (L_0+L_1) M_0 + (L_2+L_3) M_1 + (L_4+L_5) M_2 + (L_6+L_7) M_3 < 1.

With q < 1 the fixed-point iteration converges geometrically and the
iterates obey |u_k^(i) - u^(i)| <= M_i p_k d, p_k = q^k/(1-q),
d = |Psi_1 - Psi_0| on the grid.

The bound check is a lattice sampling audit, not a proof: it reports the
densities used and the maximizing sample point, and a pass means only that
no sampled point exceeded M.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .hermite import derivative, hermite_interpolant, sup_norm
from .kernel import kernel_constant
from .problem import Problem

_STATE_VARS = ("u", "ubar", "y", "ybar", "v", "vbar", "z", "zbar")


def contraction_factor(L) -> float:
    """q from the eight Lipschitz coefficients."""
    L = tuple(float(x) for x in L)
    if len(L) != 8:
        raise ValueError(f"need eight Lipschitz coefficients, got {len(L)}")
    if any(x < 0.0 for x in L):
        raise ValueError(f"Lipschitz coefficients must be nonnegative: {L!r}")
    return sum((L[2 * i] + L[2 * i + 1]) * kernel_constant(i) for i in range(4))


def boundary_norms(problem: Problem) -> tuple:
    """Sup-norms of the boundary interpolant g and its three derivatives."""
    g = hermite_interpolant(problem.boundary)
    return tuple(sup_norm(derivative(g, i)) for i in range(4))


def domain_envelope(g_norms, M) -> tuple:
    """Box bounds |u^(i)| <= |g^(i)|_sup + M_i M for i = 0..3."""
    if M < 0.0:
        raise ValueError(f"M must be nonnegative, got {M!r}")
    g_norms = tuple(float(x) for x in g_norms)
    if len(g_norms) != 4:
        raise ValueError(f"need four interpolant norms, got {len(g_norms)}")
    return tuple(g_norms[i] + kernel_constant(i) * M for i in range(4))


@dataclass(frozen=True)
class BoundCheckResult:
    max_abs_f: float
    passed: bool
    argmax: dict                 # sample point achieving max |f|
    n_points: int
    densities: dict              # per-dimension lattice sizes actually used
    invalid_points: int = 0      # samples where f raised a domain error
    first_invalid: dict | None = None


def _axis_densities(active, density, budget):
    n_t = density if "t" in active else 1
    n_var = 1
    n_state = len([v for v in active if v != "t"])
    if n_state:
        for candidate in range(density if density % 2 else density - 1, 2, -2):
            if n_t * candidate ** n_state <= budget:
                n_var = candidate
                break
        else:
            n_var = 3
    return n_t, n_var


def sampled_bound_check(problem: Problem, envelope, M, density=33,
                        budget=400_000) -> BoundCheckResult:
    """Sample |f| over the box domain and compare the maximum against M.

    The lattice collapses to the variables f actually reads; per-variable
    densities shrink (odd, at least 3, endpoints and 0 included) to keep the
    total point count within budget.  Samples where f raises a domain error
    are counted and excluded from the maximum.
    """
    if density < 2:
        raise ValueError(f"density must be >= 2, got {density}")
    envelope = tuple(float(x) for x in envelope)
    active = problem.f_variables
    n_t, n_var = _axis_densities(active, density, budget)

    axes = [("t", np.linspace(0.0, 1.0, n_t) if "t" in active else np.array([0.0]))]
    densities = {"t": n_t if "t" in active else 1}
    for j, name in enumerate(_STATE_VARS):
        if name in active:
            bound = envelope[j // 2]
            axes.append((name, np.linspace(-bound, bound, n_var)))
            densities[name] = n_var
    names = [name for name, _ in axes]

    best = -math.inf
    argmax: dict = {}
    n_points = 0
    invalid = 0
    first_invalid = None
    state = dict.fromkeys(_STATE_VARS, 0.0)
    for combo in itertools.product(*(values.tolist() for _, values in axes)):
        n_points += 1
        point = dict(zip(names, combo))
        t = point.pop("t", 0.0)
        state.update(point)
        try:
            value = abs(problem.f(t, *(state[v] for v in _STATE_VARS)))
        except (ArithmeticError, ValueError) as exc:
            invalid += 1
            if first_invalid is None:
                first_invalid = {"t": t, **point, "error": str(exc)}
            continue
        if value > best:
            best = value
            argmax = {"t": t, **point}

    return BoundCheckResult(
        max_abs_f=best, passed=bool(math.isfinite(best) and best <= M),
        argmax=argmax, n_points=n_points, densities=densities,
        invalid_points=invalid, first_invalid=first_invalid)


def estimate_lipschitz(problem: Problem, envelope, samples=400, step=1e-6,
                       seed=0) -> tuple:
    """Heuristic Lipschitz estimate by sampled central differences.

    Not a certified bound: it reports the largest |df/dx_j| seen over random
    points of the box domain and can only under-estimate the true
    coefficients.
    """
    envelope = tuple(float(x) for x in envelope)
    rng = np.random.default_rng(seed)
    bounds = [envelope[j // 2] for j in range(8)]
    best = [0.0] * 8
    for _ in range(samples):
        t = float(rng.uniform(0.0, 1.0))
        x = [float(rng.uniform(-b, b)) for b in bounds]
        for j, name in enumerate(_STATE_VARS):
            if name not in problem.f_variables:
                continue
            delta = step * max(1.0, bounds[j])
            hi, lo = list(x), list(x)
            hi[j] += delta
            lo[j] -= delta
            try:
                slope = abs(problem.f(t, *hi) - problem.f(t, *lo)) / (2.0 * delta)
            except (ArithmeticError, ValueError):
                continue
            best[j] = max(best[j], slope)
    return tuple(best)


@dataclass(frozen=True)
class AprioriSchedule:
    """Per-iteration bounds M_i p_k d with p_k = q^k/(1-q)."""

    q: float
    d: float
    p: tuple                      # p_1 .. p_K
    bounds: tuple                 # four tuples, bounds[i][k-1] = M_i p_k d

    def bound(self, i, k) -> float:
        return self.bounds[i][k - 1]


def apriori_schedule(q, d, iterations) -> AprioriSchedule:
    """Theoretical error schedule for K iterations at contraction q."""
    if not (0.0 <= q < 1.0):
        raise ValueError(f"q must lie in [0, 1), got {q!r}")
    if d < 0.0:
        raise ValueError(f"d must be nonnegative, got {d!r}")
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    p = tuple(q ** k / (1.0 - q) for k in range(1, iterations + 1))
    bounds = tuple(tuple(kernel_constant(i) * pk * d for pk in p) for i in range(4))
    return AprioriSchedule(q=q, d=d, p=p, bounds=bounds)


def empirical_order(errors) -> float:
    """Least-squares slope of log(error) against log(h) with h = 1/N."""
    pts = [(int(n), float(e)) for n, e in errors if float(e) > 0.0]
    if len(pts) < 2 or len({n for n, _ in pts}) < 2:
        raise ValueError("need at least two grid sizes with positive errors")
    log_h = np.log([1.0 / n for n, _ in pts])
    log_e = np.log([e for _, e in pts])
    return float(np.polyfit(log_h, log_e, 1)[0])


@dataclass(frozen=True)
class ConditionsReport:
    """Outcome of the solvability audit for one problem."""

    problem: str
    verdict: str                          # satisfied | violated | unknown
    q: float | None = None                # recomputed contraction factor
    reported_q: float | None = None       # catalogued value, when it differs
    g_norms: tuple | None = None
    envelope: tuple | None = None
    M: float | None = None
    bound_check: BoundCheckResult | None = None


def check_conditions(problem: Problem, density=33, budget=400_000) -> ConditionsReport:
    """Audit the contraction conditions; verdict unknown without analysis data."""
    g_norms = boundary_norms(problem)
    data = problem.analysis
    if data is None:
        return ConditionsReport(problem=problem.name, verdict="unknown",
                                g_norms=g_norms)
    envelope = domain_envelope(g_norms, data.M)
    bound = sampled_bound_check(problem, envelope, data.M, density, budget)
    q = contraction_factor(data.L) if data.L is not None else None
    if not bound.passed or (q is not None and q >= 1.0):
        verdict = "violated"
    elif bound.passed and q is not None and q < 1.0:
        verdict = "satisfied"
    else:
        verdict = "unknown"
    return ConditionsReport(problem=problem.name, verdict=verdict, q=q,
                            reported_q=data.reported_q, g_norms=g_norms,
                            envelope=envelope, M=data.M, bound_check=bound)
