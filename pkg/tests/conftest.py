import numpy as np
import pytest

from fourbvp import SolveOptions, builtin, solve


@pytest.fixture(scope="session")
def run():
    """Memoized solve of a built-in problem; shared across test modules."""
    cache = {}

    def _run(name, n, tol=1e-14):
        key = (name, n, tol)
        if key not in cache:
            cache[key] = solve(builtin(name), SolveOptions(n=n, tol=tol))
        return cache[key]

    return _run


@pytest.fixture(scope="session")
def manufactured_residual():
    """max |f(t, U_exact(t)) - u''''(t)| over the given points."""

    def _residual(problem, points):
        ex = problem.exact
        worst = 0.0
        for t in np.asarray(points, dtype=float):
            delayed = [problem.phi[m](t) for m in range(4)]
            state = (ex.u(t), ex.u(delayed[0]),
                     ex.du(t), ex.du(delayed[1]),
                     ex.d2u(t), ex.d2u(delayed[2]),
                     ex.d3u(t), ex.d3u(delayed[3]))
            worst = max(worst, abs(problem.f(t, *state) - ex.d4u(t)))
        return worst

    return _residual
