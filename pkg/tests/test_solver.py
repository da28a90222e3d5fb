"""Discrete iteration: weights, sweeps, fixed point, stopping, diagnostics."""

import math

import numpy as np
import pytest

from fourbvp import (BoundaryData, Grid, Problem, SolveOptions, analysis,
                     apply_kernel_row, builtin, init_psi, max_norm_diff,
                     quadrature_weights, solve, sweep, update_psi)
from fourbvp.solver import (DelayRangeError, DiscreteOperator,
                            FEvaluationError, IterationDivergedError)


def _identity(t):
    return t


def _const_problem(value, boundary=(0.0, 0.0, 0.0, 0.0)):
    return Problem(name="const", f=lambda t, *state: value,
                   phi=(_identity,) * 4, boundary=BoundaryData(*boundary),
                   f_variables=frozenset())


class TestQuadratureWeights:
    def test_n2(self):
        assert quadrature_weights(Grid(2)).tolist() == [0.5, 1.0, 0.5]

    def test_n3(self):
        assert quadrature_weights(Grid(3)).tolist() == [0.5, 1.0, 1.0, 0.5]

    def test_weights_integrate_one_exactly(self):
        grid = Grid(4)
        assert float(np.sum(grid.h * quadrature_weights(grid))) == 1.0


class TestMaxNormDiff:
    def test_identical(self):
        assert max_norm_diff([1.0, 2.0], [1.0, 2.0]) == 0.0

    def test_componentwise_max(self):
        assert max_norm_diff([1.0, 2.0], [0.0, 4.0]) == 2.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            max_norm_diff([1.0], [1.0, 2.0])


class TestInitPsi:
    def test_example1_at_origin(self):
        psi = init_psi(builtin("example1"), Grid(4))
        assert psi[0] == 22.0

    def test_example2_everywhere_zero(self):
        assert np.all(init_psi(builtin("example2"), Grid(8)) == 0.0)

    def test_example4_at_origin(self):
        psi = init_psi(builtin("example4"), Grid(4))
        assert psi[0] == 0.25


class TestApplyKernelRow:
    def test_zero_psi(self):
        grid = Grid(10)
        psi = np.zeros(11)
        for order in (0, 1, 2, 3):
            assert apply_kernel_row(order, 0.3, psi, grid) == 0.0

    def test_left_endpoint_row_vanishes(self):
        grid = Grid(10)
        assert apply_kernel_row(0, 0.0, np.ones(11), grid) == 0.0

    def test_constant_forcing_reproduces_quartic(self):
        # u'''' = 24 with homogeneous data has u = t^2 (1-t)^2
        grid = Grid(200)
        val = apply_kernel_row(0, 0.5, np.full(201, 24.0), grid)
        assert val == pytest.approx(0.0625, abs=5e-5)


class TestSweep:
    def test_zero_psi_returns_interpolant_values(self):
        p = builtin("example4")
        grid = Grid(16)
        gfs = sweep(p, np.zeros(17), grid)
        from fourbvp import derivative, hermite_interpolant
        g = hermite_interpolant(p.boundary)
        assert np.allclose(gfs.u, g(grid.nodes), atol=1e-15)
        d3 = derivative(g, 3)
        xi3 = np.array([p.phi[3](t) for t in grid.nodes])
        assert np.allclose(gfs.zbar, d3(xi3), atol=1e-15)

    def test_exact_rhs_recovers_exponential(self):
        grid = Grid(1000)
        gfs = sweep(builtin("example2"), np.exp(grid.nodes), grid)
        assert np.max(np.abs(gfs.u - np.exp(grid.nodes))) <= 2e-6

    def test_identity_delays_collapse_bars(self):
        p = _const_problem(3.0, boundary=(0.2, -0.1, 0.4, 1.0))
        grid = Grid(32)
        gfs = sweep(p, np.full(33, 3.0), grid)
        for plain, bar in ((gfs.u, gfs.ubar), (gfs.y, gfs.ybar),
                           (gfs.v, gfs.vbar), (gfs.z, gfs.zbar)):
            assert np.max(np.abs(plain - bar)) <= 1e-15

    def test_discrete_boundary_conditions(self):
        p = builtin("example3")
        grid = Grid(64)
        gfs = sweep(p, np.cos(7 * grid.nodes), grid)
        bd = p.boundary
        assert gfs.u[0] == pytest.approx(bd.a, abs=1e-12)
        assert gfs.u[-1] == pytest.approx(bd.b, abs=1e-12)
        assert gfs.y[0] == pytest.approx(bd.c, abs=1e-12)
        assert gfs.y[-1] == pytest.approx(bd.d, abs=1e-12)

    def test_quartic_reconstruction_oracle(self):
        # psi = 24 constant: u = t^2(1-t)^2 and derivative chains; u and y
        # rows are quadrature-exact here, v converges at second order
        p = _const_problem(24.0)
        errs = {}
        for n in (50, 100):
            grid = Grid(n)
            gfs = sweep(p, np.full(n + 1, 24.0), grid)
            t = grid.nodes
            errs[n] = (
                np.max(np.abs(gfs.u - t ** 2 * (1 - t) ** 2)),
                np.max(np.abs(gfs.y - (2 * t - 6 * t ** 2 + 4 * t ** 3))),
                np.max(np.abs(gfs.v - (2 - 12 * t + 12 * t ** 2))),
            )
        assert errs[50][0] <= 1e-13 and errs[50][1] <= 1e-13
        order_v = math.log2(errs[50][2] / errs[100][2])
        assert order_v >= 1.9

    def test_delay_out_of_range_aborts(self):
        p = builtin("example1")
        bad = Problem(name="bad", f=p.f, phi=(lambda t: 1.5 * t,) + p.phi[1:],
                      boundary=p.boundary, f_variables=p.f_variables)
        with pytest.raises(DelayRangeError) as info:
            sweep(bad, np.zeros(11), Grid(10))
        assert info.value.violation.delay == 0

    def test_psi_length_checked(self):
        with pytest.raises(ValueError):
            sweep(builtin("example1"), np.zeros(5), Grid(10))


class TestUpdatePsi:
    def test_zero_state_example1(self):
        p = builtin("example1")
        grid = Grid(20)
        gfs = sweep(p, np.zeros(21), grid)
        for name in ("u", "ubar", "y", "ybar", "v", "vbar", "z", "zbar"):
            setattr(gfs, name, np.zeros(21))
        psi = update_psi(p, gfs, grid)
        assert np.allclose(psi, 22.0 / (grid.nodes + 1) ** 5, rtol=1e-15)

    def test_exact_rhs_is_discrete_fixed_point(self):
        p = builtin("example2")
        grid = Grid(200)
        psi = np.exp(grid.nodes)
        refreshed = update_psi(p, sweep(p, psi, grid), grid)
        assert np.max(np.abs(refreshed - psi)) <= 1e-6

    def test_polynomial_rhs_stays_finite(self):
        p = builtin("example6")
        grid = Grid(16)
        psi = update_psi(p, sweep(p, init_psi(p, grid), grid), grid)
        assert np.all(np.isfinite(psi))

    def test_domain_failure_reports_node_and_state(self):
        p = builtin("example2")
        grid = Grid(4)
        gfs = sweep(p, np.zeros(5), grid)
        gfs.u = np.array([0.0, -1.0, 0.0, 0.0, 0.0])
        with pytest.raises(FEvaluationError) as info:
            update_psi(p, gfs, grid)
        assert info.value.index == 1
        assert len(info.value.values) == 8


class TestSolve:
    def test_example1_reference_row(self, run):
        sol = run("example1", 100)
        assert sol.converged
        assert 6 <= sol.iterations <= 11
        assert sol.error == pytest.approx(9.0870e-10, rel=0.05)
        assert sol.error1 == pytest.approx(2.3801e-09, rel=0.05)

    def test_example2_reference_row(self, run):
        sol = run("example2", 100)
        assert sol.converged
        assert sol.error == pytest.approx(1.8814e-11, rel=0.05)

    def test_example6_no_error_fields(self, run):
        sol = run("example6", 100, 1e-16)
        assert sol.converged and sol.error is None and sol.error1 is None

    def test_history_bookkeeping(self, run):
        sol = run("example1", 100)
        assert len(sol.history) == sol.iterations - 1
        assert sol.history[-1] <= 1e-14
        assert sol.d == sol.psi_history[0]

    def test_contraction_histories_decreasing(self, run):
        for name in ("example1", "example2", "example4"):
            hist = run(name, 100).history
            assert all(b < a for a, b in zip(hist, hist[1:]))

    def test_empirical_ratio_below_theoretical_contraction(self, run):
        for name in ("example1", "example2", "example4"):
            p = builtin(name)
            q = analysis.contraction_factor(p.analysis.L)
            hist = run(name, 100).history
            ratios = [b / a for a, b in zip(hist, hist[1:]) if a >= 1e-11]
            assert ratios and max(ratios) <= q + 0.05

    def test_identity_delay_degeneracy_through_iterations(self):
        p = builtin("example1")
        ident = Problem(name="ident", f=p.f, phi=(_identity,) * 4,
                        boundary=p.boundary, f_variables=p.f_variables)
        sol = solve(ident, SolveOptions(n=50))
        gfs = sol.final
        assert np.max(np.abs(gfs.u - gfs.ubar)) <= 1e-15
        assert np.max(np.abs(gfs.z - gfs.zbar)) <= 1e-15

    def test_grid_size_invariance_orders(self, run):
        for name, want in (("example1", 3.5), ("example2", 3.5), ("example3", 1.9)):
            coarse = run(name, 50).final.u
            mid = run(name, 100).final.u
            fine = run(name, 200).final.u
            d_coarse = float(np.max(np.abs(coarse - mid[::2])))
            d_mid = float(np.max(np.abs(mid - fine[::2])))
            assert math.log2(d_coarse / d_mid) >= want

    def test_non_convergence_flagged_not_raised(self):
        sol = solve(builtin("example4"), SolveOptions(n=20, max_iter=5))
        assert not sol.converged and sol.iterations == 5

    def test_nan_aborts_with_iteration_index(self):
        p = _const_problem(float("nan"))
        with pytest.raises(IterationDivergedError) as info:
            solve(p, SolveOptions(n=8))
        assert info.value.iteration == 1

    def test_runaway_growth_aborts(self):
        runaway = Problem(
            name="runaway",
            f=lambda t, u, ubar, y, ybar, v, vbar, z, zbar: (z + 2.0) ** 8,
            phi=(_identity,) * 4, boundary=BoundaryData(0, 0, 0, 0),
            f_variables=frozenset(("z",)))
        with pytest.raises((FEvaluationError, IterationDivergedError)):
            solve(runaway, SolveOptions(n=8, max_iter=50))

    def test_option_validation(self):
        with pytest.raises(ValueError):
            SolveOptions(n=10, tol=0.0)
        with pytest.raises(ValueError):
            SolveOptions(n=10, max_iter=0)
        with pytest.raises(ValueError):
            Grid(1)


class TestOperatorReuse:
    def test_prebuilt_operator_matches_direct_sweep(self):
        p = builtin("example3")
        grid = Grid(40)
        op = DiscreteOperator.build(p, grid)
        psi = np.sin(3 * grid.nodes)
        a = sweep(p, psi, grid, op=op)
        b = sweep(p, psi, grid)
        assert np.array_equal(a.u, b.u) and np.array_equal(a.zbar, b.zbar)
