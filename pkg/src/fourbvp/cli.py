"""Command-line surface: solve, convergence study, conditions audit, listing.

Exit codes: 0 success (audit satisfied), 2 load/solve/usage failure,
3 audit violated, 4 audit unknown.  On failure the last stderr line is a
single machine-readable JSON object.  Printed tables use 5 significant
digits; CSV exports carry full precision and are byte-stable across runs.
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import analysis, problem, solver


@dataclass(frozen=True)
class RunRecord:
    """One convergence-table row; error columns only when an exact solution exists."""

    n: int
    h2: float
    iterations: int | None = None
    error: float | None = None
    error1: float | None = None
    failure: str | None = None

_EXIT_FAILURE = 2
_EXIT_VIOLATED = 3
_EXIT_UNKNOWN = 4


class CliError(Exception):
    def __init__(self, code, message):
        self.code = code
        super().__init__(message)


def _fail(code, message):
    raise CliError(code, message)


def _sci(x):
    return f"{x:.4e}"


def _full(x):
    return format(x, ".17g")


def _load_source(source):
    if source in problem.builtin_names():
        return problem.builtin(source)
    if os.path.exists(source):
        try:
            return problem.load_config_file(source)
        except (problem.ConfigError, ValueError) as exc:
            _fail("config-error", f"{source}: {exc}")
    _fail("file-not-found",
          f"{source!r} is neither a built-in problem "
          f"({', '.join(problem.builtin_names())}) nor a config file")


def _solve_options(args):
    try:
        return solver.SolveOptions(n=args.n, tol=args.tol, max_iter=args.max_iter)
    except ValueError as exc:
        _fail("bad-options", str(exc))


def _write_csv(path, header, rows):
    lines = [",".join(header)]
    lines += [",".join(row) for row in rows]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def cmd_solve(args):
    p = _load_source(args.source)
    opts = _solve_options(args)
    try:
        sol = solver.solve(p, opts)
    except (solver.DelayRangeError, solver.FEvaluationError,
            solver.IterationDivergedError) as exc:
        _fail("solve-error", f"{p.name}: {exc}")
    print(f"problem: {p.name}")
    print(f"N: {sol.grid.n}   tol: {opts.tol:g}")
    print(f"iterations (K): {sol.iterations}")
    print(f"converged: {'yes' if sol.converged else 'no'}")
    if sol.history:
        print(f"final successive difference |U_k - U_(k-1)|: {_sci(sol.history[-1])}")
    if sol.error is not None:
        print(f"Error  (max |U_K - u|):   {_sci(sol.error)}")
        print(f"Error1 (max |Y_K - u'|):  {_sci(sol.error1)}")
    if args.csv:
        gfs = sol.final
        rows = [(_full(t), _full(u), _full(y), _full(v), _full(z))
                for t, u, y, v, z in zip(sol.grid.nodes, gfs.u, gfs.y, gfs.v, gfs.z)]
        _write_csv(args.csv, ("t", "U", "Y", "V", "Z"), rows)
        print(f"grid functions written to {args.csv}")
    return 0


def _parse_n_list(text):
    try:
        ns = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        _fail("bad-options", f"--n-list must be comma-separated integers, got {text!r}")
    if len(ns) < 2:
        _fail("bad-options", "--n-list needs at least two grid sizes")
    if len(set(ns)) != len(ns):
        _fail("bad-options", f"--n-list has repeated entries: {text!r}")
    return ns


def cmd_convergence(args):
    p = _load_source(args.source)
    ns = _parse_n_list(args.n_list)
    records = []
    for n in sorted(ns):
        h2 = (1.0 / n) ** 2
        try:
            opts = solver.SolveOptions(n=n, tol=args.tol, max_iter=args.max_iter)
            sol = solver.solve(p, opts)
            records.append(RunRecord(n=n, h2=h2, iterations=sol.iterations,
                                     error=sol.error, error1=sol.error1))
        except (ValueError, solver.IterationDivergedError) as exc:
            records.append(RunRecord(n=n, h2=h2, failure=str(exc)))

    with_exact = p.exact is not None
    header = ["N", "h^2", "K"] + (["Error", "Error1"] if with_exact else [])
    widths = [6, 12, 4] + ([12, 12] if with_exact else [])
    print(f"problem: {p.name}")
    print("  ".join(f"{h:>{w}}" for h, w in zip(header, widths)))
    csv_rows = []
    errors = []
    for rec in records:
        if rec.failure is not None:
            print(f"{rec.n:>6}  failed: {rec.failure}")
            csv_rows.append((str(rec.n), _full(rec.h2), "failed")
                            + (("", "") if with_exact else ()))
            continue
        cells = [str(rec.n), _sci(rec.h2), str(rec.iterations)]
        csv_cells = [str(rec.n), _full(rec.h2), str(rec.iterations)]
        if with_exact:
            cells += [_sci(rec.error), _sci(rec.error1)]
            csv_cells += [_full(rec.error), _full(rec.error1)]
            errors.append((rec.n, rec.error))
        print("  ".join(f"{c:>{w}}" for c, w in zip(cells, widths)))
        csv_rows.append(tuple(csv_cells))

    if len([e for _, e in errors if e > 0.0]) >= 2:
        order = analysis.empirical_order(errors)
        print(f"empirical order (log-log fit): {order:.2f}")
    if args.csv:
        _write_csv(args.csv, tuple(header), csv_rows)
        print(f"table written to {args.csv}")
    if all(rec.failure is not None for rec in records):
        _fail("solve-error", f"{p.name}: every grid size failed")
    return 0


def cmd_check(args):
    p = _load_source(args.source)
    try:
        report = analysis.check_conditions(p, density=args.density)
    except ValueError as exc:
        _fail("check-error", f"{p.name}: {exc}")
    print(f"problem: {p.name}")
    if report.g_norms is not None:
        labels = ("|g|", "|g'|", "|g''|", "|g'''|")
        print("boundary interpolant norms: "
              + ", ".join(f"{l} = {v:.6g}" for l, v in zip(labels, report.g_norms)))
    if report.verdict == "unknown" and report.M is None:
        print("no analysis data (M, L): nothing to audit")
        print("verdict: unknown")
        return _EXIT_UNKNOWN
    print(f"bound M: {report.M:g}")
    labels = ("|u|", "|u'|", "|u''|", "|u'''|")
    print("solution envelope: "
          + ", ".join(f"{l} <= {v:.6g}" for l, v in zip(labels, report.envelope)))
    bc = report.bound_check
    where = ", ".join(f"{k}={v:.6g}" for k, v in bc.argmax.items())
    print(f"sampled max |f| = {bc.max_abs_f:.6g} at ({where}) "
          f"over {bc.n_points} points: {'pass' if bc.passed else 'FAIL'} vs M")
    if bc.invalid_points:
        print(f"note: f was undefined at {bc.invalid_points} sample points "
              f"(first: {bc.first_invalid})")
    if report.q is not None:
        print(f"contraction factor q (recomputed): {report.q:.6g}"
              + ("  [>= 1]" if report.q >= 1.0 else ""))
        if report.reported_q is not None:
            print(f"contraction factor q (catalogued): {report.reported_q:.6g}")
    else:
        print("no Lipschitz coefficients catalogued; q not computed")
    print(f"verdict: {report.verdict}")
    if report.verdict == "satisfied":
        return 0
    return _EXIT_VIOLATED if report.verdict == "violated" else _EXIT_UNKNOWN


def cmd_list(_args):
    for name in problem.builtin_names():
        p = problem.builtin(name)
        exact = "yes" if p.exact is not None else "no"
        has_analysis = "yes" if p.analysis is not None else "none"
        print(f"{name}  exact: {exact:3}  analysis: {has_analysis:4}  {p.description}")
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="fourbvp",
        description="Fixed-point solver for fourth-order functional boundary "
                    "value problems with proportional delays on [0,1]")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_solver_flags(sp):
        sp.add_argument("source", help="built-in name or config file path")
        sp.add_argument("--tol", type=float, default=1e-14,
                        help="stopping tolerance on successive U (default 1e-14)")
        sp.add_argument("--max-iter", type=int, default=100,
                        help="iteration cap (default 100)")
        sp.add_argument("--csv", metavar="PATH", help="write full-precision CSV")

    sp = sub.add_parser("solve", help="solve one problem on one grid")
    add_solver_flags(sp)
    sp.add_argument("--n", type=int, default=100, help="grid size N (default 100)")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("convergence", help="grid-refinement study")
    add_solver_flags(sp)
    sp.add_argument("--n-list", required=True,
                    help="comma-separated grid sizes, at least two")
    sp.set_defaults(func=cmd_convergence)

    sp = sub.add_parser("check", help="audit the solvability conditions")
    sp.add_argument("source", help="built-in name or config file path")
    sp.add_argument("--density", type=int, default=33,
                    help="lattice density per active dimension (default 33)")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("list", help="list built-in problems")
    sp.set_defaults(func=cmd_list)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(json.dumps({"error": exc.code, "message": str(exc)}), file=sys.stderr)
        return _EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
