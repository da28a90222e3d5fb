"""Problem model: right-hand side, delays, boundary data, exact solutions.

A Problem describes u''''(t) = f(t, u, u(phi0), u', u'(phi1), u'', u''(phi2),
u''', u'''(phi3)) on [0,1] with clamped values u(0)=a, u(1)=b, u'(0)=c,
u'(1)=d.  Problems come either from the built-in registry (six catalogued
test problems, four with known contraction data and four with closed-form
solutions) or from config files in a flat key = value format:

    name = example1
    f = 22/(t+1)^5 + (u^2 + u^3)*ubar/(t+1)^2
    phi0 = t/2
    a = 1
    b = 1/2
    c = -1
    d = -1/4
    exact_u = 1/(t+1)
    exact_du = -1/(t+1)^2
    M = 25
    L0 = 6
    L1 = 2.4

phi1..phi3 default to t (no delay).  Numeric fields accept constant
expressions (19/6, e, ...).  M and L0..L7 attach contraction-analysis data;
any L key implies the full vector with unset entries zero.
"""

import math
from dataclasses import dataclass
from importlib import resources

from . import exprlang
from .hermite import BoundaryData

F_VARIABLES = exprlang.VARIABLES
DELAY_NAMES = ("phi0", "phi1", "phi2", "phi3")
CONFIG_FIELDS = (("name", "f") + DELAY_NAMES + ("a", "b", "c", "d",
                 "exact_u", "exact_du", "M") + tuple(f"L{i}" for i in range(8)))


class ConfigError(ValueError):
    """Schema or validation failure while loading a problem config."""


class UnknownBuiltinError(KeyError):
    def __init__(self, name):
        self.name = name
        super().__init__(
            f"no built-in problem {name!r}; valid names: {', '.join(builtin_names())}")


@dataclass(frozen=True)
class AnalysisData:
    """Bound M on |f| over the solution envelope and Lipschitz vector L.

    L is None when no Lipschitz coefficients are catalogued (a trial M can
    still drive the sampled bound audit).  reported_q carries a previously
    published contraction factor when it disagrees with the one recomputed
    from L; the conditions report surfaces both.
    """

    M: float
    L: tuple | None = None
    reported_q: float | None = None

    def __post_init__(self):
        if not (self.M > 0.0):
            raise ValueError(f"M must be positive, got {self.M!r}")
        if self.L is not None:
            if len(self.L) != 8 or any(x < 0.0 for x in self.L):
                raise ValueError("L must be eight nonnegative coefficients")


@dataclass(frozen=True)
class ExactSolution:
    """Closed-form solution u and u'; higher derivatives when available."""

    u: object
    du: object
    d2u: object | None = None
    d3u: object | None = None
    d4u: object | None = None

    @property
    def full(self) -> bool:
        return None not in (self.d2u, self.d3u, self.d4u)


@dataclass(frozen=True)
class Problem:
    """Immutable problem description; safe to share across solves."""

    name: str
    f: object                       # callable(t, u, ubar, y, ybar, v, vbar, z, zbar)
    phi: tuple                      # four callables [0,1] -> [0,1]
    boundary: BoundaryData
    f_variables: frozenset          # names (incl. 't') that f actually reads
    exact: ExactSolution | None = None
    analysis: AnalysisData | None = None
    description: str = ""

    def f_at(self, t, values):
        """f at node t with the eight state values (u, ubar, ..., zbar)."""
        return self.f(t, *values)


@dataclass(frozen=True)
class DelayViolation:
    delay: int          # m in 0..3
    index: int          # grid index i
    t: float
    value: float


def validate_delays(problem: Problem, grid) -> list:
    """All (m, i) where phi_m(t_i) leaves [0,1]; empty means admissible."""
    eps = 1e-12
    out = []
    for m in range(4):
        phi = problem.phi[m]
        for i, t in enumerate(grid.nodes):
            x = float(phi(t))
            if not (-eps <= x <= 1.0 + eps):
                out.append(DelayViolation(m, i, float(t), x))
    return out


# built-in registry ---------------------------------------------------------

_E = math.e


def _exp(t):
    return math.exp(t)


def _identity(t):
    return t


def _half(t):
    return t / 2


def _f_example1(t, u, ubar, y, ybar, v, vbar, z, zbar):
    return 22.0 / (t + 1) ** 5 + (u ** 2 + u ** 3) * ubar / (t + 1) ** 2


def _f_example2(t, u, ubar, y, ybar, v, vbar, z, zbar):
    if u < 0.0:
        raise exprlang.EvalDomainError(
            f"fractional power 1.5 of negative base {u!r}", "u^(3/2)")
    return math.exp(-t) * u ** 1.5 * ubar


def _f_example3(t, u, ubar, y, ybar, v, vbar, z, zbar):
    return math.exp(t) + (ubar ** 2 * zbar - y * vbar + u * z - v ** 2) / 9


def _f_example4(t, u, ubar, y, ybar, v, vbar, z, zbar):
    return (t ** 2 - u / 4 + ubar ** 2 / 4 + y * ybar + (v + vbar) * u / 8
            + (math.sin(z) + math.cos(zbar)) / 4)


def _f_example5(t, u, ubar, y, ybar, v, vbar, z, zbar):
    return vbar ** 4


def _f_example6(t, u, ubar, y, ybar, v, vbar, z, zbar):
    return u ** 2 + ybar ** 4


def _exact_recip():
    return ExactSolution(
        u=lambda t: 1.0 / (t + 1),
        du=lambda t: -1.0 / (t + 1) ** 2,
        d2u=lambda t: 2.0 / (t + 1) ** 3,
        d3u=lambda t: -6.0 / (t + 1) ** 4,
        d4u=lambda t: 24.0 / (t + 1) ** 5,
    )


def _exact_exp():
    return ExactSolution(u=_exp, du=_exp, d2u=_exp, d3u=_exp, d4u=_exp)


def _registry():
    return {
        "example1": Problem(
            name="example1",
            f=_f_example1,
            phi=(_half, _identity, _identity, _identity),
            boundary=BoundaryData(1.0, 0.5, -1.0, -0.25),
            f_variables=frozenset(("t", "u", "ubar")),
            exact=_exact_recip(),
            analysis=AnalysisData(M=25.0, L=(6.0, 2.4, 0, 0, 0, 0, 0, 0),
                                  reported_q=0.0219),
            description="u'''' = 22/(t+1)^5 + (u^2+u^3)*u(t/2)/(t+1)^2",
        ),
        "example2": Problem(
            name="example2",
            f=_f_example2,
            phi=(_half, _identity, _identity, _identity),
            boundary=BoundaryData(1.0, _E, 1.0, _E),
            f_variables=frozenset(("t", "u", "ubar")),
            exact=_exact_exp(),
            analysis=AnalysisData(M=15.0, L=(7.0, 5.0, 0, 0, 0, 0, 0, 0),
                                  reported_q=0.0313),
            description="u'''' = exp(-t)*u^(3/2)*u(t/2)",
        ),
        "example3": Problem(
            name="example3",
            f=_f_example3,
            phi=(_half, _identity, _half, _half),
            boundary=BoundaryData(1.0, _E, 1.0, _E),
            f_variables=frozenset(("t", "u", "ubar", "y", "v", "vbar", "z", "zbar")),
            exact=_exact_exp(),
            analysis=AnalysisData(
                M=20.0,
                L=(1.30, 7.20, 0.47, 0.0, 0.94, 0.32, 0.31, 0.86),
                reported_q=0.6446),
            description="u'''' = exp(t) + (u(t/2)^2 u'''(t/2) - u' u''(t/2) + u u''' - u''^2)/9",
        ),
        "example4": Problem(
            name="example4",
            f=_f_example4,
            phi=(_half, lambda t: t * t, lambda t: t * t / 2, lambda t: t * t / 3),
            boundary=BoundaryData(1.0, 19.0 / 6.0, 1.0, 3.5),
            f_variables=frozenset(F_VARIABLES),
            analysis=AnalysisData(
                M=23.0,
                L=(1.48, 1.62, 3.7, 3.7, 0.41, 0.41, 0.25, 0.25),
                reported_q=0.3857),
            description="u'''' = t^2 - u/4 + u(t/2)^2/4 + u'u'(t^2) + (u''+u''(t^2/2))u/8 "
                        "+ (sin u''' + cos u'''(t^2/3))/4",
        ),
        "example5": Problem(
            name="example5",
            f=_f_example5,
            phi=(_identity, _identity, lambda t: t / 4, _identity),
            boundary=BoundaryData(1.0, _E, 1.0, _E),
            f_variables=frozenset(("vbar",)),
            exact=_exact_exp(),
            # no bound M can satisfy |f| <= M for a fourth power of the
            # envelope; M=20 is the trial value the audit demonstrates on
            analysis=AnalysisData(M=20.0, L=None),
            description="u'''' = u''(t/4)^4",
        ),
        "example6": Problem(
            name="example6",
            f=_f_example6,
            phi=(_identity, lambda t: t * t / 2, _identity, _identity),
            boundary=BoundaryData(1.0, 19.0 / 6.0, 1.0, 3.5),
            f_variables=frozenset(("u", "ybar")),
            description="u'''' = u^2 + u'(t^2/2)^4",
        ),
    }


_BUILTINS = _registry()


def builtin_names() -> tuple:
    return tuple(_BUILTINS)


def builtin(name: str) -> Problem:
    """One of the six catalogued problems."""
    try:
        return _BUILTINS[name]
    except KeyError:
        raise UnknownBuiltinError(name) from None


# config loading ------------------------------------------------------------


def _parse_pairs(text):
    pairs = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in CONFIG_FIELDS:
            raise ConfigError(f"line {lineno}: unknown field {key!r}")
        if key in pairs:
            raise ConfigError(f"line {lineno}: duplicate field {key!r}")
        if not value:
            raise ConfigError(f"line {lineno}: empty value for {key!r}")
        pairs[key] = value
    return pairs


def _constant(pairs, key):
    expr = exprlang.parse(pairs[key])
    extra = exprlang.free_variables(expr)
    if extra:
        raise ConfigError(f"field {key!r} must be constant; found variables "
                          f"{sorted(extra)}")
    return exprlang.evaluate(expr, {})


def _expr_callable(expr, names):
    def call(*values):
        return exprlang.evaluate(expr, dict(zip(names, values)))
    return call


def _t_callable(expr):
    def call(t):
        return exprlang.evaluate(expr, {"t": t})
    return call


def load_config(text: str) -> Problem:
    """Parse and fully validate a problem config document."""
    pairs = _parse_pairs(text)
    for key in ("name", "f", "a", "b", "c", "d"):
        if key not in pairs:
            raise ConfigError(f"missing required field {key!r}")

    try:
        f_expr = exprlang.parse(pairs["f"])
    except exprlang.ExprError as exc:
        raise ConfigError(f"field 'f': {exc}") from exc
    f_vars = exprlang.free_variables(f_expr)
    if not f_vars <= frozenset(F_VARIABLES):
        raise ConfigError(f"field 'f' uses variables outside "
                          f"{F_VARIABLES}: {sorted(f_vars)}")

    phi = []
    for key in DELAY_NAMES:
        source = pairs.get(key, "t")
        try:
            d_expr = exprlang.parse(source)
        except exprlang.ExprError as exc:
            raise ConfigError(f"field {key!r}: {exc}") from exc
        d_vars = exprlang.free_variables(d_expr)
        if not d_vars <= frozenset(("t",)):
            raise ConfigError(f"field {key!r} may only use t; found {sorted(d_vars)}")
        phi.append(_t_callable(d_expr))

    try:
        boundary = BoundaryData(*(_constant(pairs, k) for k in ("a", "b", "c", "d")))
    except exprlang.ExprError as exc:
        raise ConfigError(f"boundary value: {exc}") from exc

    exact = None
    if ("exact_u" in pairs) != ("exact_du" in pairs):
        raise ConfigError("exact_u and exact_du must be given together")
    if "exact_u" in pairs:
        try:
            u_expr = exprlang.parse(pairs["exact_u"])
            du_expr = exprlang.parse(pairs["exact_du"])
        except exprlang.ExprError as exc:
            raise ConfigError(f"exact solution: {exc}") from exc
        for key, expr in (("exact_u", u_expr), ("exact_du", du_expr)):
            extra = exprlang.free_variables(expr) - frozenset(("t",))
            if extra:
                raise ConfigError(f"field {key!r} may only use t; found {sorted(extra)}")
        exact = ExactSolution(u=_t_callable(u_expr), du=_t_callable(du_expr))
        checks = (("u(0)", exact.u(0.0), boundary.a), ("u(1)", exact.u(1.0), boundary.b),
                  ("u'(0)", exact.du(0.0), boundary.c), ("u'(1)", exact.du(1.0), boundary.d))
        for label, got, want in checks:
            if abs(got - want) > 1e-10:
                raise ConfigError(
                    f"declared exact solution violates boundary data: "
                    f"{label} = {got!r}, expected {want!r}")

    analysis = None
    l_keys = [k for k in pairs if k.startswith("L")]
    if "M" in pairs:
        L = None
        if l_keys:
            L = tuple(_constant(pairs, f"L{i}") if f"L{i}" in pairs else 0.0
                      for i in range(8))
        try:
            analysis = AnalysisData(M=_constant(pairs, "M"), L=L)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    elif l_keys:
        raise ConfigError(f"Lipschitz fields {sorted(l_keys)} require M")

    return Problem(
        name=pairs["name"],
        f=_expr_callable(f_expr, F_VARIABLES),
        phi=tuple(phi),
        boundary=boundary,
        f_variables=f_vars,
        exact=exact,
        analysis=analysis,
        description=pairs["f"],
    )


def load_config_file(path) -> Problem:
    with open(path, "r", encoding="utf-8") as fh:
        return load_config(fh.read())


def builtin_config_text(name: str) -> str:
    """Raw text of the config file shipped for a built-in problem."""
    if name not in _BUILTINS:
        raise UnknownBuiltinError(name)
    return resources.files("fourbvp").joinpath("configs", f"{name}.cfg").read_text()
