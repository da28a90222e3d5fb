"""Expression language: grammar, evaluation, canonical printing, totality."""

import math
import random
import string

import pytest

from fourbvp import exprlang
from fourbvp.exprlang import (Binary, Call, Const, EvalDomainError, ExprError,
                              ExprSyntaxError, Unary, UnboundVariableError,
                              UnknownIdentifierError, Var, evaluate,
                              free_variables, parse, unparse)


def ev(source, **ctx):
    return evaluate(parse(source), ctx)


class TestParsing:
    def test_power_binds_tighter_than_other_operators(self):
        e = parse("t^2 - u/4 + ubar^2/4")
        rng = random.Random(1)
        for _ in range(100):
            t, u, ub = (rng.uniform(-3, 3) for _ in range(3))
            want = t ** 2 - u / 4 + ub ** 2 / 4
            assert evaluate(e, {"t": t, "u": u, "ubar": ub}) == pytest.approx(want, rel=1e-15)

    def test_zero_literal(self):
        assert parse("0") == Const(0.0)

    def test_power_right_associative(self):
        assert ev("2^3^2") == 512.0

    def test_unary_minus_binds_below_power(self):
        assert ev("-2^2") == -4.0
        assert ev("(-2)^2") == 4.0

    def test_negative_exponent(self):
        assert ev("2^-3") == 0.125

    def test_named_constants(self):
        assert ev("pi") == math.pi
        assert ev("e") == math.e

    def test_half_delay(self):
        assert ev("t/2", t=1.0) == 0.5

    def test_call_parsing(self):
        assert ev("max(2, 3) + min(1, -1) + pow(2, 5)") == 34.0

    def test_syntax_error_carries_offset_and_expectation(self):
        with pytest.raises(ExprSyntaxError) as info:
            parse("1 + * 2")
        assert info.value.offset == 4
        assert info.value.expected

    def test_unknown_identifier_lists_allowed_names(self):
        with pytest.raises(UnknownIdentifierError) as info:
            parse("t + w")
        assert info.value.name == "w"
        assert "ubar" in info.value.allowed

    def test_unknown_function_listed(self):
        with pytest.raises(UnknownIdentifierError) as info:
            parse("sinh(t)")
        assert "sin" in info.value.allowed

    def test_wrong_arity(self):
        with pytest.raises(ExprSyntaxError):
            parse("sin(1, 2)")
        with pytest.raises(ExprSyntaxError):
            parse("pow(2)")


class TestEvaluate:
    def test_example_forcing_at_origin(self):
        e = parse("exp(-t) * u^(3/2) * ubar")
        assert evaluate(e, {"t": 0.0, "u": 1.0, "ubar": 1.0}) == 1.0

    def test_unbound_variable(self):
        with pytest.raises(UnboundVariableError):
            ev("t + u", t=1.0)

    @pytest.mark.parametrize("source,ctx", [
        ("ln(t)", {"t": 0.0}),
        ("ln(-1)", {}),
        ("sqrt(t)", {"t": -4.0}),
        ("1/t", {"t": 0.0}),
        ("u^(3/2)", {"u": -1.0}),
        ("pow(u, 0.5)", {"u": -2.0}),
        ("t^-1", {"t": 0.0}),
    ])
    def test_domain_errors(self, source, ctx):
        with pytest.raises(EvalDomainError) as info:
            ev(source, **ctx)
        assert info.value.subexpr  # offending sub-expression is named

    def test_overflow_reported(self):
        with pytest.raises(EvalDomainError):
            ev("exp(t)", t=1e6)

    def test_agreement_with_hand_coded_closures(self):
        cases = [
            ("22/(t+1)^5 + (u^2 + u^3)*ubar/(t+1)^2",
             lambda c: 22.0 / (c["t"] + 1) ** 5
             + (c["u"] ** 2 + c["u"] ** 3) * c["ubar"] / (c["t"] + 1) ** 2),
            ("exp(-t)*u^(3/2)*ubar",
             lambda c: math.exp(-c["t"]) * c["u"] ** 1.5 * c["ubar"]),
            ("exp(t) + (ubar^2*zbar - y*vbar + u*z - v^2)/9",
             lambda c: math.exp(c["t"]) + (c["ubar"] ** 2 * c["zbar"]
             - c["y"] * c["vbar"] + c["u"] * c["z"] - c["v"] ** 2) / 9),
            ("t^2 - u/4 + ubar^2/4 + y*ybar + (v + vbar)*u/8 + (sin(z) + cos(zbar))/4",
             lambda c: c["t"] ** 2 - c["u"] / 4 + c["ubar"] ** 2 / 4
             + c["y"] * c["ybar"] + (c["v"] + c["vbar"]) * c["u"] / 8
             + (math.sin(c["z"]) + math.cos(c["zbar"])) / 4),
            ("vbar^4", lambda c: c["vbar"] ** 4),
            ("u^2 + ybar^4", lambda c: c["u"] ** 2 + c["ybar"] ** 4),
        ]
        rng = random.Random(9)
        for source, closure in cases:
            e = parse(source)
            for _ in range(1000):
                ctx = {name: rng.uniform(0.05, 2.0) for name in exprlang.VARIABLES}
                ctx["t"] = rng.uniform(0.0, 1.0)
                assert evaluate(e, ctx) == pytest.approx(closure(ctx), rel=1e-15)


class TestFreeVariables:
    def test_simple(self):
        assert free_variables(parse("t^2 - u/4")) == {"t", "u"}

    def test_constant_expression(self):
        assert free_variables(parse("3.5")) == frozenset()
        assert free_variables(parse("pi + e")) == frozenset()

    def test_many_variables(self):
        e = parse("ubar^2 * zbar - y*vbar + u*z - v^2")
        assert free_variables(e) == {"ubar", "zbar", "y", "vbar", "u", "z", "v"}


def _random_expr(rng, depth=0):
    roll = rng.random()
    if depth > 4 or roll < 0.25:
        if rng.random() < 0.3:
            name = rng.choice(list(exprlang.CONSTANTS))
            return Const(exprlang.CONSTANTS[name], label=name)
        if rng.random() < 0.5:
            return Const(round(rng.uniform(0.0, 100.0), 3))
        return Var(rng.choice(exprlang.VARIABLES))
    if roll < 0.35:
        return Unary("-", _random_expr(rng, depth + 1))
    if roll < 0.85:
        op = rng.choice(["+", "-", "*", "/", "^"])
        return Binary(op, _random_expr(rng, depth + 1), _random_expr(rng, depth + 1))
    name = rng.choice(exprlang.FUNCTIONS)
    arity = 2 if name in exprlang.BINARY_FUNCTIONS else 1
    return Call(name, tuple(_random_expr(rng, depth + 1) for _ in range(arity)))


class TestCanonicalForm:
    def test_unparse_parse_round_trip_on_random_trees(self):
        rng = random.Random(42)
        for _ in range(500):
            tree = _random_expr(rng)
            text = unparse(tree)
            assert parse(text) == tree
            assert unparse(parse(text)) == text

    def test_pretty_print_is_fixed_point(self):
        for source in ("t^2 - u/4 + ubar^2/4", "-(t+1)^2", "2^3^2",
                       "exp(-t)*u^(3/2)*ubar", "1/(t+1)", "t - (u - v)"):
            once = unparse(parse(source))
            assert unparse(parse(once)) == once


class TestTotality:
    def test_fuzzed_inputs_never_crash(self):
        rng = random.Random(2024)
        charset = string.ascii_letters + string.digits + "+-*/^(), .\t\n%$#@!_"
        for _ in range(3000):
            text = "".join(rng.choice(charset)
                           for _ in range(rng.randrange(0, 60)))
            try:
                parse(text)
            except ExprError:
                pass

    def test_deep_nesting_is_a_structured_error(self):
        with pytest.raises(ExprError):
            parse("(" * 2000 + "1" + ")" * 2000)
        with pytest.raises(ExprError):
            parse("-" * 5000 + "1")
