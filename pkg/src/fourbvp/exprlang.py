"""Small arithmetic expression language for problem definitions.

Right-hand sides f, delay maps and exact solutions can be written in config
files using this grammar (EBNF, whitespace insignificant):

    expr    = term   { ("+" | "-") term } ;
    term    = unary  { ("*" | "/") unary } ;
    unary   = "-" unary | power ;
    power   = atom [ "^" unary ] ;              (* right-associative *)
    atom    = NUMBER | NAME | NAME "(" expr { "," expr } ")" | "(" expr ")" ;

"^" binds tighter than unary minus, so -x^2 means -(x^2).  Variables are
drawn from {t, u, ubar, y, ybar, v, vbar, z, zbar}; named constants are e
and pi; functions are sin, cos, tan, exp, ln, sqrt, abs (one argument) and
pow, min, max (two arguments).

Parsed trees are immutable and shareable; evaluation is pure IEEE double
arithmetic and raises EvalDomainError (naming the offending sub-expression)
for ln of non-positives, sqrt of negatives, division by zero and fractional
powers of negative bases.
"""

import math
import re
from dataclasses import dataclass, field

VARIABLES = ("t", "u", "ubar", "y", "ybar", "v", "vbar", "z", "zbar")
CONSTANTS = {"e": math.e, "pi": math.pi}
UNARY_FUNCTIONS = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "exp": math.exp,
    "ln": math.log,
    "sqrt": math.sqrt,
    "abs": abs,
}
BINARY_FUNCTIONS = ("pow", "min", "max")
FUNCTIONS = tuple(UNARY_FUNCTIONS) + BINARY_FUNCTIONS


class ExprError(ValueError):
    pass


class ExprSyntaxError(ExprError):
    def __init__(self, message, offset, expected=()):
        self.offset = offset
        self.expected = tuple(expected)
        hint = f" (expected {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at offset {offset}{hint}")


class UnknownIdentifierError(ExprError):
    def __init__(self, name, offset, allowed):
        self.name = name
        self.offset = offset
        self.allowed = tuple(allowed)
        super().__init__(
            f"unknown identifier {name!r} at offset {offset}; "
            f"allowed: {', '.join(self.allowed)}")


class EvalError(ExprError):
    pass


class UnboundVariableError(EvalError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"variable {name!r} is not bound")


class EvalDomainError(EvalError):
    def __init__(self, message, subexpr):
        self.subexpr = subexpr
        super().__init__(f"{message} in {subexpr!r}")


@dataclass(frozen=True)
class Const:
    value: float
    label: str | None = None


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple = field(default_factory=tuple)


Expr = Const | Var | Unary | Binary | Call

_TOKEN = re.compile(r"""
    (?P<num>(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
  | (?P<ws>\s+)
""", re.VERBOSE)


def _tokenize(source):
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {source[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


# kept well under Python's own stack limit: each nesting level costs
# several interpreter frames through expr -> term -> unary -> power -> atom
_MAX_DEPTH = 150


class _Parser:
    def __init__(self, source):
        self.source = source
        self.tokens = _tokenize(source)
        self.i = 0
        self.depth = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text):
        kind, tok, pos = self.peek()
        if tok != text:
            raise ExprSyntaxError(f"unexpected {tok or 'end of input'!r}", pos,
                                  expected=(repr(text),))
        return self.advance()

    def parse(self):
        e = self.expr()
        kind, tok, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {tok!r}", pos,
                                  expected=("operator", "end of input"))
        return e

    def expr(self):
        self.depth += 1
        if self.depth > _MAX_DEPTH:
            raise ExprSyntaxError("expression nested too deeply", self.peek()[2])
        try:
            left = self.term()
            while self.peek()[1] in ("+", "-"):
                op = self.advance()[1]
                left = Binary(op, left, self.term())
            return left
        finally:
            self.depth -= 1

    def term(self):
        left = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.advance()[1]
            left = Binary(op, left, self.unary())
        return left

    def unary(self):
        self.depth += 1
        if self.depth > _MAX_DEPTH:
            raise ExprSyntaxError("expression nested too deeply", self.peek()[2])
        try:
            if self.peek()[1] == "-":
                self.advance()
                return Unary("-", self.unary())
            return self.power()
        finally:
            self.depth -= 1

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.advance()
            return Binary("^", base, self.unary())
        return base

    def atom(self):
        kind, tok, pos = self.peek()
        if kind == "num":
            self.advance()
            return Const(float(tok))
        if kind == "name":
            self.advance()
            if self.peek()[1] == "(":
                return self._call(tok, pos)
            if tok in CONSTANTS:
                return Const(CONSTANTS[tok], label=tok)
            if tok not in VARIABLES:
                raise UnknownIdentifierError(tok, pos,
                                             VARIABLES + tuple(CONSTANTS))
            return Var(tok)
        if tok == "(":
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        raise ExprSyntaxError(f"unexpected {tok or 'end of input'!r}", pos,
                              expected=("number", "name", "'('", "'-'"))

    def _call(self, name, pos):
        if name not in FUNCTIONS:
            raise UnknownIdentifierError(name, pos, FUNCTIONS)
        self.expect("(")
        args = [self.expr()]
        while self.peek()[1] == ",":
            self.advance()
            args.append(self.expr())
        self.expect(")")
        arity = 2 if name in BINARY_FUNCTIONS else 1
        if len(args) != arity:
            raise ExprSyntaxError(
                f"{name} takes {arity} argument(s), got {len(args)}", pos)
        return Call(name, tuple(args))


def parse(source: str) -> Expr:
    """Parse source text into an immutable expression tree."""
    return _Parser(source).parse()


def free_variables(e: Expr) -> frozenset:
    """Exact set of variable names occurring in e."""
    if isinstance(e, Var):
        return frozenset((e.name,))
    if isinstance(e, Unary):
        return free_variables(e.operand)
    if isinstance(e, Binary):
        return free_variables(e.left) | free_variables(e.right)
    if isinstance(e, Call):
        out = frozenset()
        for a in e.args:
            out |= free_variables(a)
        return out
    return frozenset()


def _checked_pow(base, exponent, node):
    if base < 0.0 and exponent != math.floor(exponent):
        raise EvalDomainError(
            f"fractional power {exponent!r} of negative base {base!r}",
            unparse(node))
    if base == 0.0 and exponent < 0.0:
        raise EvalDomainError("zero raised to a negative power", unparse(node))
    try:
        return math.pow(base, exponent)
    except OverflowError:
        raise EvalDomainError("overflow", unparse(node)) from None


def evaluate(e: Expr, ctx) -> float:
    """Evaluate e with variables bound by the mapping ctx."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        try:
            return float(ctx[e.name])
        except KeyError:
            raise UnboundVariableError(e.name) from None
    if isinstance(e, Unary):
        return -evaluate(e.operand, ctx)
    if isinstance(e, Binary):
        left = evaluate(e.left, ctx)
        right = evaluate(e.right, ctx)
        if e.op == "+":
            return left + right
        if e.op == "-":
            return left - right
        if e.op == "*":
            return left * right
        if e.op == "/":
            if right == 0.0:
                raise EvalDomainError("division by zero", unparse(e))
            return left / right
        return _checked_pow(left, right, e)
    args = [evaluate(a, ctx) for a in e.args]
    if e.func == "pow":
        return _checked_pow(args[0], args[1], e)
    if e.func == "min":
        return min(args)
    if e.func == "max":
        return max(args)
    if e.func == "ln" and args[0] <= 0.0:
        raise EvalDomainError(f"ln of non-positive {args[0]!r}", unparse(e))
    if e.func == "sqrt" and args[0] < 0.0:
        raise EvalDomainError(f"sqrt of negative {args[0]!r}", unparse(e))
    try:
        return UNARY_FUNCTIONS[e.func](args[0])
    except (ValueError, OverflowError) as exc:
        raise EvalDomainError(str(exc), unparse(e)) from None


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "unary": 3, "^": 4}


def _prec(e):
    if isinstance(e, Binary):
        return _PREC[e.op]
    if isinstance(e, Unary):
        return _PREC["unary"]
    return 5


def unparse(e: Expr) -> str:
    """Canonical text form; parse(unparse(e)) reproduces e."""
    if isinstance(e, Const):
        return e.label if e.label is not None else repr(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Unary):
        inner = unparse(e.operand)
        if _prec(e.operand) < _PREC["unary"]:
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(e, Binary):
        lp, rp = _prec(e.left), _prec(e.right)
        left, right = unparse(e.left), unparse(e.right)
        if e.op == "^":
            # right-associative and binding above unary minus: parenthesize
            # any compound base, and any exponent looser than ^ itself
            if lp <= _PREC["^"]:
                left = f"({left})"
            if rp < _PREC["^"] and not isinstance(e.right, Unary):
                right = f"({right})"
            return f"{left}^{right}"
        # +,-,*,/ parse left-associatively, so an equal-precedence right
        # child must be parenthesized to survive a round trip
        prec = _PREC[e.op]
        if lp < prec:
            left = f"({left})"
        if rp <= prec:
            right = f"({right})"
        return f"{left} {e.op} {right}"
    return f"{e.func}({', '.join(unparse(a) for a in e.args)})"
