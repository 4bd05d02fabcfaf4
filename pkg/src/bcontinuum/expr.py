"""Expressions in one real variable: grammar, parser, printer and evaluator.

Grammar (loosest to tightest binding)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?          # right associative, allows x^-1
    atom   := NUMBER | NAME | FUNC '(' expr ')' | '(' expr ')'

Numbers are integers or terminating decimals and are read exactly as
rationals; ``1/2`` is an exact division of two literals. ``pi`` and ``e`` are
named constants, ``sin cos exp log sqrt abs`` are the callable functions.

The evaluator is backend-agnostic: binding the variable to a ``Fraction``,
:class:`~bcontinuum.numeric.Approx`, Levi-Civita number, dual number or germ
selects the arithmetic.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

from bcontinuum.errors import BContinuumError, DomainError
from bcontinuum.numeric import Approx, scalar_fn, scalar_pow

FUNCTIONS = frozenset({"sin", "cos", "exp", "log", "sqrt", "abs"})
CONSTANTS = frozenset({"pi", "e"})


class ParseError(BContinuumError):
    def __init__(self, offset: int, expected: str, text: str = ""):
        self.offset = offset
        self.expected = expected
        self.text = text
        super().__init__(f"parse error at offset {offset}: expected {expected}")


class Expr:
    """Base class of the immutable AST nodes."""

    __slots__ = ()

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Const(Expr):
    value: Fraction


@dataclass(frozen=True)
class NamedConst(Expr):
    name: str


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class BinOp(Expr):
    op: str  # one of + - * / ^
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Call(Expr):
    fn: str
    arg: Expr


def const(value) -> Const:
    return Const(Fraction(value))


# --------------------------------------------------------------------------
# tokenizer / parser

_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<num>\d+(?:\.\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()])"
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # num, name, op, end
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(pos, "a number, name, operator or parenthesis", text)
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), pos))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.var_pos: dict[str, int] = {}

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, expected: str):
        raise ParseError(self.peek().pos, expected, self.text)

    def expect(self, op: str):
        tok = self.peek()
        if tok.kind != "op" or tok.text != op:
            self.fail(repr(op))
        self.i += 1

    def parse(self) -> Expr:
        if self.peek().kind == "end":
            self.fail("an expression")
        node = self.expr()
        if self.peek().kind != "end":
            self.fail("an operator or end of input")
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.take().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.take().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "^":
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "num":
            self.take()
            return Const(Fraction(tok.text))
        if tok.kind == "name":
            self.take()
            if tok.text in FUNCTIONS:
                self.expect("(")
                if self.peek().kind == "op" and self.peek().text == ")":
                    self.fail("a function argument")
                arg = self.expr()
                self.expect(")")
                return Call(tok.text, arg)
            if tok.text in CONSTANTS:
                return NamedConst(tok.text)
            self.var_pos.setdefault(tok.text, tok.pos)
            return Var(tok.text)
        if tok.kind == "op" and tok.text == "(":
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        self.fail("a number, name or '('")


def parse(text: str, variables: set[str] | frozenset[str] | None = None) -> Expr:
    """Parse ``text`` into an :class:`Expr`.

    By default at most one free variable may occur. Pass ``variables`` to
    allow a specific set of names instead (e.g. ``{"k", "x"}`` for series
    terms); any other name is then an error.
    """
    p = _Parser(text)
    node = p.parse()
    names = sorted(p.var_pos, key=p.var_pos.get)
    if variables is None:
        if len(names) > 1:
            raise ParseError(p.var_pos[names[1]], f"only the variable {names[0]!r}", text)
    else:
        for name in names:
            if name not in variables:
                raise ParseError(
                    p.var_pos[name], "one of the variables " + ", ".join(sorted(variables)), text
                )
    return node


# --------------------------------------------------------------------------
# printer

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}
_ATOM = 5


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return _PREC["neg"]
    # constants parenthesise themselves when needed
    return _ATOM


def _is_terminating(q: Fraction) -> bool:
    d = q.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    return d == 1


def _const_text(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    if q >= 0 and _is_terminating(q):
        digits = 0
        d = q.denominator
        while d != 1:
            digits += 1
            d = (q * 10**digits).denominator
        s = f"{q.numerator * 10**digits // q.denominator:0{digits + 1}d}"
        return s[:-digits] + "." + s[-digits:]
    return f"({q.numerator}/{q.denominator})"


def to_text(e: Expr) -> str:
    """Print with minimal parentheses; ``parse(to_text(e)) == e`` for parsed e."""
    if isinstance(e, Const):
        s = _const_text(e.value)
        return s if not s.startswith("-") else f"({s})"
    if isinstance(e, NamedConst):
        return e.name
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Call):
        return f"{e.fn}({to_text(e.arg)})"
    if isinstance(e, Neg):
        inner = to_text(e.arg)
        if _prec(e.arg) < _PREC["^"]:
            inner = f"({inner})"
        return "-" + inner
    if isinstance(e, BinOp):
        p = _PREC[e.op]
        left, right = to_text(e.left), to_text(e.right)
        if e.op == "^":
            if _prec(e.left) <= p:
                left = f"({left})"
            if _prec(e.right) < p:
                right = f"({right})"
        else:
            if _prec(e.left) < p:
                left = f"({left})"
            # left-associative: equal precedence on the right needs parens
            # except for the commutative-associative + and * (kept anyway to
            # preserve tree shape)
            if _prec(e.right) <= p:
                right = f"({right})"
        return f"{left}{e.op}{right}"
    raise TypeError(f"not an expression node: {e!r}")


# --------------------------------------------------------------------------
# structural helpers

def walk(e: Expr) -> Iterator[Expr]:
    yield e
    if isinstance(e, (Neg, Call)):
        yield from walk(e.arg)
    elif isinstance(e, BinOp):
        yield from walk(e.left)
        yield from walk(e.right)


def free_vars(e: Expr) -> set[str]:
    return {node.name for node in walk(e) if isinstance(node, Var)}


def substitute(e: Expr, mapping: Mapping[str, Expr]) -> Expr:
    if isinstance(e, Var):
        return mapping.get(e.name, e)
    if isinstance(e, Neg):
        return Neg(substitute(e.arg, mapping))
    if isinstance(e, Call):
        return Call(e.fn, substitute(e.arg, mapping))
    if isinstance(e, BinOp):
        return BinOp(e.op, substitute(e.left, mapping), substitute(e.right, mapping))
    return e


def ensure_expr(e) -> Expr:
    return parse(e) if isinstance(e, str) else e


# --------------------------------------------------------------------------
# evaluation

def _named_value(name: str, like):
    factory = getattr(type(like), "named_constant", None)
    if factory is not None:
        return factory(name)
    return Approx(math.pi if name == "pi" else math.e)


def _is_scalar(v) -> bool:
    return isinstance(v, (int, Fraction, Approx))


def apply_function(fn: str, v):
    if _is_scalar(v):
        return scalar_fn(fn, v)
    return v.apply(fn)


def _pow(base, exponent):
    if _is_scalar(base) and _is_scalar(exponent):
        return scalar_pow(base, exponent)
    if _is_scalar(exponent):
        return base**exponent
    # general power, valid where the base is positive
    return apply_function("exp", exponent * apply_function("log", base))


def evaluate(e: Expr, binding: Mapping[str, object]):
    """Evaluate ``e`` with variables bound to backend values.

    Backends that evaluate symbolically (germs) receive the whole expression
    with their bodies substituted in, so the same closed expression is used
    at variable quantities as at real values.
    """
    for v in binding.values():
        hook = getattr(type(v), "from_substitution", None)
        if hook is not None:
            return hook(e, binding)
    like = next(iter(binding.values()), Fraction(0))
    try:
        return _eval(e, binding, like)
    except ZeroDivisionError:
        raise DomainError("division by zero") from None


def _eval(e: Expr, binding, like):
    if isinstance(e, Const):
        return e.value
    if isinstance(e, NamedConst):
        return _named_value(e.name, like)
    if isinstance(e, Var):
        try:
            return binding[e.name]
        except KeyError:
            raise DomainError(f"unbound variable {e.name!r}") from None
    if isinstance(e, Neg):
        return -_eval(e.arg, binding, like)
    if isinstance(e, Call):
        return apply_function(e.fn, _eval(e.arg, binding, like))
    if isinstance(e, BinOp):
        a = _eval(e.left, binding, like)
        if e.op == "^" and not free_vars(e.right):
            # constant exponents stay scalars so integer/rational powers are exact
            return _pow(a, _eval(e.right, {}, Fraction(0)))
        b = _eval(e.right, binding, like)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if e.op == "/":
            if _is_scalar(b) and b == 0:
                raise DomainError("division by zero")
            return a / b
        if e.op == "^":
            return _pow(a, b)
    raise TypeError(f"not an expression node: {e!r}")


# --------------------------------------------------------------------------
# code generation for the float kernels

_SRC_FN = {
    "math": {f: f"math.{f}" for f in ("sin", "cos", "exp", "log", "sqrt")} | {"abs": "abs"},
    "np": {f: f"np.{f}" for f in ("sin", "cos", "exp", "log", "sqrt")} | {"abs": "np.abs"},
}


def to_source(e: Expr, module: str = "math") -> str:
    """Render ``e`` as a fully parenthesised Python float expression.

    ``module`` selects ``math`` (scalar, numba-friendly) or ``np`` (vectorised).
    """
    fns = _SRC_FN[module]
    if isinstance(e, Const):
        return repr(float(e.value))
    if isinstance(e, NamedConst):
        return repr(math.pi if e.name == "pi" else math.e)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        return f"(-{to_source(e.arg, module)})"
    if isinstance(e, Call):
        return f"{fns[e.fn]}({to_source(e.arg, module)})"
    if isinstance(e, BinOp):
        op = "**" if e.op == "^" else e.op
        return f"({to_source(e.left, module)} {op} {to_source(e.right, module)})"
    raise TypeError(f"not an expression node: {e!r}")
