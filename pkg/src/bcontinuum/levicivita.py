"""Truncated Levi-Civita series in a positive infinitesimal ``eps``.

A number is a finite ascending list of terms ``c * eps**q`` with exact
rational exponents, valid modulo ``eps**trunc``. Negative exponents give the
infinite elements, positive ones the infinitesimals.

Truncation is tracked relative to the leading term: ``a*b`` is known modulo
``eps**min(Ta + lead(b), Tb + lead(a))``. This reduces to the plain min-cutoff
rule for appreciable operands and keeps order and inverse laws exact for
infinitesimal and infinite ones.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from typing import Iterable

from bcontinuum import expr as _expr
from bcontinuum.errors import DomainError, NotRepresentable, UsageError
from bcontinuum.numeric import (
    Approx,
    ExtOrder,
    Ordering,
    Scalar,
    binomial,
    derivative,
    format_scalar,
    int_power,
    pow_derivative,
    scalar_fn,
    scalar_pow,
    to_scalar,
)

DEFAULT_TRUNC = Fraction(8)


class LcClass(enum.Enum):
    ZERO = "zero"
    INFINITESIMAL = "infinitesimal"
    APPRECIABLE = "appreciable"
    INFINITE = "infinite"


def _is_zero(c) -> bool:
    return c == 0


class LeviCivitaNumber:
    __slots__ = ("terms", "trunc")

    def __init__(self, terms: Iterable[tuple] = (), trunc=DEFAULT_TRUNC):
        trunc = Fraction(trunc)
        merged: dict[Fraction, Scalar] = {}
        for q, c in terms:
            q = Fraction(q)
            if q >= trunc:
                continue
            c = to_scalar(c)
            merged[q] = merged[q] + c if q in merged else c
        self.terms = tuple((q, merged[q]) for q in sorted(merged) if not _is_zero(merged[q]))
        self.trunc = trunc

    # -- construction -----------------------------------------------------

    @classmethod
    def eps(cls, trunc=DEFAULT_TRUNC) -> "LeviCivitaNumber":
        return cls([(1, 1)], trunc)

    @classmethod
    def from_scalar(cls, c, trunc=DEFAULT_TRUNC) -> "LeviCivitaNumber":
        return cls([(0, c)], trunc)

    @classmethod
    def monomial(cls, c, q, trunc=DEFAULT_TRUNC) -> "LeviCivitaNumber":
        """c*eps^q carrying ``trunc`` orders of relative precision."""
        q = Fraction(q)
        return cls([(q, c)], q + Fraction(trunc))

    @classmethod
    def parse(cls, text: str, trunc=DEFAULT_TRUNC) -> "LeviCivitaNumber":
        """Read text like ``3 + 5*eps - eps^2`` or ``eps^(3/2)``."""
        tree = _expr.parse(text, variables={"eps"})
        value = _expr.evaluate(tree, {"eps": cls.eps(trunc)})
        if not isinstance(value, cls):
            value = cls.from_scalar(value, trunc)
        return value

    def _like(self, terms, trunc=None) -> "LeviCivitaNumber":
        return LeviCivitaNumber(terms, self.trunc if trunc is None else trunc)

    def _coerce(self, other) -> "LeviCivitaNumber | None":
        if isinstance(other, LeviCivitaNumber):
            return other
        if isinstance(other, (int, Fraction, Approx)):
            return LeviCivitaNumber.from_scalar(other, self.trunc)
        return None

    # -- structure --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def leading_exponent(self) -> Fraction:
        """Exponent of the leading term; ``trunc`` for zero (known O(eps^trunc))."""
        return self.terms[0][0] if self.terms else self.trunc

    @property
    def leading_coefficient(self) -> Scalar:
        if not self.terms:
            raise DomainError("zero has no leading coefficient")
        return self.terms[0][1]

    def coefficient(self, q) -> Scalar:
        return dict(self.terms).get(Fraction(q), Fraction(0))

    def classify(self) -> LcClass:
        if not self.terms:
            return LcClass.ZERO
        q = self.terms[0][0]
        if q > 0:
            return LcClass.INFINITESIMAL
        if q == 0:
            return LcClass.APPRECIABLE
        return LcClass.INFINITE

    def is_finite(self) -> bool:
        return self.leading_exponent >= 0

    def sign(self) -> int:
        if not self.terms:
            return 0
        return 1 if self.terms[0][1] > 0 else -1

    def order(self) -> ExtOrder:
        """Cauchy order: the leading exponent."""
        if not self.terms:
            raise DomainError("the order of 0 is undefined")
        return ExtOrder(self.terms[0][0])

    def standard_part(self) -> Scalar:
        if not self.is_finite():
            raise DomainError("st is undefined on infinite elements")
        return self.coefficient(0)

    # -- arithmetic -------------------------------------------------------

    def __neg__(self):
        return self._like([(q, -c) for q, c in self.terms])

    def __pos__(self):
        return self

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return LeviCivitaNumber(self.terms + o.terms, min(self.trunc, o.trunc))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, c) -> "LeviCivitaNumber":
        c = to_scalar(c)
        return self._like([(q, a * c) for q, a in self.terms])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Approx)):
            return self.scale(other)
        if not isinstance(other, LeviCivitaNumber):
            return NotImplemented
        trunc = min(self.trunc + other.leading_exponent, other.trunc + self.leading_exponent)
        acc: dict[Fraction, Scalar] = {}
        for qa, ca in self.terms:
            for qb, cb in other.terms:
                q = qa + qb
                if q >= trunc:
                    break
                acc[q] = acc[q] + ca * cb if q in acc else ca * cb
        return LeviCivitaNumber(acc.items(), trunc)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Approx)):
            return self.scale(other)
        return NotImplemented

    def invert(self) -> "LeviCivitaNumber":
        if not self.terms:
            raise DomainError("inversion of 0")
        q, c = self.terms[0]
        inv_c = 1 / c
        # self = c eps^q (1 + u), u known modulo eps^(trunc - q)
        rel = self.trunc - q
        u = LeviCivitaNumber([(e - q, a * inv_c) for e, a in self.terms[1:]], rel)
        series = _one_plus_series(u, rel, lambda k: Fraction(-1) ** k)
        return LeviCivitaNumber([(e - q, inv_c * a) for e, a in series.terms], series.trunc - q)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, Approx)):
            if other == 0:
                raise DomainError("division by zero")
            return self.scale(1 / to_scalar(other))
        if not isinstance(other, LeviCivitaNumber):
            return NotImplemented
        return self * other.invert()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.invert()

    def __pow__(self, p):
        if isinstance(p, LeviCivitaNumber):
            return _general_pow(self, p)
        p = to_scalar(p)
        if isinstance(p, Fraction):
            if p.denominator == 1:
                return int_power(self, int(p), LeviCivitaNumber.from_scalar(1, self.trunc))
            return self.pow_rational(p)
        return _general_pow(self, p)

    def pow_rational(self, p) -> "LeviCivitaNumber":
        p = Fraction(p)
        if not self.terms:
            if p > 0:
                return self._like([], self.trunc * p)
            raise DomainError("zero to a non-positive power")
        q, c = self.terms[0]
        if p.denominator != 1 and c < 0:
            raise DomainError("non-integer power of a negative leading coefficient",
                              function="pow", argument=c)
        if q == 0:
            return _taylor(self, "pow", p)
        rel = self.trunc - q
        one_plus_u = LeviCivitaNumber([(e - q, a / c) for e, a in self.terms], rel)
        series = _taylor(one_plus_u, "pow", p)
        cp = scalar_pow(c, p)
        return LeviCivitaNumber([(e + q * p, cp * a) for e, a in series.terms], series.trunc + q * p)

    def apply(self, name: str) -> "LeviCivitaNumber":
        """Elementary function via the Taylor series at the standard part."""
        if name == "abs":
            return -self if self.sign() < 0 else self
        if name == "sqrt" and self.sign() > 0 and not self.is_finite():
            return self.pow_rational(Fraction(1, 2))
        if not self.is_finite():
            if name in ("log", "sqrt") and self.sign() < 0:
                raise DomainError(f"{name} of a negative infinite element", function=name)
            raise NotRepresentable(f"{name} at an infinite element has no series form")
        if name == "sqrt" and self.is_zero():
            return self.pow_rational(Fraction(1, 2))
        if name in ("log", "sqrt"):
            if self.is_zero() or self.sign() < 0:
                raise DomainError(f"{name} of a non-positive element", function=name, argument=self)
            if self.leading_exponent > 0:
                if name == "sqrt":
                    return self.pow_rational(Fraction(1, 2))
                raise NotRepresentable("log of a positive infinitesimal is infinite")
        return _taylor(self, name)

    # -- order ------------------------------------------------------------

    def compare(self, other) -> Ordering:
        d = self - other
        return Ordering.of(d.sign())

    def __lt__(self, other):
        return self.compare(other) is Ordering.LESS

    def __le__(self, other):
        return self.compare(other) is not Ordering.GREATER

    def __gt__(self, other):
        return self.compare(other) is Ordering.GREATER

    def __ge__(self, other):
        return self.compare(other) is not Ordering.LESS

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        cut = min(self.trunc, o.trunc)
        mine = [(q, c) for q, c in self.terms if q < cut]
        theirs = [(q, c) for q, c in o.terms if q < cut]
        return mine == theirs

    __hash__ = None

    # -- text -------------------------------------------------------------

    def __repr__(self):
        return f"LeviCivitaNumber({self.to_text()!r}, trunc={self.trunc})"

    def __str__(self):
        return self.to_text()

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for i, (q, c) in enumerate(self.terms):
            neg = c < 0
            mag = -c if neg else c
            mono = _monomial_text(q)
            if mono is None:
                body = format_scalar(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{format_scalar(mag)}*{mono}"
            if i == 0:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)


def _monomial_text(q: Fraction) -> str | None:
    if q == 0:
        return None
    if q == 1:
        return "eps"
    if q.denominator == 1:
        return f"eps^{q.numerator}"
    if q > 0:
        return f"eps^({q.numerator}/{q.denominator})"
    return f"eps^(-{-q.numerator}/{q.denominator})"


def _one_plus_series(u: LeviCivitaNumber, rel, coeff) -> LeviCivitaNumber:
    """Sum coeff(k) * u**k for a purely infinitesimal u, Horner style."""
    if u.is_zero():
        return LeviCivitaNumber.from_scalar(coeff(0), rel)
    m = u.leading_exponent
    top = max(math.ceil(rel / m), 0)
    acc = LeviCivitaNumber.from_scalar(coeff(top), rel)
    for k in range(top - 1, -1, -1):
        acc = u * acc + coeff(k)
        acc = LeviCivitaNumber(acc.terms, min(acc.trunc, rel))
    return acc


def _taylor_coefficient(name: str, s, k: int, p=None):
    if k == 0:
        return scalar_pow(s, p) if name == "pow" else scalar_fn(name, s)
    if k == 1:
        return pow_derivative(p, s) if name == "pow" else derivative(name, s)
    fact = math.factorial(k)
    if name == "exp":
        return scalar_fn("exp", s) / fact
    if name in ("sin", "cos"):
        cycle = ("sin", "cos", "-sin", "-cos") if name == "sin" else ("cos", "-sin", "-cos", "sin")
        f = cycle[k % 4]
        v = scalar_fn(f.lstrip("-"), s)
        return (-v if f.startswith("-") else v) / fact
    if name == "log":
        return Fraction((-1) ** (k + 1), k) / scalar_pow(s, k)
    if name == "sqrt":
        return binomial(Fraction(1, 2), k) * scalar_pow(s, Fraction(1, 2) - k)
    if name == "pow":
        return binomial(p, k) * scalar_pow(s, p - k)
    raise ValueError(f"no Taylor rule for {name!r}")


def _taylor(a: LeviCivitaNumber, name: str, p=None) -> LeviCivitaNumber:
    """f(s + h) = sum_k f^(k)(s)/k! h^k, s the standard part, h infinitesimal."""
    s = a.standard_part()
    h = a - s
    if h.is_zero():
        return LeviCivitaNumber.from_scalar(_taylor_coefficient(name, s, 0, p), a.trunc)
    top = max(math.ceil(a.trunc / h.leading_exponent), 0)
    acc = LeviCivitaNumber.from_scalar(_taylor_coefficient(name, s, top, p), a.trunc)
    for k in range(top - 1, -1, -1):
        acc = h * acc + _taylor_coefficient(name, s, k, p)
        acc = LeviCivitaNumber(acc.terms, min(acc.trunc, a.trunc))
    return acc


def _general_pow(base: LeviCivitaNumber, p) -> LeviCivitaNumber:
    return (base.apply("log") * p).apply("exp")


# -- functional API ----------------------------------------------------------

def lc_arith(op: str, a, b=None) -> LeviCivitaNumber:
    if op == "neg":
        return -a
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise UsageError(f"unknown operation {op!r}")


def lc_invert(a: LeviCivitaNumber) -> LeviCivitaNumber:
    return a.invert()


def lc_pow_rational(a: LeviCivitaNumber, p) -> LeviCivitaNumber:
    return a.pow_rational(p)


def lc_elementary(name: str, a: LeviCivitaNumber) -> LeviCivitaNumber:
    return a.apply(name)


def lc_sign_cmp(a, b) -> Ordering:
    if not isinstance(a, LeviCivitaNumber):
        a = LeviCivitaNumber.from_scalar(a)
    return a.compare(b)


def lc_order(a: LeviCivitaNumber) -> ExtOrder:
    return a.order()


def lc_standard_part(a: LeviCivitaNumber) -> Scalar:
    return a.standard_part()
