"""Scalar arithmetic: exact rationals and tracked-precision approximate reals.

Exact values are plain :class:`fractions.Fraction` objects. :class:`Approx`
is entered only when an elementary function is applied at a non-special
point, and it never claims more digits than its least precise operand.
"""

from __future__ import annotations

import enum
import math
import operator
import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from bcontinuum.errors import DomainError

Rational = Fraction

DEFAULT_PRECISION = 15

ELEMENTARY = ("sin", "cos", "exp", "log", "sqrt", "abs")


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1

    @classmethod
    def of(cls, value) -> "Ordering":
        if value > 0:
            return cls.GREATER
        if value < 0:
            return cls.LESS
        return cls.EQUAL

    def __str__(self):
        return self.name.lower()


@dataclass(frozen=True)
class Approx:
    """A finite double with a claimed number of correct decimal digits."""

    value: float
    precision_hint: int = DEFAULT_PRECISION

    def __post_init__(self):
        v = float(self.value)
        if not math.isfinite(v):
            raise DomainError(f"non-finite approximate value {v!r}", argument=v)
        object.__setattr__(self, "value", v)
        if self.precision_hint < DEFAULT_PRECISION:
            object.__setattr__(self, "precision_hint", DEFAULT_PRECISION)

    def _binary(self, other, op, reflected=False):
        if isinstance(other, Approx):
            prec = min(self.precision_hint, other.precision_hint)
            ov = other.value
        elif isinstance(other, (int, Fraction)):
            prec = self.precision_hint
            ov = float(other)
        else:
            return NotImplemented
        a, b = (ov, self.value) if reflected else (self.value, ov)
        try:
            return Approx(op(a, b), prec)
        except ZeroDivisionError:
            raise DomainError("division by zero") from None
        except OverflowError:
            raise DomainError("overflow in approximate arithmetic") from None

    def __add__(self, other):
        return self._binary(other, operator.add)

    def __radd__(self, other):
        return self._binary(other, operator.add, True)

    def __sub__(self, other):
        return self._binary(other, operator.sub)

    def __rsub__(self, other):
        return self._binary(other, operator.sub, True)

    def __mul__(self, other):
        return self._binary(other, operator.mul)

    def __rmul__(self, other):
        return self._binary(other, operator.mul, True)

    def __truediv__(self, other):
        return self._binary(other, operator.truediv)

    def __rtruediv__(self, other):
        return self._binary(other, operator.truediv, True)

    def __pow__(self, other):
        return scalar_pow(self, other)

    def __rpow__(self, other):
        return scalar_pow(to_scalar(other), self)

    def __neg__(self):
        return Approx(-self.value, self.precision_hint)

    def __pos__(self):
        return self

    def __abs__(self):
        return Approx(abs(self.value), self.precision_hint)

    def __float__(self):
        return self.value

    def __bool__(self):
        return self.value != 0.0

    def _cmp(self, other, op):
        if isinstance(other, Approx):
            return op(self.value, other.value)
        if isinstance(other, (int, Fraction)):
            # exact comparison, no rounding of the rational side
            return op(Fraction(self.value), other)
        if isinstance(other, float):
            return op(self.value, other)
        return NotImplemented

    def __eq__(self, other):
        r = self._cmp(other, operator.eq)
        return r

    def __hash__(self):
        return hash(self.value)

    def __lt__(self, other):
        return self._cmp(other, operator.lt)

    def __le__(self, other):
        return self._cmp(other, operator.le)

    def __gt__(self, other):
        return self._cmp(other, operator.gt)

    def __ge__(self, other):
        return self._cmp(other, operator.ge)

    def __repr__(self):
        return f"Approx({self.value!r})"

    def __str__(self):
        return repr(self.value)


Scalar = Union[Fraction, Approx]


@functools.total_ordering
@dataclass(frozen=True)
class ExtOrder:
    """Order of an infinitesimal: a finite rational or positive infinity."""

    value: Fraction | None  # None encodes +infinity

    def __post_init__(self):
        if self.value is not None:
            object.__setattr__(self, "value", Fraction(self.value))

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __lt__(self, other: "ExtOrder") -> bool:
        if not isinstance(other, ExtOrder):
            return NotImplemented
        if self.value is None:
            return False
        return other.value is None or self.value < other.value

    def __str__(self):
        return "infinity" if self.value is None else format_scalar(self.value)


INFINITE_ORDER = ExtOrder(None)


def to_scalar(x) -> Scalar:
    """Coerce ints, floats, strings like ``"3/4"`` and scalars to a Scalar."""
    if isinstance(x, (Fraction, Approx)):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Approx(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to a scalar")


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction))


def normalize(x: Fraction) -> Fraction:
    # Fraction already reduces on construction; this exists for the contract
    return Fraction(x.numerator, x.denominator)


def rat_arith(op: str, a: Fraction, b: Fraction | int | None = None):
    """Exact rational arithmetic; ``cmp`` returns an :class:`Ordering`."""
    a = Fraction(a)
    if op == "neg":
        return -a
    if op == "pow_int":
        if not isinstance(b, int):
            raise TypeError("pow_int needs a machine integer exponent")
        if a == 0 and b < 0:
            raise DomainError("zero to a negative power", argument=a)
        return a**b
    b = Fraction(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b == 0:
            raise DomainError("division by zero", argument=a)
        return a / b
    if op == "cmp":
        return Ordering.of(a - b)
    raise ValueError(f"unknown rational operation {op!r}")


_MATH = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "log": math.log,
    "sqrt": math.sqrt,
    "abs": abs,
}


def approx_fn(name: str, x) -> Approx:
    """Evaluate an elementary function in double precision."""
    if name not in _MATH:
        raise ValueError(f"unknown elementary function {name!r}")
    if not isinstance(x, Approx):
        x = Approx(float(x))
    v = x.value
    if name == "log" and v <= 0:
        raise DomainError(f"log of non-positive {v!r}", function=name, argument=x)
    if name == "sqrt" and v < 0:
        raise DomainError(f"sqrt of negative {v!r}", function=name, argument=x)
    try:
        return Approx(_MATH[name](v), x.precision_hint)
    except OverflowError:
        raise DomainError(f"{name} overflows at {v!r}", function=name, argument=x) from None


def iroot(n: int, k: int) -> int | None:
    """Exact integer k-th root of n >= 0, or None."""
    if n < 0:
        return None
    if n < 2:
        return n
    lo, hi = 0, 1 << (n.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid**k <= n:
            lo = mid
        else:
            hi = mid - 1
    return lo if lo**k == n else None


def exact_root(a: Fraction, k: int) -> Fraction | None:
    if a < 0:
        return None
    num = iroot(a.numerator, k)
    den = iroot(a.denominator, k)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def scalar_fn(name: str, x) -> Scalar:
    """Elementary function on a scalar, exact at the special points."""
    x = to_scalar(x)
    if isinstance(x, Fraction):
        if name == "abs":
            return abs(x)
        if name == "log" and x <= 0:
            raise DomainError(f"log of non-positive {x}", function=name, argument=x)
        if name == "sqrt":
            if x < 0:
                raise DomainError(f"sqrt of negative {x}", function=name, argument=x)
            r = exact_root(x, 2)
            if r is not None:
                return r
        if x == 0 and name in ("sin", "exp", "cos"):
            return Fraction(0) if name == "sin" else Fraction(1)
        if x == 1 and name == "log":
            return Fraction(0)
    return approx_fn(name, x)


def scalar_pow(a, p) -> Scalar:
    """``a ** p`` for scalars; exact when the result is rational."""
    a = to_scalar(a)
    p = to_scalar(p)
    if isinstance(p, Fraction) and p.denominator == 1:
        k = int(p)
        if a == 0 and k < 0:
            raise DomainError("zero to a negative power", function="pow", argument=a)
        if isinstance(a, Fraction):
            return a**k
        try:
            return Approx(a.value**k, a.precision_hint)
        except (OverflowError, ZeroDivisionError):
            raise DomainError("overflow in power", function="pow", argument=a) from None
    if a < 0:
        raise DomainError("non-integer power of a negative number", function="pow", argument=a)
    if a == 0:
        if p > 0:
            return Fraction(0)
        raise DomainError("zero to a non-positive power", function="pow", argument=a)
    if isinstance(a, Fraction) and isinstance(p, Fraction):
        r = exact_root(a, p.denominator)
        if r is not None:
            return r**p.numerator
    prec = min(
        a.precision_hint if isinstance(a, Approx) else DEFAULT_PRECISION,
        p.precision_hint if isinstance(p, Approx) else DEFAULT_PRECISION,
    )
    try:
        return Approx(float(a) ** float(p), prec)
    except OverflowError:
        raise DomainError("overflow in power", function="pow", argument=a) from None


def derivative(name: str, a) -> Scalar:
    """Closed-form first derivative of an elementary function at ``a``.

    Shared by the dual-number lift and by the first Taylor coefficient of the
    series backend, so both routes round identically.
    """
    if name == "sin":
        return scalar_fn("cos", a)
    if name == "cos":
        return -scalar_fn("sin", a)
    if name == "exp":
        return scalar_fn("exp", a)
    if name == "log":
        if a <= 0:
            raise DomainError("log of non-positive", function=name, argument=a)
        return 1 / to_scalar(a)
    if name == "sqrt":
        if a <= 0:
            raise DomainError("sqrt not differentiable at non-positive", function=name, argument=a)
        return 1 / (2 * scalar_fn("sqrt", a))
    if name == "abs":
        if a == 0:
            raise DomainError("abs has no derivative at 0", function=name, argument=a)
        return Fraction(1 if a > 0 else -1)
    raise ValueError(f"unknown elementary function {name!r}")


def pow_derivative(p, a) -> Scalar:
    """d/dx x**p at a, i.e. p * a**(p-1)."""
    return to_scalar(p) * scalar_pow(a, to_scalar(p) - 1)


def format_scalar(x) -> str:
    """Decimal string for JSON: exact rationals stay exact (``"1/3"``)."""
    x = to_scalar(x)
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    return repr(x.value)


def int_power(x, k: int, one):
    """Binary exponentiation; shared so every backend multiplies in the same order."""
    if k < 0:
        return one / int_power(x, -k, one)
    result = one
    base = x
    first = True
    while k:
        if k & 1:
            result = base if first else result * base
            first = False
        k >>= 1
        if k:
            base = base * base
    return result


def binomial(p, k: int) -> Fraction:
    """Generalised binomial coefficient C(p, k) for rational p."""
    out = Fraction(1)
    for j in range(k):
        out = out * (p - j) / (j + 1)
    return out
