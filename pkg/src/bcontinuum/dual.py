"""Dual numbers a + b*delta with delta**2 = 0, used for forward-mode derivatives."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from bcontinuum import expr as _expr
from bcontinuum.errors import DomainError, UsageError
from bcontinuum.numeric import (
    Approx,
    Scalar,
    derivative,
    format_scalar,
    int_power,
    pow_derivative,
    scalar_fn,
    scalar_pow,
    to_scalar,
)

_SCALARS = (int, Fraction, Approx)


@dataclass(frozen=True)
class DualNumber:
    real: Scalar
    slope: Scalar = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "real", to_scalar(self.real))
        object.__setattr__(self, "slope", to_scalar(self.slope))

    @staticmethod
    def _coerce(other):
        if isinstance(other, DualNumber):
            return other
        if isinstance(other, _SCALARS):
            return DualNumber(other, Fraction(0))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return DualNumber(self.real + o.real, self.slope + o.slope)

    __radd__ = __add__

    def __neg__(self):
        return DualNumber(-self.real, -self.slope)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return DualNumber(self.real - o.real, self.slope - o.slope)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            return DualNumber(self.real * other, self.slope * other)
        if not isinstance(other, DualNumber):
            return NotImplemented
        return DualNumber(self.real * other.real, self.real * other.slope + self.slope * other.real)

    def __rmul__(self, other):
        if isinstance(other, _SCALARS):
            return DualNumber(other * self.real, other * self.slope)
        return NotImplemented

    def inverse(self) -> "DualNumber":
        if self.real == 0:
            raise DomainError("dual number with zero real part is a zero divisor")
        inv = 1 / self.real
        # same operation order as the series inverse: inv * -(b * inv)
        return DualNumber(inv, inv * -(self.slope * inv))

    def __truediv__(self, other):
        if isinstance(other, _SCALARS):
            if other == 0:
                raise DomainError("division by zero")
            return self * (1 / to_scalar(other))
        if not isinstance(other, DualNumber):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, p):
        if isinstance(p, DualNumber):
            return (self.apply("log") * p).apply("exp")
        p = to_scalar(p)
        if isinstance(p, Fraction) and p.denominator == 1:
            return int_power(self, int(p), DualNumber(Fraction(1)))
        return DualNumber(scalar_pow(self.real, p), pow_derivative(p, self.real) * self.slope)

    def apply(self, name: str) -> "DualNumber":
        """f(a + b delta) = f(a) + f'(a) b delta, from the closed-form table."""
        if name == "abs" and self.real == 0 and self.slope == 0:
            return self
        return DualNumber(scalar_fn(name, self.real), derivative(name, self.real) * self.slope)

    def __str__(self):
        return f"{format_scalar(self.real)} + {format_scalar(self.slope)}*delta"


def dual_arith(op: str, x: DualNumber, y: DualNumber) -> DualNumber:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise UsageError(f"unknown operation {op!r}")


def dual_elementary(name: str, x: DualNumber) -> DualNumber:
    return x.apply(name)


def derivative_dual(e, x0) -> Scalar:
    """Slope of ``e`` evaluated at ``x0 + delta``."""
    e = _expr.ensure_expr(e)
    names = _expr.free_vars(e)
    if not names:
        return Fraction(0)
    (name,) = names
    out = _expr.evaluate(e, {name: DualNumber(to_scalar(x0), Fraction(1))})
    if isinstance(out, DualNumber):
        return out.slope
    return Fraction(0)
