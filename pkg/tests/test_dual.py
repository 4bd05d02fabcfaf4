from fractions import Fraction

import pytest

from bcontinuum import parse
from bcontinuum.analysis.derivative import derivative_st
from bcontinuum.dual import DualNumber, derivative_dual, dual_arith, dual_elementary
from bcontinuum.errors import DomainError

CATALOG = ["x^2", "x^3", "exp(x)", "sin(x)", "cos(x)", "log(1+x)", "sqrt(1+x)",
           "sin(x)*exp(x)", "1/(1+x^2)", "x^(5/2)"]
POINTS = [Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2)]


def test_delta_squared_is_zero():
    d = DualNumber(0, 1)
    assert d * d == DualNumber(0, 0)


def test_arith():
    a, b = DualNumber(2, 3), DualNumber(5, 7)
    assert dual_arith("mul", a, b) == DualNumber(10, 29)
    assert dual_arith("div", a, b) * b == a
    with pytest.raises(DomainError):
        DualNumber(0, 1).inverse()


def test_elementary():
    out = dual_elementary("sin", DualNumber(Fraction(0), Fraction(1)))
    assert out == DualNumber(0, 1)


def test_polynomial_exact():
    assert derivative_dual(parse("x^3 - 2*x"), Fraction(1, 3)) == Fraction(1, 3) - 2


@pytest.mark.parametrize("text", CATALOG)
def test_lc_and_dual_agree_bitwise(text):
    tree = parse(text)
    for x0 in POINTS:
        a, b = derivative_st(tree, x0), derivative_dual(tree, x0)
        assert type(a) is type(b)
        assert a == b
