from fractions import Fraction

import math
import pytest
from hypothesis import given, strategies as st

from bcontinuum.errors import DomainError
from bcontinuum.numeric import (
    Approx,
    ExtOrder,
    Ordering,
    approx_fn,
    binomial,
    format_scalar,
    normalize,
    rat_arith,
    scalar_fn,
    scalar_pow,
)

rationals = st.fractions(max_denominator=10**6).filter(lambda q: abs(q) < 10**9)
nonzero = rationals.filter(lambda q: q != 0)


def test_rat_arith_examples():
    assert rat_arith("add", Fraction(1, 3), Fraction(1, 6)) == Fraction(1, 2)
    assert rat_arith("cmp", Fraction(-1, 2), Fraction(1, 3)) is Ordering.LESS
    assert rat_arith("pow_int", Fraction(2, 3), 3) == Fraction(8, 27)


def test_division_by_zero():
    with pytest.raises(DomainError):
        rat_arith("div", Fraction(1), Fraction(0))
    with pytest.raises(DomainError):
        rat_arith("pow_int", Fraction(0), -1)


def test_canonical_zero():
    z = rat_arith("sub", Fraction(3, 7), Fraction(6, 14))
    assert (z.numerator, z.denominator) == (0, 1)


@given(rationals, nonzero)
def test_exact_inverse_operations(a, b):
    assert rat_arith("sub", rat_arith("add", a, b), b) == a
    assert rat_arith("div", rat_arith("mul", a, b), b) == a


@given(rationals, rationals)
def test_cmp_antisymmetric(a, b):
    assert rat_arith("cmp", a, b) == -rat_arith("cmp", b, a)


@given(rationals, rationals, rationals)
def test_cmp_transitive(a, b, c):
    if rat_arith("cmp", a, b) <= 0 and rat_arith("cmp", b, c) <= 0:
        assert rat_arith("cmp", a, c) <= 0


@given(rationals)
def test_normalize_idempotent(a):
    assert normalize(normalize(a)) == normalize(a)
    n = normalize(a)
    assert n.denominator > 0 and math.gcd(n.numerator, n.denominator) == 1


def test_approx_fn_examples():
    assert approx_fn("exp", Approx(0.0)).value == 1.0
    with pytest.raises(DomainError) as info:
        approx_fn("log", Approx(-1.0))
    assert info.value.function == "log"
    assert abs(approx_fn("sin", Approx(math.pi / 2)).value - 1) <= 1e-15


def test_approx_invariants():
    assert Approx(1.0, 3).precision_hint == 15
    with pytest.raises(DomainError):
        Approx(float("nan"))
    mixed = Approx(1.5, 20) + Approx(1.0, 17)
    assert mixed.precision_hint == 17


def test_scalar_fn_exact_points():
    assert scalar_fn("sin", Fraction(0)) == 0
    assert scalar_fn("cos", Fraction(0)) == 1
    assert scalar_fn("log", Fraction(1)) == 0
    assert scalar_fn("sqrt", Fraction(9, 4)) == Fraction(3, 2)
    assert isinstance(scalar_fn("sqrt", Fraction(2)), Approx)


def test_scalar_pow():
    assert scalar_pow(Fraction(4), Fraction(3, 2)) == 8
    assert scalar_pow(Fraction(8, 27), Fraction(-1, 3)) == Fraction(3, 2)
    with pytest.raises(DomainError):
        scalar_pow(Fraction(-2), Fraction(1, 2))


def test_binomial_and_format():
    assert binomial(Fraction(1, 2), 2) == Fraction(-1, 8)
    assert format_scalar(Fraction(-3, 4)) == "-3/4"
    assert format_scalar(Fraction(5)) == "5"
    assert str(ExtOrder(None)) == "infinity"
    assert str(ExtOrder(Fraction(3, 2))) == "3/2"
