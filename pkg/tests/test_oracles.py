"""Independent reference values, frozen before the engine was run against them."""

import math

import mpmath
import pytest

# pi/2 - Si(1): the tail of sum sin(k x)/k along x = 1/n, as n grows
ABEL_TAIL = 0.624713256427714
# (1 - 1/n)^n x-sequence for the geometric tail
GEOMETRIC_TAIL = 0.36787944117144233
# n at which n^(1/10) overtakes log(n)^3 for good, as log10
CROSSOVER_LOG10 = 65.318


def test_abel_tail_by_quadrature():
    scipy_special = pytest.importorskip("scipy.special")
    si, _ = scipy_special.sici(1.0)
    assert math.pi / 2 - si == pytest.approx(ABEL_TAIL, abs=1e-15)
    with mpmath.workdps(30):
        tail = mpmath.quadosc(lambda t: mpmath.sin(t) / t, [1, mpmath.inf], omega=1)
    assert float(tail) == pytest.approx(ABEL_TAIL, abs=1e-14)


def test_abel_tail_by_scipy_quad():
    integrate = pytest.importorskip("scipy.integrate")
    head, _ = integrate.quad(lambda t: math.sin(t) / t if t else 1.0, 0, 1, epsabs=1e-14)
    assert math.pi / 2 - head == pytest.approx(ABEL_TAIL, abs=1e-13)


def test_geometric_tail():
    assert math.exp(-1) == pytest.approx(GEOMETRIC_TAIL, abs=0)
    # sum_{k>n} x^k (1-x) = x^(n+1) with x = 1 - 1/n
    assert float(mpmath.power(1 - mpmath.mpf(1) / 10**8, 10**8 + 1)) == pytest.approx(GEOMETRIC_TAIL, rel=1e-7)


def test_crossover():
    with mpmath.workdps(40):
        f = lambda t: t / 10 - 3 * mpmath.log(t)  # log of n^(1/10) / log(n)^3, t = log n
        t = mpmath.findroot(f, 150)
        assert f(t - 1) < 0 < f(t + 1)
        assert float(t / mpmath.log(10)) == pytest.approx(CROSSOVER_LOG10, abs=1e-3)
    # every default sampling horizon sits far below it
    assert 46 * math.log10(2) < CROSSOVER_LOG10
