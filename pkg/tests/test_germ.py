from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from bcontinuum import parse
from bcontinuum.errors import DomainError, NotRepresentable, UsageError
from bcontinuum.expr import evaluate
from bcontinuum.germ import (
    DEFAULT_SCHEDULE,
    Germ,
    Grade,
    HorizonSchedule,
    NotSymbolic,
    cauchy_order,
    germ_compare,
    germ_from_expr,
    germ_is_null,
    germ_limit,
    germ_sample,
    simplest_between,
)
from bcontinuum.germ import asymptotic as A
from bcontinuum.germ import sampling as S
from bcontinuum.levicivita import LeviCivitaNumber as LC
from bcontinuum.numeric import INFINITE_ORDER, ExtOrder, Ordering


def test_from_expr_examples():
    assert germ_is_null("1/n").answer is True
    assert germ_limit("n").kind == "infinite"
    g = germ_from_expr("(-1)^n/n")
    assert g.oscillatory
    assert not germ_compare(g, 0).known
    with pytest.raises(UsageError):
        germ_from_expr(parse("x+1"))


def test_sample_examples():
    assert germ_sample("1/n", 4) == Fraction(1, 4)
    assert germ_sample("(-1)^n/n", 3) == Fraction(-1, 3)
    assert germ_sample("log(n)", 1) == 0
    with pytest.raises(DomainError):
        germ_sample("1/(n-2)", 2)


def test_compare_examples():
    v = germ_compare("n^(1/10)", "log(n)^3")
    assert v.answer is Ordering.GREATER and v.grade is Grade.SYMBOLIC
    assert germ_compare("1/n", 0).answer is Ordering.GREATER
    assert germ_compare("n", "n+1").answer is Ordering.LESS
    assert germ_compare("exp(n)", "n^64").answer is Ordering.GREATER


def test_adversarial_numeric_tier():
    # sampling alone sides with log(n)^3 at every default horizon
    for h in DEFAULT_SCHEDULE.horizons:
        assert germ_sample("n^(1/10)", h) < germ_sample("log(n)^3", h)
    assert germ_compare("n^(1/10)", "log(n)^3", tier="numeric").answer is Ordering.LESS


def test_null_and_limit_examples():
    assert germ_is_null("1/log(n)").answer is True
    assert germ_is_null("(n+1)/n").answer is False
    assert germ_limit("(n+1)/n").value == 1
    assert germ_limit("sin(n)").kind == "unknown"
    assert germ_limit("(1-1/n)^(n+1)").value == pytest.approx(float(mpmath.e ** -1), rel=1e-15)
    assert germ_limit("log(2*n)-log(n)").value == pytest.approx(0.6931471805599453)


def test_exact_trig_identity():
    g = evaluate(parse("sin(1/x)"), {"x": germ_from_expr("1/(2*pi*n)")})
    assert isinstance(g, Germ)
    v = germ_is_null(g)
    assert v.answer is True and v.grade is Grade.SYMBOLIC
    assert germ_limit(germ_from_expr("cos(2*pi*n+pi/2)")).value == 0


def test_not_symbolic_routes_to_numeric():
    for text in ["sin(n)", "(-1)^n/n", "n^n", "log(log(n))"]:
        with pytest.raises(NotSymbolic):
            A.from_expr(parse(text, variables={"n"}))
    v = germ_is_null("sin(n)/n")
    assert v.answer is True and v.grade is Grade.NUMERIC


def test_abs_needs_decided_sign():
    assert germ_compare(germ_from_expr("-1/n").apply("abs"), "1/n").answer is Ordering.EQUAL
    with pytest.raises(NotRepresentable):
        germ_from_expr("(-1)^n/n").apply("abs")


def test_opaque_germ():
    g = Germ(sampler=lambda n: Fraction(1, n * n))
    v = germ_is_null(g)
    assert v.answer is True and v.grade is Grade.NUMERIC
    assert germ_sample(g * 2, 2) == Fraction(1, 2)


def test_schedule_validation():
    assert DEFAULT_SCHEDULE.horizons[0] == 2**10 and DEFAULT_SCHEDULE.horizons[-1] == 2**46
    with pytest.raises(UsageError):
        HorizonSchedule((10,))
    with pytest.raises(UsageError):
        HorizonSchedule((10, 5))


@settings(max_examples=40, deadline=None)
@given(st.dictionaries(st.integers(1, 5000), st.integers(-100, 100), max_size=6),
       st.sampled_from(["1/n", "sin(n)", "n^2-3", "(-1)^n/n", "log(n)/n"]))
def test_frechet_law(overrides, body):
    g = germ_from_expr(body)
    modified = g.with_overrides(overrides)
    for k, v in overrides.items():
        assert germ_sample(modified, k) == v
    assert germ_compare(modified, g).answer is Ordering.EQUAL


CORPUS = ["1/n", "n", "log(n)", "n^(1/10)", "log(n)^3", "exp(n)", "n^64", "1/log(n)", "(n+1)/n",
          "1", "2", "sqrt(n)", "n*log(n)", "exp(-n)", "n^2-n", "(1-1/n)^n", "exp(1/n)"]


def test_symbolic_verdicts_form_strict_partial_order():
    germs = [germ_from_expr(t) for t in CORPUS]
    less = {}
    for i, a in enumerate(germs):
        for j, b in enumerate(germs):
            v = germ_compare(a, b, tier="symbolic")
            if i == j:
                assert v.answer is Ordering.EQUAL
            if v.answer is Ordering.LESS:
                less[i, j] = True
                assert germ_compare(b, a, tier="symbolic").answer is Ordering.GREATER
    for (i, j) in less:
        for k in range(len(germs)):
            if (j, k) in less:
                assert (i, k) in less
                assert (k, i) not in less


SOUNDNESS = [("n^(1/10)", "log(n)^3", 10**70), ("1/n", "1/n^2", 10), ("n^2", "n^2-n", 10),
             ("exp(n/100)", "n^3", 10**4), ("(n+1)/n", "1", 10), ("log(n)^2", "sqrt(n)", 10**6)]


@pytest.mark.parametrize("a,b,horizon", SOUNDNESS)
def test_symbolic_verdict_matches_sampling_past_threshold(a, b, horizon):
    v = germ_compare(a, b)
    assert v.grade is Grade.SYMBOLIC
    with mpmath.workdps(120):
        x = S.to_mpf(germ_from_expr(a).raw(horizon))
        y = S.to_mpf(germ_from_expr(b).raw(horizon))
    assert Ordering.of(x - y) is v.answer


def test_null_implies_zero_limit():
    for text in ["1/n", "1/log(n)", "exp(-n)", "sin(n)/n", "n^2-(n+1/n)^2+2", "sin(2*pi*n)"]:
        if germ_is_null(text).answer is True:
            lim = germ_limit(text)
            assert lim.kind == "finite" and lim.value == 0


def test_cauchy_order_examples():
    assert cauchy_order("exp(-1/i)").order == INFINITE_ORDER
    assert cauchy_order("1/log(i)").order == ExtOrder(0)
    r = cauchy_order("i^(3/2)")
    assert r.order == ExtOrder(Fraction(3, 2))
    lo, hi = r.interval
    assert hi - lo <= Fraction(1, 2**20)


def test_cauchy_order_non_regular():
    r = cauchy_order("i*(2+sin(1/i))")
    assert r.order == ExtOrder(1)
    assert not r.regular and r.grade is Grade.NUMERIC


def test_cauchy_order_unknown():
    assert not cauchy_order("exp(1/i)").known


@pytest.mark.parametrize("text", ["3*eps^2 + eps^5", "eps^(1/3) - eps", "2 - eps", "eps^(7/4)*(1+eps)",
                                  "eps^-1 + 4", "eps^(5/2) + eps^3", "sin(eps)", "1 - cos(eps)"])
def test_order_matches_series_order(text):
    a = LC.parse(text)
    f = parse(text.replace("eps", "i"), variables={"i"})
    assert cauchy_order(f).order == a.order()


def test_simplest_between():
    assert simplest_between(Fraction(1, 3), Fraction(1, 2)) == Fraction(1, 2)
    assert simplest_between(Fraction(-1, 10), Fraction(1, 10)) == 0
    assert simplest_between(Fraction(3, 10), Fraction(7, 20)) == Fraction(1, 3)
    assert simplest_between(Fraction(-7, 20), Fraction(-3, 10)) == Fraction(-1, 3)
