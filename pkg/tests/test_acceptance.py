"""The nine acceptance criteria, one test each, with a PASS/FAIL line per criterion.

Run under pytest (lines appear in the terminal summary) or directly as a script.
"""

import json
import math
import random
import time
from fractions import Fraction

import pytest

import conftest
from bcontinuum import parse
from bcontinuum.analysis import (
    DomainSpec,
    UniformStatus,
    central_difference,
    classify_uniform,
    derivative_st,
    euler_cosine,
    sum_theorem_diagonal,
)
from bcontinuum.dual import derivative_dual
from bcontinuum.errors import DomainError
from bcontinuum.expr import ParseError, to_text
from bcontinuum.germ import DEFAULT_SCHEDULE, Grade, cauchy_order, germ_compare, germ_from_expr, germ_sample
from bcontinuum.levicivita import LeviCivitaNumber as LC
from bcontinuum.numeric import INFINITE_ORDER, Approx, ExtOrder, Ordering
from test_cli import INVOCATIONS, SCHEMA, call
from test_expr import MALFORMED, ROUND_TRIP
from test_oracles import ABEL_TAIL

SEED = 20240607


def record(n: int, ok: bool, detail: str):
    conftest.ACCEPTANCE.append((n, ok, detail))
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, detail


def _random_lc(rng: random.Random, lo: int, hi: int) -> LC:
    lead = Fraction(rng.randint(lo * 4, hi * 4), 4)
    terms = [(lead, Fraction(rng.choice([-1, 1]) * rng.randint(1, 30), rng.randint(1, 9)))]
    for _ in range(rng.randint(0, 4)):
        terms.append((lead + Fraction(rng.randint(1, 16), rng.choice([1, 2, 3, 4])),
                      Fraction(rng.randint(-30, 30), rng.randint(1, 9))))
    return LC(terms)


def test_criterion_1_cauchy_orders():
    rng = random.Random(SEED)
    worst = 0.0
    failures = []
    cases = [("exp(-1/i)", INFINITE_ORDER), ("1/log(i)", ExtOrder(0))]
    for _ in range(20):
        d = rng.randint(1, 12)
        q = Fraction(rng.randint(1, 8 * d), d)
        cases.append((f"i^({q})", ExtOrder(q)))
    for text, want in cases:
        t0 = time.perf_counter()
        got = cauchy_order(text)
        worst = max(worst, time.perf_counter() - t0)
        if got.order != want:
            failures.append(f"{text} gave {got.order}")
        elif got.interval and want.value is not None:
            lo, hi = got.interval
            if hi - lo > Fraction(1, 2**20):
                failures.append(f"{text} interval too wide")
    ok = not failures and worst < 5.0
    record(1, ok, f"{len(cases)} orders, slowest {worst:.2f}s" + (f", {failures}" if failures else ""))


def test_criterion_2_order_laws():
    rng = random.Random(SEED + 2)
    bad = 0
    for _ in range(1000):
        a, b = _random_lc(rng, -3, 3), _random_lc(rng, -3, 3)
        if (a * b).order() != ExtOrder(a.leading_exponent + b.leading_exponent):
            bad += 1
        if a.leading_exponent != b.leading_exponent:
            if (a + b).order() != min(a.order(), b.order()):
                bad += 1
        p, q = Fraction(rng.randint(-24, 24), rng.randint(1, 6)), Fraction(rng.randint(-24, 24), rng.randint(1, 6))
        ep, eq = LC.monomial(1, p), LC.monomial(1, q)
        if (ep.compare(eq) is Ordering.LESS) != (p > q):
            bad += 1
    record(2, bad == 0, f"1000 pairs, {bad} violations")


def test_criterion_3_standard_part_homomorphism():
    rng = random.Random(SEED + 3)
    bad = 0
    for _ in range(1000):
        a, b = _random_lc(rng, 0, 3), _random_lc(rng, 0, 3)
        if (a + b).standard_part() != a.standard_part() + b.standard_part():
            bad += 1
        if (a * b).standard_part() != a.standard_part() * b.standard_part():
            bad += 1
        c = _random_lc(rng, -3, -1)
        try:
            c.standard_part()
            bad += 1
        except DomainError:
            pass
    record(3, bad == 0, f"1000 finite pairs exact, {bad} violations")


CATALOG = ["x^2", "x^3", "exp(x)", "sin(x)", "cos(x)", "log(1+x)", "sqrt(1+x)",
           "sin(x)*exp(x)", "1/(1+x^2)", "x^(5/2)"]
POINTS = [Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2)]


def test_criterion_4_derivatives():
    mismatched, worst_rel = 0, 0.0
    for text in CATALOG:
        tree = parse(text)
        for x0 in POINTS:
            lc, dual = derivative_st(tree, x0), derivative_dual(tree, x0)
            if not (type(lc) is type(dual) and lc == dual):
                mismatched += 1
            d = float(lc)
            worst_rel = max(worst_rel, abs(d - central_difference(tree, x0)) / max(1.0, abs(d)))
    exp_err = max(abs(float(derivative_st("exp(x)", Approx(float(x)))) - math.exp(x)) / math.exp(x)
                  for x in (0.0, 0.5, 1.0, 2.0))
    ok = mismatched == 0 and worst_rel <= 1e-5 and exp_err <= 1e-12
    record(4, ok, f"50 cases, LC/dual mismatches {mismatched}, central diff rel {worst_rel:.1e}, exp rel {exp_err:.1e}")


def test_criterion_5_microcontinuity():
    t0 = time.perf_counter()
    sin_r = classify_uniform("sin(1/x)", DomainSpec.parse("(0,1)"))
    sq_r = classify_uniform("x^2", DomainSpec.parse("(-inf,inf)"))
    unit = classify_uniform("x^2", DomainSpec.parse("[0,1]"))
    elapsed = time.perf_counter() - t0
    checks = [
        sin_r.status is UniformStatus.NOT_UNIFORM,
        sin_r.refuted.witness.family == "oscillation",
        abs(float(sin_r.refuted.witness.gap.value) - 1) <= 1e-6,
        sq_r.status is UniformStatus.NOT_UNIFORM,
        sq_r.refuted.witness.family == "infinite point",
        abs(float(sq_r.refuted.witness.gap.value) - 2) <= 1e-6,
        unit.status is UniformStatus.UNIFORM_ON_PROBES,
        all(p.delta_order is None or p.delta_order >= ExtOrder(1)
            for p in unit.probes if p.probe.kind.value == "standard"),
        elapsed < 10.0,
    ]
    record(5, all(checks), f"gaps {sin_r.refuted.witness.gap.value} and {sq_r.refuted.witness.gap.value}, "
                           f"{elapsed:.2f}s")


def test_criterion_6_sum_theorem():
    abel = sum_theorem_diagonal("sin(k*x)/k", "1/n")
    tele = sum_theorem_diagonal("1/k - 1/(k+1)", "1/n")
    err = abs(abel.diagonal_limit - ABEL_TAIL)
    checks = [
        err < 0.01,
        abel.verdict1853 == "violated",
        abel.verdict1821 == "satisfied",
        tele.null is True,
        tele.verdict1821 == "satisfied" and tele.verdict1853 == "satisfied",
    ]
    record(6, all(checks), f"diagonal limit {abel.diagonal_limit:.10f} vs oracle {ABEL_TAIL}, "
                           f"Abel {abel.verdict1821}/{abel.verdict1853}, "
                           f"telescoping {tele.verdict1821}/{tele.verdict1853}")


def test_criterion_7_euler_cosine():
    worst_term, worst_sum, shrinks = 0.0, 0.0, True
    for v in (1, 2):
        fine, coarse = euler_cosine(v, 8, 10**6), euler_cosine(v, 8, 10**5)
        worst_term = max(worst_term, max(r.error for r in fine.rows[:5]))
        worst_sum = max(worst_sum, fine.error)
        shrinks &= all(f.error < c.error for f, c in zip(fine.rows[:5], coarse.rows[:5]))
    ok = worst_term <= 1e-4 and worst_sum <= 1e-6 and shrinks
    record(7, ok, f"term error {worst_term:.1e}, partial sum error {worst_sum:.1e}, shrinks with horizon {shrinks}")


def test_criterion_8_frechet():
    g = germ_from_expr("1/n")
    modified = g.with_overrides({1: 7, 5: -2, 100: 0})
    eq = germ_compare(modified, g).answer is Ordering.EQUAL
    unknown = not germ_compare("(-1)^n/n", 0).known
    v = germ_compare("n^(1/10)", "log(n)^3")
    adversarial = all(germ_sample("n^(1/10)", h) < germ_sample("log(n)^3", h) for h in DEFAULT_SCHEDULE.horizons)
    ok = eq and unknown and v.answer is Ordering.GREATER and v.grade is Grade.SYMBOLIC and adversarial
    record(8, ok, f"override equal {eq}, oscillating unknown {unknown}, "
                  f"adversarial {v.answer.name.lower()} at {v.grade.value} grade, sampling disagrees {adversarial}")


def test_criterion_9_parser_and_schema():
    import jsonschema

    unstable = [t for t in ROUND_TRIP if to_text(parse(to_text(parse(t)))) != to_text(parse(t))
                or parse(to_text(parse(t))) != parse(t)]
    unpositioned = []
    for text, offset in MALFORMED:
        try:
            parse(text)
            unpositioned.append(text)
        except ParseError as exc:
            if exc.offset != offset:
                unpositioned.append(text)
    invalid = []
    for name, argv in INVOCATIONS.items():
        code, out, _ = call(argv + ["--json"])
        try:
            jsonschema.validate(json.loads(out), SCHEMA)
        except (jsonschema.ValidationError, json.JSONDecodeError):
            invalid.append(name)
        if code != 0:
            invalid.append(name)
    ok = not unstable and not unpositioned and not invalid and len(ROUND_TRIP) >= 50 and len(MALFORMED) >= 20
    record(9, ok, f"{len(ROUND_TRIP)} round trips, {len(MALFORMED)} malformed, "
                  f"{len({a[0] for a in INVOCATIONS.values()})} subcommands validated")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
