"""Derivatives as the standard part of an infinitesimal difference quotient."""

from __future__ import annotations

from fractions import Fraction

from bcontinuum import expr as E
from bcontinuum.errors import NonDifferentiable, UsageError
from bcontinuum.levicivita import DEFAULT_TRUNC, LeviCivitaNumber
from bcontinuum.numeric import Approx, Scalar, to_scalar


def _single_var(e: E.Expr) -> str | None:
    names = E.free_vars(e)
    if len(names) > 1:
        raise UsageError(f"expected one variable, got {sorted(names)}")
    return next(iter(names), None)


def difference_quotient(e, x0, h: LeviCivitaNumber) -> LeviCivitaNumber:
    """(f(x0 + h) - f(x0)) / h evaluated in the series field."""
    e = E.ensure_expr(e)
    name = _single_var(e)
    if name is None:
        return LeviCivitaNumber((), h.trunc)
    base = LeviCivitaNumber.from_scalar(to_scalar(x0), h.trunc)
    f1 = E.evaluate(e, {name: base + h})
    f0 = E.evaluate(e, {name: base})
    return (f1 - f0) / h


def _agree(a: Scalar, b: Scalar) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    fa, fb = float(a), float(b)
    return abs(fa - fb) <= 1e-12 * max(1.0, abs(fa), abs(fb))


def derivative_st(e, x0, trunc=DEFAULT_TRUNC) -> Scalar:
    """st((f(x0+eps) - f(x0)) / eps), checked against the quotient at -eps.

    Raises NonDifferentiable when either quotient is infinite or the two
    standard parts differ.
    """
    eps = LeviCivitaNumber.eps(trunc)
    parts = []
    for h in (eps, -eps):
        q = difference_quotient(e, x0, h)
        if not q.is_finite():
            raise NonDifferentiable(f"difference quotient is infinite at {x0}: {q}")
        parts.append(q.standard_part())
    right, left = parts
    if not _agree(right, left):
        raise NonDifferentiable(f"one-sided quotients disagree at {x0}: {right} vs {left}")
    return right


def central_difference(e, x0, h: float = 1e-6) -> float:
    e = E.ensure_expr(e)
    name = _single_var(e)
    if name is None:
        return 0.0
    x = float(to_scalar(x0))
    hi = E.evaluate(e, {name: Approx(x + h)})
    lo = E.evaluate(e, {name: Approx(x - h)})
    return (float(hi) - float(lo)) / (2 * h)
