"""The cosine series read off de Moivre's formula at an infinite index.

With z = v/n and n infinite, the k-th term of the expansion of cos(n z)

    T_k(n) = C(n, 2k) cos(v/n)^(n-2k) sin(v/n)^(2k)

has standard part v^(2k)/(2k)!. Here n is a large finite horizon and the
terms are evaluated in extended precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from bcontinuum.errors import UsageError
from bcontinuum.numeric import Approx, Scalar, to_scalar

_DPS = 40


@dataclass(frozen=True)
class EulerRow:
    k: int
    term: Scalar
    target: Scalar
    error: float


@dataclass(frozen=True)
class EulerReport:
    v: Scalar
    horizon: int
    rows: tuple[EulerRow, ...]
    partial_sum: Scalar
    cosine: Scalar
    error: float


def _falling_over_factorial(n: int, m: int) -> Fraction:
    num = 1
    for j in range(m):
        num *= n - j
    return Fraction(num, math.factorial(m))


def _mp(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(float(x))


def _out(x) -> Scalar:
    return x if isinstance(x, Fraction) else Approx(float(x))


def euler_cosine(v, k_max: int, horizon: int) -> EulerReport:
    v = to_scalar(v)
    if k_max < 0:
        raise UsageError("k_max must be non-negative")
    if horizon < 10 * max(k_max, 1):
        raise UsageError("horizon must be at least 10 * k_max")
    n = int(horizon)
    rows = []
    total = Fraction(0)
    with mpmath.workdps(_DPS):
        if v == 0:
            c = s = None
        else:
            z = _mp(v) / n
            c, s = mpmath.cos(z), mpmath.sin(z)
        for k in range(k_max + 1):
            coef = _falling_over_factorial(n, 2 * k)
            if v == 0:
                term = Fraction(1) if k == 0 else Fraction(0)
            else:
                term = coef * c ** (n - 2 * k) * s ** (2 * k)
            if isinstance(v, Fraction):
                target = v ** (2 * k) / math.factorial(2 * k)
            else:
                target = _mp(v) ** (2 * k) / math.factorial(2 * k)
            err = float(abs(_mp(term) - _mp(target)))
            rows.append(EulerRow(k, _out(term), _out(target), err))
            sign = -1 if k % 2 else 1
            total = total + sign * term if isinstance(term, Fraction) and isinstance(total, Fraction) \
                else _mp(total) + sign * _mp(term)
        cosine = Fraction(1) if v == 0 else mpmath.cos(_mp(v))
        error = float(abs(_mp(total) - _mp(cosine)))
    return EulerReport(v, n, tuple(rows), _out(total), _out(cosine), error)
