"""Numeric tier: evaluate germ bodies at large indices and read off trends.

Values stay exact ``Fraction`` objects while that is cheap and switch to
``mpmath`` floats otherwise. Nothing here is a proof; every answer is
evidence and is labelled as such by the caller.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath

from bcontinuum import expr as E
from bcontinuum.errors import DomainError
from bcontinuum.numeric import exact_root

# exact rational powers are abandoned beyond this many result bits
_EXACT_BITS = 20_000

ZERO_REL = mpmath.mpf("1e-25")
NULL_ABS = 1e-15
SLOPE = 0.05
STABLE_REL = 1e-9


def dps_for(n: int) -> int:
    return 40 + 2 * len(str(abs(int(n))))


def to_mpf(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def _pow(a, b):
    if isinstance(b, Fraction) and b.denominator == 1:
        k = int(b)
        if a == 0 and k < 0:
            raise DomainError("zero to a negative power", function="pow", argument=a)
        if isinstance(a, Fraction):
            bits = a.numerator.bit_length() + a.denominator.bit_length()
            if bits * abs(k) <= _EXACT_BITS:
                return a**k
        return to_mpf(a) ** k
    if a < 0:
        raise DomainError("non-integer power of a negative number", function="pow", argument=a)
    if a == 0:
        if b > 0:
            return Fraction(0)
        raise DomainError("zero to a non-positive power", function="pow", argument=a)
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        root = exact_root(a, b.denominator)
        if root is not None:
            bits = root.numerator.bit_length() + root.denominator.bit_length()
            if bits * abs(b.numerator) <= _EXACT_BITS:
                return root**b.numerator
    return mpmath.power(to_mpf(a), to_mpf(b))


def _call(fn, x):
    if isinstance(x, Fraction):
        if fn == "abs":
            return abs(x)
        if fn == "sqrt" and x >= 0:
            root = exact_root(x, 2)
            if root is not None:
                return root
        if x == 0 and fn in ("sin", "cos", "exp"):
            return Fraction(0) if fn == "sin" else Fraction(1)
        if x == 1 and fn == "log":
            return Fraction(0)
    v = to_mpf(x)
    if fn == "log" and v <= 0:
        raise DomainError("log of non-positive", function=fn, argument=x)
    if fn == "sqrt" and v < 0:
        raise DomainError("sqrt of negative", function=fn, argument=x)
    if fn == "abs":
        return abs(v)
    return getattr(mpmath, fn)(v)


def mp_eval(e: E.Expr, binding):
    """Evaluate at Fraction/mpf values under the ambient mpmath precision."""
    if isinstance(e, E.Const):
        return e.value
    if isinstance(e, E.NamedConst):
        return +mpmath.pi if e.name == "pi" else +mpmath.e
    if isinstance(e, E.Var):
        try:
            return binding[e.name]
        except KeyError:
            raise DomainError(f"unbound variable {e.name!r}") from None
    if isinstance(e, E.Neg):
        return -mp_eval(e.arg, binding)
    if isinstance(e, E.Call):
        return _call(e.fn, mp_eval(e.arg, binding))
    if isinstance(e, E.BinOp):
        a = mp_eval(e.left, binding)
        b = mp_eval(e.right, binding)
        if e.op != "^" and not (isinstance(a, Fraction) and isinstance(b, Fraction)):
            a, b = to_mpf(a), to_mpf(b)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if e.op == "/":
            if b == 0:
                raise DomainError("division by zero")
            return a / b
        if e.op == "^":
            return _pow(a, b)
    raise TypeError(f"not an expression node: {e!r}")


def sample_table(value_at, horizons, offsets, skip=frozenset()):
    """``[(h, [n, ...], [v, ...]), ...]`` for horizons with at least one defined value.

    ``value_at(n)`` may raise DomainError; such indices are dropped, as are
    indices in ``skip`` (finitely many exceptions never change a germ).
    """
    rows = []
    for h in horizons:
        ns, vals = [], []
        for o in offsets:
            n = h + o
            if n in skip:
                continue
            with mpmath.workdps(dps_for(n)):
                try:
                    vals.append(value_at(n))
                    ns.append(n)
                except (DomainError, ZeroDivisionError, OverflowError):
                    continue
        if vals:
            rows.append((h, ns, vals))
    return rows


def _is_zero(v, scale=1):
    if isinstance(v, Fraction):
        return v == 0
    return abs(v) <= ZERO_REL * max(1, scale)


def _envelope(rows):
    return [(h, max(abs(to_mpf(v)) for v in vals)) for h, _, vals in rows]


def _slopes(env):
    out = []
    for (h1, m1), (h2, m2) in zip(env, env[1:]):
        if m1 == 0 or m2 == 0:
            return None
        out.append(float(mpmath.log(m2 / m1) / mpmath.log(mpmath.mpf(h2) / h1)))
    return out


def _monotone(seq):
    inc = all(b >= a for a, b in zip(seq, seq[1:]))
    dec = all(b <= a for a, b in zip(seq, seq[1:]))
    return inc or dec


def numeric_sign(rows, scales=None, window=4):
    """+1/-1/0 if the difference rows support it, else None; plus witness."""
    tail = rows[-window:]
    witness = {"horizons": [r[0] for r in tail], "values": [[to_mpf(v) for v in r[2]] for r in tail]}
    if len(tail) < min(window, 2):
        return None, witness
    scale = scales or 1
    flat = [v for _, _, vals in tail for v in vals]
    if all(_is_zero(v, scale) for v in flat):
        return 0, witness
    if any(_is_zero(v, scale) for v in flat):
        return None, witness
    signs = {1 if v > 0 else -1 for v in flat}
    if len(signs) != 1:
        return None, witness
    env = [m for _, m in _envelope(tail)]
    if not _monotone(env):
        return None, witness
    return signs.pop(), witness


def numeric_null(rows, window=4):
    """True/False/None for 'eventually below every positive rational'."""
    tail = rows[-window:]
    env = _envelope(tail)
    witness = {"horizons": [h for h, _ in env], "magnitudes": [m for _, m in env]}
    if len(env) < 2:
        return None, witness
    mags = [m for _, m in env]
    if all(m <= NULL_ABS for m in mags):
        return True, witness
    if mags[-1] <= NULL_ABS and all(b <= a for a, b in zip(mags, mags[1:])):
        return True, witness
    if any(m == 0 for m in mags):
        return None, witness
    slopes = _slopes(env)
    witness["slopes"] = slopes
    if all(s <= -SLOPE for s in slopes):
        return True, witness
    if all(s >= SLOPE for s in slopes) or all(b > a for a, b in zip(mags, mags[1:])):
        return False, witness
    if _stable(mags) and mags[-1] > NULL_ABS:
        return False, witness
    return None, witness


def _stable(values, rel=STABLE_REL):
    last = values[-1]
    ref = max(abs(last), mpmath.mpf(NULL_ABS))
    return all(abs(v - last) <= rel * ref for v in values)


def numeric_limit(rows, window=4):
    """('finite', value) | ('infinite', sign) | ('unknown', None); plus witness."""
    null, witness = numeric_null(rows, window)
    if null:
        return ("finite", Fraction(0)), witness
    tail = rows[-window:]
    if len(tail) < 2:
        return ("unknown", None), witness
    firsts = [to_mpf(vals[0]) for _, _, vals in tail]
    spreads = [max(to_mpf(v) for v in vals) - min(to_mpf(v) for v in vals) for _, _, vals in tail]
    if _stable(firsts) and all(s <= STABLE_REL * max(abs(firsts[-1]), 1) for s in spreads):
        return ("finite", firsts[-1]), witness
    slopes = witness.get("slopes")
    if slopes and all(s >= SLOPE for s in slopes):
        signs = {1 if v > 0 else -1 for _, _, vals in tail for v in vals if v != 0}
        if len(signs) == 1:
            return ("infinite", signs.pop()), witness
        return ("infinite", 0), witness
    return ("unknown", None), witness


def as_float(v) -> float:
    try:
        return float(v)
    except OverflowError:
        return math.copysign(math.inf, float(mpmath.sign(v)))
