"""Symbolic tier: asymptotic expansions over the scale n^p log(n)^q exp(r n).

An :class:`AsymForm` is a finite sum of terms ``c * exp(r n) n^p log(n)^q``
plus an optional error bound ``O(exp(r' n) n^p' log(n)^q')``. Monomials are
keyed by ``(r, p, q)`` and compared lexicographically, which is exactly the
scale tower log(n)^q < n^p < exp(r n).

Coefficients are exact sums of ``c * pi^a * e^b`` with rational ``c, a, b``
where possible and plain floats otherwise. Anything outside this grammar
(nested exponentials, log log n, trig of an unbounded argument that is not an
integer multiple of pi*n) raises :class:`NotSymbolic`, which sends the caller
to the numeric tier.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath

from bcontinuum import expr as E
from bcontinuum.errors import BContinuumError
from bcontinuum.numeric import binomial, exact_root

DEPTH = 8
ZERO_KEY = (Fraction(0), Fraction(0), Fraction(0))
N_KEY = (Fraction(0), Fraction(1), Fraction(0))
LOG_KEY = (Fraction(0), Fraction(0), Fraction(1))

_SIGN_DPS = 60
_AMBIGUOUS = 1e-9


class NotSymbolic(BContinuumError):
    """The expression falls outside the dominance grammar."""


def _mpq(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


def _kadd(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def _kneg(a):
    return (-a[0], -a[1], -a[2])


def _kscale(a, s):
    return (a[0] * s, a[1] * s, a[2] * s)


class Coef:
    """Exact ``{(pi_power, e_power): rational}`` sum, or a float with a scale."""

    __slots__ = ("exact", "approx", "scale")

    def __init__(self, exact=None, approx=None, scale=None):
        if exact is not None:
            exact = {k: v for k, v in exact.items() if v != 0}
            self.exact = exact
            self.approx = None
            self.scale = None
        else:
            self.exact = None
            self.approx = float(approx)
            self.scale = abs(self.approx) if scale is None else scale
            if not math.isfinite(self.approx):
                raise NotSymbolic("coefficient overflow")

    @classmethod
    def rational(cls, q) -> "Coef":
        return cls({(Fraction(0), Fraction(0)): Fraction(q)})

    @classmethod
    def pi_power(cls, k) -> "Coef":
        return cls({(Fraction(k), Fraction(0)): Fraction(1)})

    @classmethod
    def e_power(cls, k) -> "Coef":
        return cls({(Fraction(0), Fraction(k)): Fraction(1)})

    # value access

    def mp(self):
        if self.exact is None:
            return mpmath.mpf(self.approx)
        with mpmath.workdps(_SIGN_DPS):
            total = mpmath.mpf(0)
            for (a, b), c in self.exact.items():
                term = _mpq(c)
                if a:
                    term *= mpmath.pi ** _mpq(a)
                if b:
                    term *= mpmath.e ** _mpq(b)
                total += term
            return total

    def __float__(self):
        return float(self.mp())

    def is_exact_zero(self) -> bool:
        return self.exact is not None and not self.exact

    def is_zero(self) -> bool:
        """True/False, or NotSymbolic when float cancellation hides the answer."""
        if self.exact is not None:
            return not self.exact
        if abs(self.approx) <= _AMBIGUOUS * self.scale:
            raise NotSymbolic("coefficient lost to cancellation")
        return False

    def sign(self) -> int:
        if self.is_zero():
            return 0
        return 1 if self.mp() > 0 else -1

    def rational_value(self):
        """The value if it is an exact rational, else None."""
        if self.exact is None:
            return None
        if not self.exact:
            return Fraction(0)
        if set(self.exact) == {(0, 0)}:
            return self.exact[(Fraction(0), Fraction(0))]
        return None

    def pi_multiple(self):
        """t if the value is exactly t*pi (t rational), else None."""
        if self.exact is None:
            return None
        if not self.exact:
            return Fraction(0)
        if set(self.exact) == {(1, 0)}:
            return self.exact[(Fraction(1), Fraction(0))]
        return None

    def __add__(self, other):
        if self.exact is not None and other.exact is not None:
            out = dict(self.exact)
            for k, v in other.exact.items():
                out[k] = out.get(k, 0) + v
            return Coef(out)
        a, b = float(self), float(other)
        scale = max(self._scale(), other._scale(), abs(a), abs(b))
        return Coef(approx=a + b, scale=scale)

    def _scale(self):
        return self.scale if self.exact is None else abs(float(self))

    def __neg__(self):
        if self.exact is not None:
            return Coef({k: -v for k, v in self.exact.items()})
        return Coef(approx=-self.approx, scale=self.scale)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if self.exact is not None and other.exact is not None:
            out = {}
            for (a1, b1), c1 in self.exact.items():
                for (a2, b2), c2 in other.exact.items():
                    k = (a1 + a2, b1 + b2)
                    out[k] = out.get(k, 0) + c1 * c2
            return Coef(out)
        return Coef(approx=float(self) * float(other), scale=self._scale() * other._scale())

    def inverse(self) -> "Coef":
        if self.is_zero():
            raise NotSymbolic("inverse of a zero coefficient")
        if self.exact is not None and len(self.exact) == 1:
            ((a, b), c), = self.exact.items()
            return Coef({(-a, -b): 1 / c})
        v = float(self)
        return Coef(approx=1 / v, scale=abs(1 / v))

    def power(self, s: Fraction) -> "Coef":
        s = Fraction(s)
        if s.denominator == 1 and s >= 0:
            out = Coef.rational(1)
            for _ in range(int(s)):
                out = out * self
            return out
        if self.exact is not None and len(self.exact) == 1:
            ((a, b), c), = self.exact.items()
            if s.denominator == 1:
                return Coef({(a * s, b * s): c ** int(s)})
            if c > 0:
                root = exact_root(c, s.denominator)
                if root is not None:
                    return Coef({(a * s, b * s): root ** s.numerator})
        v = float(self)
        if v <= 0 and s.denominator != 1:
            raise NotSymbolic("non-integer power of a non-positive coefficient")
        r = v ** float(s)
        return Coef(approx=r, scale=abs(r))

    def __repr__(self):
        if self.exact is not None:
            return f"Coef({self.exact})"
        return f"Coef(~{self.approx})"

    def text(self) -> str:
        if self.exact is None:
            return repr(self.approx)
        if not self.exact:
            return "0"
        parts = []
        for (a, b), c in sorted(self.exact.items()):
            s = str(c)
            if a:
                s += "*pi" + ("" if a == 1 else f"^({a})")
            if b:
                s += "*e" + ("" if b == 1 else f"^({b})")
            parts.append(s)
        return " + ".join(parts)


class AsymForm:
    __slots__ = ("terms", "err")

    def __init__(self, terms=None, err=None):
        kept = {}
        for k, c in (terms or {}).items():
            if c.is_exact_zero():
                continue
            if err is not None and k <= err:
                continue
            kept[k] = c
        self.terms = kept
        self.err = err

    @classmethod
    def constant(cls, coef: Coef) -> "AsymForm":
        return cls({ZERO_KEY: coef})

    @classmethod
    def monomial(cls, key, coef=None) -> "AsymForm":
        return cls({tuple(Fraction(x) for x in key): coef or Coef.rational(1)})

    @property
    def exact(self) -> bool:
        return self.err is None

    def top_key(self):
        """Largest key present, counting the error term."""
        keys = list(self.terms)
        if self.err is not None:
            keys.append(self.err)
        if not keys:
            return None
        return max(keys)

    def leading(self):
        """(key, coef) of the dominant nonzero term, or None for exact zero.

        Raises NotSymbolic when the error term could dominate.
        """
        for k in sorted(self.terms, reverse=True):
            if self.err is not None and k <= self.err:
                break
            c = self.terms[k]
            if not c.is_zero():
                return k, c
        if self.err is not None:
            raise NotSymbolic("expansion too short to decide the leading term")
        return None

    def __add__(self, other: "AsymForm") -> "AsymForm":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        errs = [e for e in (self.err, other.err) if e is not None]
        return AsymForm(out, max(errs) if errs else None)

    def __neg__(self):
        return AsymForm({k: -c for k, c in self.terms.items()}, self.err)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "AsymForm") -> "AsymForm":
        if (not self.terms and self.err is None) or (not other.terms and other.err is None):
            return AsymForm()
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = _kadd(k1, k2)
                out[k] = out[k] + c1 * c2 if k in out else c1 * c2
        errs = []
        if self.err is not None:
            errs.append(_kadd(self.err, other.top_key()))
        if other.err is not None:
            errs.append(_kadd(other.err, self.top_key()))
        return AsymForm(out, max(errs) if errs else None)

    def scale_key(self, key) -> "AsymForm":
        return AsymForm(
            {_kadd(k, key): c for k, c in self.terms.items()},
            None if self.err is None else _kadd(self.err, key),
        )

    def scale_coef(self, coef: Coef) -> "AsymForm":
        return AsymForm({k: c * coef for k, c in self.terms.items()}, self.err)

    def split(self):
        """(growing, constant coef, decaying) parts; requires err < 1."""
        if self.err is not None and self.err >= ZERO_KEY:
            raise NotSymbolic("argument known only up to a non-vanishing error")
        grow = {k: c for k, c in self.terms.items() if k > ZERO_KEY}
        c0 = self.terms.get(ZERO_KEY, Coef.rational(0))
        dec = AsymForm({k: c for k, c in self.terms.items() if k < ZERO_KEY}, self.err)
        return grow, c0, dec

    def text(self) -> str:
        parts = []
        for k in sorted(self.terms, reverse=True):
            parts.append(f"({self.terms[k].text()})*{monomial_text(k)}")
        if self.err is not None:
            parts.append(f"O({monomial_text(self.err)})")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"AsymForm({self.text()})"


def monomial_text(key) -> str:
    r, p, q = key
    bits = []
    if r:
        bits.append(f"exp({r}*n)")
    if p:
        bits.append("n" if p == 1 else f"n^({p})")
    if q:
        bits.append("log(n)" if q == 1 else f"log(n)^({q})")
    return "*".join(bits) or "1"


# -- series helpers -----------------------------------------------------------

def _power_series(u: AsymForm, coeffs) -> AsymForm:
    """sum_j coeffs[j] u^j for u -> 0, with the truncation error recorded."""
    lead = u.top_key()
    if lead is None:
        return AsymForm.constant(coeffs[0])
    if lead >= ZERO_KEY:
        raise NotSymbolic("series argument does not vanish")
    acc = AsymForm.constant(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        acc = u * acc + AsymForm.constant(c)
    tail = _kscale(lead, len(coeffs))
    err = tail if acc.err is None else max(acc.err, tail)
    return AsymForm(acc.terms, err)


def _normalize(f: AsymForm):
    """f = L (1 + u) with L the leading monomial; returns (key, coef, u)."""
    led = f.leading()
    if led is None:
        raise NotSymbolic("zero where a nonzero value is required")
    key, coef = led
    inv = coef.inverse()
    u = AsymForm(
        {_kadd(k, _kneg(key)): c * inv for k, c in f.terms.items() if k != key},
        None if f.err is None else _kadd(f.err, _kneg(key)),
    )
    return key, coef, u


def inverse(f: AsymForm) -> AsymForm:
    key, coef, u = _normalize(f)
    series = _power_series(u, [Coef.rational((-1) ** j) for j in range(DEPTH + 1)])
    return series.scale_key(_kneg(key)).scale_coef(coef.inverse())


def power(f: AsymForm, s: Fraction) -> AsymForm:
    s = Fraction(s)
    if s.denominator == 1 and s >= 0:
        out = AsymForm.constant(Coef.rational(1))
        for _ in range(int(s)):
            out = out * f
        return out
    if s.denominator == 1:
        return inverse(power(f, -s))
    key, coef, u = _normalize(f)
    if coef.sign() < 0:
        raise NotSymbolic("non-integer power of an eventually negative germ")
    series = _power_series(u, [Coef.rational(binomial(s, j)) for j in range(DEPTH + 1)])
    return series.scale_key(_kscale(key, s)).scale_coef(coef.power(s))


def log(f: AsymForm) -> AsymForm:
    key, coef, u = _normalize(f)
    if coef.sign() <= 0:
        raise NotSymbolic("log of an eventually non-positive germ")
    r, p, q = key
    if q != 0:
        raise NotSymbolic("log(log(n)) is outside the dominance grammar")
    out = AsymForm()
    unit = coef.exact is not None and len(coef.exact) == 1 and next(iter(coef.exact.values())) == 1
    if unit and next(iter(coef.exact))[0] == 0:
        # coef = e^b exactly
        out = AsymForm.constant(Coef.rational(next(iter(coef.exact))[1]))
    else:
        out = AsymForm.constant(Coef(approx=float(mpmath.log(coef.mp()))))
    if r:
        out = out + AsymForm.monomial(N_KEY, Coef.rational(r))
    if p:
        out = out + AsymForm.monomial(LOG_KEY, Coef.rational(p))
    coeffs = [Coef.rational(0)] + [Coef.rational(Fraction((-1) ** (j + 1), j)) for j in range(1, DEPTH + 1)]
    return out + _power_series(u, coeffs)


def exp(f: AsymForm) -> AsymForm:
    grow, c0, dec = f.split()
    r = p = Fraction(0)
    for k, c in grow.items():
        val = c.rational_value()
        if val is None:
            raise NotSymbolic("exponential rate is not an exact rational")
        if k == N_KEY:
            r = val
        elif k == LOG_KEY:
            p = val
        else:
            raise NotSymbolic("nested exponential outside the dominance grammar")
    c0v = c0.rational_value()
    front = Coef.e_power(c0v) if c0v is not None else Coef(approx=float(mpmath.exp(c0.mp())))
    fact = [Coef.rational(Fraction(1, math.factorial(j))) for j in range(DEPTH + 1)]
    series = _power_series(dec, fact)
    return series.scale_key((r, p, Fraction(0))).scale_coef(front)


def _trig_exact(t: Fraction):
    """(sin, cos) of t*pi when t is a multiple of 1/2, else None."""
    if (2 * t).denominator != 1:
        return None
    m = int(2 * t) % 4
    return [(0, 1), (1, 0), (0, -1), (-1, 0)][m]


def trig(name: str, f: AsymForm) -> AsymForm:
    grow, c0, dec = f.split()
    parity = 0
    if grow:
        if set(grow) != {N_KEY}:
            raise NotSymbolic("trig of an unbounded non-linear argument")
        a = grow[N_KEY].pi_multiple()
        if a is None or a.denominator != 1:
            raise NotSymbolic("trig of an unbounded argument without exact period")
        # sin(a pi n + t) = (-1)^(a n) sin t, likewise for cos
        parity = int(a) % 2
    t = c0.pi_multiple()
    special = _trig_exact(t) if t is not None else None
    if special is not None:
        s0, k0 = Coef.rational(special[0]), Coef.rational(special[1])
    else:
        v = c0.mp()
        s0, k0 = Coef(approx=float(mpmath.sin(v))), Coef(approx=float(mpmath.cos(v)))
    sin_c = [Coef.rational(0 if j % 2 == 0 else Fraction((-1) ** (j // 2), math.factorial(j))) for j in range(DEPTH + 1)]
    cos_c = [Coef.rational(0 if j % 2 else Fraction((-1) ** (j // 2), math.factorial(j))) for j in range(DEPTH + 1)]
    sd, cd = _power_series(dec, sin_c), _power_series(dec, cos_c)
    if name == "sin":
        out = cd.scale_coef(s0) + sd.scale_coef(k0)
    else:
        out = cd.scale_coef(k0) - sd.scale_coef(s0)
    if parity:
        if not out.terms and out.err is None:
            return out
        raise NotSymbolic("alternating factor (-1)^n")
    return out


def absolute(f: AsymForm) -> AsymForm:
    led = f.leading()
    if led is None:
        return f
    return -f if led[1].sign() < 0 else f


# -- conversion from expressions ----------------------------------------------

def from_expr(e: E.Expr, var: str = "n") -> AsymForm:
    if isinstance(e, E.Const):
        return AsymForm.constant(Coef.rational(e.value))
    if isinstance(e, E.NamedConst):
        return AsymForm.constant(Coef.pi_power(1) if e.name == "pi" else Coef.e_power(1))
    if isinstance(e, E.Var):
        if e.name != var:
            raise NotSymbolic(f"foreign variable {e.name!r}")
        return AsymForm.monomial(N_KEY)
    if isinstance(e, E.Neg):
        return -from_expr(e.arg, var)
    if isinstance(e, E.Call):
        a = from_expr(e.arg, var)
        if e.fn in ("sin", "cos"):
            return trig(e.fn, a)
        if e.fn == "exp":
            return exp(a)
        if e.fn == "log":
            return log(a)
        if e.fn == "sqrt":
            return power(a, Fraction(1, 2))
        if e.fn == "abs":
            return absolute(a)
    if isinstance(e, E.BinOp):
        a = from_expr(e.left, var)
        if e.op == "^":
            if not E.free_vars(e.right):
                b = from_expr(e.right, var)
                s = b.terms.get(ZERO_KEY, Coef.rational(0)).rational_value() if b.exact and set(b.terms) <= {ZERO_KEY} else None
                if s is not None:
                    return power(a, s)
            led = a.leading() if (a.terms or a.err is not None) else None
            if led is None or led[1].sign() < 0:
                raise NotSymbolic("power with variable exponent and non-positive base")
            return exp(from_expr(e.right, var) * log(a))
        b = from_expr(e.right, var)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if e.op == "/":
            return a * inverse(b)
    raise NotSymbolic(f"unsupported node {e!r}")
