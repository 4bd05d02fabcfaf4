"""Sequence germs modulo the Frechet filter.

A :class:`Germ` is a body in the index ``n`` (or an opaque sampler) plus an
optional finite table of overridden values. Two germs are equal when they
agree for all sufficiently large ``n``; overrides therefore never influence a
verdict, only :func:`germ_sample`.

Comparisons run in two tiers. The symbolic tier expands the difference over
the scale ``exp(r n) n^p log(n)^q`` and is sound. The numeric tier samples at
a horizon schedule and only ever reports evidence. Unknown is an ordinary
answer: the Frechet reduced power is not totally ordered.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

import mpmath

from bcontinuum import expr as E
from bcontinuum.errors import DomainError, NotRepresentable, UsageError
from bcontinuum.germ import asymptotic as A
from bcontinuum.germ import sampling as S
from bcontinuum.numeric import INFINITE_ORDER, Approx, ExtOrder, Ordering, to_scalar

VAR = "n"
R_MAX = Fraction(64)
ORDER_TOL = Fraction(1, 2**20)
NONREGULAR_BAND = Fraction(1, 4)


class Grade(enum.Enum):
    SYMBOLIC = "symbolic"
    NUMERIC = "numeric"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Verdict:
    """Three-valued answer; ``answer is None`` means Unknown."""

    answer: object
    grade: Grade | None = None
    witness: dict = field(default_factory=dict, compare=False)

    @property
    def known(self) -> bool:
        return self.answer is not None

    def __str__(self):
        if self.answer is None:
            return "unknown"
        a = str(self.answer).lower()
        return f"{a} ({self.grade})"


UNKNOWN = Verdict(None)


@dataclass(frozen=True)
class HorizonSchedule:
    horizons: tuple[int, ...]
    offsets: tuple[int, ...] = tuple(range(16))

    def __post_init__(self):
        hs = tuple(int(h) for h in self.horizons)
        object.__setattr__(self, "horizons", hs)
        object.__setattr__(self, "offsets", tuple(int(o) for o in self.offsets))
        if len(hs) < 2:
            raise UsageError("a horizon schedule needs at least two horizons")
        if any(b <= a for a, b in zip(hs, hs[1:])) or hs[0] < 1:
            raise UsageError("horizons must be positive and strictly increasing")
        if not self.offsets:
            raise UsageError("need at least one sampling offset")

    @classmethod
    def default(cls) -> "HorizonSchedule":
        return cls(tuple(2**k for k in range(10, 47, 4)))

    @classmethod
    def parse(cls, text: str) -> "HorizonSchedule":
        try:
            return cls(tuple(int(t) for t in text.replace(" ", "").split(",") if t))
        except ValueError:
            raise UsageError(f"bad horizon list {text!r}") from None


DEFAULT_SCHEDULE = HorizonSchedule.default()


def _lift(x) -> E.Expr:
    """Expression for a scalar operand."""
    if isinstance(x, E.Expr):
        return x
    if isinstance(x, Approx):
        return E.Const(Fraction(x.value))
    if isinstance(x, (int, Fraction)):
        return E.Const(Fraction(x))
    if isinstance(x, mpmath.mpf):
        man, exp = x.man_exp
        return E.Const(Fraction(man) * Fraction(2) ** exp)
    raise TypeError(f"cannot lift {type(x).__name__} into a germ")


class Germ:
    """An element of the reduced power R^N / Frechet."""

    __slots__ = ("body", "sampler", "overrides", "label", "_form", "_osc")

    def __init__(self, body: E.Expr | None = None, *, sampler: Callable | None = None,
                 overrides: Mapping[int, object] | None = None, label: str | None = None):
        if body is None and sampler is None:
            raise UsageError("a germ needs a body or a sampler")
        if body is not None:
            extra = E.free_vars(body) - {VAR}
            if extra:
                raise UsageError(f"germ bodies use the variable n, got {sorted(extra)}")
        self.body = body
        self.sampler = sampler
        self.overrides = dict(overrides or {})
        self.label = label
        self._form = None
        self._osc = None

    @classmethod
    def from_expr(cls, e) -> "Germ":
        return germ_from_expr(e)

    @classmethod
    def constant(cls, c) -> "Germ":
        return cls(_lift(to_scalar(c)))

    @classmethod
    def index(cls) -> "Germ":
        return cls(E.Var(VAR))

    # -- identity ---------------------------------------------------------

    @property
    def opaque(self) -> bool:
        return self.body is None

    @property
    def oscillatory(self) -> bool:
        if self._osc is None:
            self._osc = False if self.body is None else _oscillatory(self.body)
        return self._osc

    def text(self) -> str:
        if self.label:
            return self.label
        if self.body is not None:
            return E.to_text(self.body)
        return "<sampled>"

    def __repr__(self):
        mark = f", {len(self.overrides)} overrides" if self.overrides else ""
        return f"Germ<{self.text()}{mark}>"

    def with_overrides(self, values: Mapping[int, object]) -> "Germ":
        merged = {**self.overrides, **{int(k): v for k, v in values.items()}}
        return Germ(self.body, sampler=self.sampler, overrides=merged, label=self.label)

    def form(self) -> A.AsymForm:
        """Symbolic expansion of the body, or NotSymbolic."""
        if self.body is None:
            raise A.NotSymbolic("opaque germ")
        if self._form is None:
            self._form = A.from_expr(self.body, VAR)
        return self._form

    # -- sampling ---------------------------------------------------------

    def raw(self, n: int):
        """Body value at ``n`` ignoring overrides (Fraction or mpf)."""
        if self.sampler is not None:
            return self.sampler(n)
        return S.mp_eval(self.body, {VAR: Fraction(n)})

    def sample(self, n: int):
        if n in self.overrides:
            return self.overrides[n]
        return self.raw(n)

    # -- arithmetic -------------------------------------------------------

    def _combine(self, other, op: str, fn) -> "Germ":
        if not isinstance(other, Germ):
            try:
                other = Germ.constant(other)
            except TypeError:
                return NotImplemented
        if self.body is not None and other.body is not None:
            out = Germ(E.BinOp(op, self.body, other.body))
        else:
            a, b = self, other
            out = Germ(sampler=lambda n: fn(a.raw(n), b.raw(n)))
        keys = set(self.overrides) | set(other.overrides)
        if keys:
            table = {}
            for k in keys:
                try:
                    with mpmath.workdps(S.dps_for(k)):
                        table[k] = fn(self.sample(k), other.sample(k))
                except (DomainError, ZeroDivisionError):
                    table[k] = None
            out.overrides = table
        return out

    def _rcombine(self, other, op, fn):
        if not isinstance(other, Germ):
            try:
                other = Germ.constant(other)
            except TypeError:
                return NotImplemented
        return other._combine(self, op, fn)

    def __add__(self, other):
        return self._combine(other, "+", lambda a, b: a + b)

    def __radd__(self, other):
        return self._rcombine(other, "+", lambda a, b: a + b)

    def __sub__(self, other):
        return self._combine(other, "-", lambda a, b: a - b)

    def __rsub__(self, other):
        return self._rcombine(other, "-", lambda a, b: a - b)

    def __mul__(self, other):
        return self._combine(other, "*", lambda a, b: a * b)

    def __rmul__(self, other):
        return self._rcombine(other, "*", lambda a, b: a * b)

    def __truediv__(self, other):
        return self._combine(other, "/", lambda a, b: S.mp_eval(E.BinOp("/", E.Var("a"), E.Var("b")), {"a": a, "b": b}))

    def __rtruediv__(self, other):
        return self._rcombine(other, "/", lambda a, b: S.mp_eval(E.BinOp("/", E.Var("a"), E.Var("b")), {"a": a, "b": b}))

    def __neg__(self):
        return self.map(E.Neg(E.Var("t")))

    def __pow__(self, p):
        if isinstance(p, Germ):
            return self._combine(p, "^", lambda a, b: S._pow(a, b))
        return self.map(E.BinOp("^", E.Var("t"), _lift(to_scalar(p))))

    def apply(self, name: str) -> "Germ":
        if name == "abs":
            sign = germ_compare(self, 0)
            if not sign.known:
                raise NotRepresentable("abs of a germ whose sign is undecided")
            return -self if sign.answer is Ordering.LESS else self
        return self.map(E.Call(name, E.Var("t")))

    def map(self, e: E.Expr, var: str = "t") -> "Germ":
        """The germ n -> e(self(n))."""
        return Germ.from_substitution(e, {var: self})

    @staticmethod
    def from_substitution(e: E.Expr, binding) -> "Germ":
        """Hook used by :func:`bcontinuum.expr.evaluate` for germ arguments."""
        (name, g), = binding.items()
        if not isinstance(g, Germ):
            raise UsageError("germ substitution needs a germ binding")
        if g.body is not None:
            out = Germ(E.substitute(e, {name: g.body}))
        else:
            out = Germ(sampler=lambda n: S.mp_eval(e, {name: g.raw(n)}))
        if g.overrides:
            table = {}
            for k, v in g.overrides.items():
                try:
                    with mpmath.workdps(S.dps_for(k)):
                        table[k] = None if v is None else S.mp_eval(e, {name: v})
                except DomainError:
                    table[k] = None
            out.overrides = table
        return out


def _oscillatory(body: E.Expr) -> bool:
    for node in E.walk(body):
        if isinstance(node, E.Call) and node.fn in ("sin", "cos") and VAR in E.free_vars(node.arg):
            try:
                top = A.from_expr(node.arg, VAR).top_key()
            except A.NotSymbolic:
                return True
            if top is not None and top > A.ZERO_KEY:
                return True
        if isinstance(node, E.BinOp) and node.op == "^" and VAR in E.free_vars(node.right):
            try:
                led = A.from_expr(node.left, VAR).leading()
            except A.NotSymbolic:
                return True
            if led is None or led[1].sign() < 0:
                return True
    return False


# -- operations -------------------------------------------------------------

def germ_from_expr(e) -> Germ:
    if isinstance(e, str):
        e = E.parse(e, variables={VAR})
    names = E.free_vars(e)
    if names - {VAR}:
        raise UsageError(f"germ expressions use the variable n, got {sorted(names)}")
    return Germ(e)


def _as_germ(g) -> Germ:
    if isinstance(g, Germ):
        return g
    if isinstance(g, (str, E.Expr)):
        return germ_from_expr(g)
    return Germ.constant(g)


def germ_sample(g, n: int):
    """Value at index ``n`` as a Scalar: exact when possible, Approx otherwise."""
    g = _as_germ(g)
    if n < 1:
        raise UsageError("germ indices start at 1")
    with mpmath.workdps(S.dps_for(n)):
        v = g.sample(int(n))
        if v is None:
            raise DomainError(f"germ undefined at n={n}")
        if isinstance(v, Fraction):
            return v
        return Approx(S.as_float(v))


def _rows(g: Germ, schedule: HorizonSchedule):
    return S.sample_table(g.raw, schedule.horizons, schedule.offsets, skip=frozenset(g.overrides))


def germ_compare(g1, g2, schedule: HorizonSchedule | None = None, tier: str = "auto") -> Verdict:
    """Ordering of two germs; Unknown when neither tier can decide."""
    g1, g2 = _as_germ(g1), _as_germ(g2)
    if g1.body is not None and g1.body == g2.body:
        # same defining sequence; overrides touch finitely many indices
        return Verdict(Ordering.EQUAL, Grade.SYMBOLIC, {"dominant": "0"})
    d = g1 - g2
    if tier in ("auto", "symbolic"):
        try:
            led = d.form().leading()
        except A.NotSymbolic as exc:
            if tier == "symbolic":
                return Verdict(None, None, {"reason": str(exc)})
        else:
            if led is None:
                return Verdict(Ordering.EQUAL, Grade.SYMBOLIC, {"dominant": "0"})
            key, coef = led
            return Verdict(
                Ordering.of(coef.sign()),
                Grade.SYMBOLIC,
                {"dominant": A.monomial_text(key), "coefficient": coef.text()},
            )
    schedule = schedule or DEFAULT_SCHEDULE
    rows = _rows(d, schedule)
    scales = _scale(g1, g2, schedule)
    sign, witness = S.numeric_sign(rows, scales)
    if sign is None:
        return Verdict(None, None, witness)
    return Verdict(Ordering.of(sign), Grade.NUMERIC, witness)


def _scale(g1: Germ, g2: Germ, schedule: HorizonSchedule):
    h = schedule.horizons[-1]
    with mpmath.workdps(S.dps_for(h)):
        try:
            return max(abs(S.to_mpf(g1.raw(h))), abs(S.to_mpf(g2.raw(h))), 1)
        except (DomainError, ZeroDivisionError):
            return 1


def _symbolic_null(form: A.AsymForm) -> bool:
    top = form.top_key()
    if top is None or top < A.ZERO_KEY:
        return True
    led = form.leading()
    return led is None or led[0] < A.ZERO_KEY


def germ_is_null(g, schedule: HorizonSchedule | None = None) -> Verdict:
    g = _as_germ(g)
    try:
        return Verdict(_symbolic_null(g.form()), Grade.SYMBOLIC)
    except A.NotSymbolic:
        pass
    ans, witness = S.numeric_null(_rows(g, schedule or DEFAULT_SCHEDULE))
    return Verdict(ans, Grade.NUMERIC if ans is not None else None, witness)


@dataclass(frozen=True)
class LimitResult:
    """``kind`` is 'finite', 'infinite' or 'unknown'."""

    kind: str
    value: object = None
    grade: Grade | None = None
    sign: int = 0
    witness: dict = field(default_factory=dict, compare=False)

    def __str__(self):
        if self.kind == "finite":
            from bcontinuum.numeric import format_scalar

            return format_scalar(self.value)
        return self.kind


def _coef_scalar(c: A.Coef):
    q = c.rational_value()
    if q is not None:
        return q
    return Approx(float(c))


def germ_limit(g, schedule: HorizonSchedule | None = None) -> LimitResult:
    """Standard part at infinity."""
    g = _as_germ(g)
    try:
        f = g.form()
        top = f.top_key()
        if top is None or top < A.ZERO_KEY:
            return LimitResult("finite", Fraction(0), Grade.SYMBOLIC)
        led = f.leading()
        if led is None or led[0] < A.ZERO_KEY:
            return LimitResult("finite", Fraction(0), Grade.SYMBOLIC)
        key, coef = led
        if key > A.ZERO_KEY:
            return LimitResult("infinite", None, Grade.SYMBOLIC, coef.sign())
        return LimitResult("finite", _coef_scalar(coef), Grade.SYMBOLIC)
    except A.NotSymbolic:
        pass
    (kind, val), witness = S.numeric_limit(_rows(g, schedule or DEFAULT_SCHEDULE))
    if kind == "finite":
        val = val if isinstance(val, Fraction) else Approx(S.as_float(val))
        return LimitResult("finite", val, Grade.NUMERIC, witness=witness)
    if kind == "infinite":
        return LimitResult("infinite", None, Grade.NUMERIC, val, witness)
    return LimitResult("unknown", witness=witness)


# -- Cauchy orders ----------------------------------------------------------

def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """The rational with the smallest denominator in [lo, hi] (Stern-Brocot)."""
    lo, hi = Fraction(lo), Fraction(hi)
    if lo > hi:
        raise ValueError("empty interval")
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -simplest_between(-hi, -lo)
    fl = math.floor(lo)
    if fl == lo:
        return Fraction(fl)
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    # lo and hi share the integer part: recurse on reciprocals of the fractional parts
    return fl + 1 / simplest_between(1 / (hi - fl), 1 / (lo - fl))


@dataclass(frozen=True)
class OrderResult:
    """Cauchy order of an infinitesimal; ``order is None`` means Unknown."""

    order: ExtOrder | None
    grade: Grade | None
    regular: bool = True
    interval: tuple | None = None
    note: str = ""

    @property
    def known(self) -> bool:
        return self.order is not None

    def __str__(self):
        return "unknown" if self.order is None else str(self.order)


def _order_germ(f: E.Expr, var: str) -> E.Expr:
    inv = E.BinOp("/", E.Const(Fraction(1)), E.Var(VAR))
    return E.Call("abs", E.substitute(f, {var: inv}))


def cauchy_order(f, var: str = "i", r_max: Fraction = R_MAX, tol: Fraction = ORDER_TOL,
                 schedule: HorizonSchedule | None = None) -> OrderResult:
    """Order a with |f(i)|/i^r -> 0 for r < a and -> infinity for r > a.

    Bisection on r over [-r_max, r_max] with the nullness test applied to
    ``|f(1/n)| * n^r``.
    """
    if isinstance(f, str):
        f = E.parse(f, variables={var})
    extra = E.free_vars(f) - {var}
    if extra:
        raise UsageError(f"order expressions use the variable {var}, got {sorted(extra)}")
    base = _order_germ(f, var)
    schedule = schedule or DEFAULT_SCHEDULE
    r_max = Fraction(r_max)

    try:
        form = A.from_expr(base, VAR)
    except A.NotSymbolic:
        form = None
    rows = None if form is not None else _rows(Germ(base), schedule)

    def null_at(r: Fraction):
        if form is not None:
            try:
                scaled = form * A.AsymForm.monomial((0, r, 0))
                return _symbolic_null(scaled), Grade.SYMBOLIC
            except A.NotSymbolic:
                pass
        table = rows if rows is not None else _rows(Germ(base), schedule)
        rr = S.to_mpf(r)
        scaled = [(h, ns, [S.to_mpf(v) * mpmath.mpf(n) ** rr for n, v in zip(ns, vals)])
                  for h, ns, vals in table]
        ans, _ = S.numeric_null(scaled)
        return ans, Grade.NUMERIC if ans is not None else None

    top, top_grade = null_at(r_max)
    if top is True:
        return OrderResult(INFINITE_ORDER, top_grade, interval=(r_max, None))
    bottom, bottom_grade = null_at(-r_max)
    if bottom is not True:
        return OrderResult(None, None, note="not dominated by any power of i within the tested range")

    grades = {top_grade, bottom_grade}
    lo, hi = -r_max, r_max
    unknown_at = None
    while hi - lo > tol:
        mid = (lo + hi) / 2
        ans, grade = null_at(mid)
        grades.add(grade)
        if ans is True:
            lo = mid
        elif ans is False:
            hi = mid
        else:
            unknown_at = mid
            break
    if unknown_at is None:
        grade = Grade.SYMBOLIC if grades == {Grade.SYMBOLIC} else Grade.NUMERIC
        return OrderResult(ExtOrder(simplest_between(lo, hi)), grade, interval=(lo, hi))

    # An undecided band: shrink it from both sides, treating Unknown as "not yet".
    a_lo, a_hi = lo, unknown_at
    while a_hi - a_lo > tol:
        mid = (a_lo + a_hi) / 2
        if null_at(mid)[0] is True:
            a_lo = mid
        else:
            a_hi = mid
    b_lo, b_hi = unknown_at, hi
    while b_hi - b_lo > tol:
        mid = (b_lo + b_hi) / 2
        if null_at(mid)[0] is False:
            b_hi = mid
        else:
            b_lo = mid
    band = (a_lo, b_hi)
    if b_hi - a_lo <= NONREGULAR_BAND:
        return OrderResult(
            ExtOrder(simplest_between(a_lo, b_hi)),
            Grade.NUMERIC,
            regular=False,
            interval=band,
            note="ratio at the order oscillates; order taken from the dichotomy band",
        )
    return OrderResult(None, None, regular=False, interval=band, note="nullness undecided over a wide band")

