"""Microcontinuity probes and the uniform-continuity classification.

A probe is a point of the enriched line: a standard real, a point infinitely
close to an open endpoint, or an infinite point. Standard probes are decided
in the series field. Germ probes try to refute with a pair of infinitely
close germs whose images are not infinitely close; a refutation is only
reported when the gap has a symbolic non-null certificate.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction

from bcontinuum import expr as E
from bcontinuum.errors import BContinuumError, DomainError, NotRepresentable, UsageError
from bcontinuum.germ import asymptotic as A
from bcontinuum.germ.core import (
    Germ,
    Grade,
    LimitResult,
    germ_compare,
    germ_is_null,
    germ_limit,
)
from bcontinuum.levicivita import DEFAULT_TRUNC, LeviCivitaNumber
from bcontinuum.numeric import ExtOrder, Ordering, Scalar, format_scalar, to_scalar

# grid window used when a side of the domain is unbounded
UNBOUNDED_WINDOW = (Fraction(-10), Fraction(10))

BJORLING_NOTE = (
    "boundary probes use germs a +/- 1/n; whether points 'indefinitely close' "
    "to an endpoint were meant as sequences or as atoms is not settled"
)

_N = E.Var("n")


def _c(q) -> E.Expr:
    return E.Const(Fraction(q))


# -- domains and probes -------------------------------------------------------

@dataclass(frozen=True)
class DomainSpec:
    """Interval with optional infinite ends (``None``)."""

    lower: Scalar | None
    upper: Scalar | None
    lower_open: bool = True
    upper_open: bool = True

    def __post_init__(self):
        lo = None if self.lower is None else to_scalar(self.lower)
        hi = None if self.upper is None else to_scalar(self.upper)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        if lo is None and not self.lower_open or hi is None and not self.upper_open:
            raise UsageError("an infinite end cannot be closed")
        if lo is not None and hi is not None and not lo < hi:
            raise UsageError("domain needs lower < upper")

    @classmethod
    def parse(cls, text: str) -> "DomainSpec":
        m = re.fullmatch(r"\s*([\(\[])\s*([^,]+?)\s*,\s*([^,]+?)\s*([\)\]])\s*", text)
        if not m:
            raise UsageError(f"bad interval {text!r}; expected e.g. (0,1) or [0,inf)")
        lb, a, b, rb = m.groups()

        def end(s, inf_sign):
            s = s.lower()
            if s in ("inf", "+inf", "infinity"):
                if inf_sign < 0:
                    raise UsageError("lower end cannot be +inf")
                return None
            if s in ("-inf", "-infinity"):
                if inf_sign > 0:
                    raise UsageError("upper end cannot be -inf")
                return None
            try:
                return Fraction(s)
            except ValueError:
                raise UsageError(f"bad interval end {s!r}") from None

        return cls(end(a, -1), end(b, 1), lb == "(", rb == ")")

    def contains(self, x) -> bool:
        x = to_scalar(x)
        if self.lower is not None and (x < self.lower or (x == self.lower and self.lower_open)):
            return False
        if self.upper is not None and (x > self.upper or (x == self.upper and self.upper_open)):
            return False
        return True

    def in_closure(self, x) -> bool:
        x = to_scalar(x)
        return (self.lower is None or x >= self.lower) and (self.upper is None or x <= self.upper)

    def text(self) -> str:
        lo = "-inf" if self.lower is None else format_scalar(self.lower)
        hi = "inf" if self.upper is None else format_scalar(self.upper)
        return f"{'(' if self.lower_open else '['}{lo},{hi}{')' if self.upper_open else ']'}"

    def grid(self, size: int) -> list[Fraction]:
        """Equally spaced points; endpoints only when closed."""
        if size < 3:
            raise UsageError("grid size must be at least 3")
        lo = self.lower if self.lower is not None else UNBOUNDED_WINDOW[0]
        hi = self.upper if self.upper is not None else UNBOUNDED_WINDOW[1]
        if self.lower is None and self.upper is not None:
            lo = min(lo, hi - (UNBOUNDED_WINDOW[1] - UNBOUNDED_WINDOW[0]))
        if self.upper is None and self.lower is not None:
            hi = max(hi, lo + (UNBOUNDED_WINDOW[1] - UNBOUNDED_WINDOW[0]))
        lo, hi = Fraction(lo), Fraction(hi)
        skip_lo = self.lower_open and self.lower is not None
        skip_hi = self.upper_open and self.upper is not None
        slots = size + skip_lo + skip_hi
        pts = [lo + (hi - lo) * Fraction(k, slots - 1) for k in range(slots)]
        if skip_lo:
            pts = pts[1:]
        if skip_hi:
            pts = pts[:-1]
        return pts


class ProbeKind(enum.Enum):
    STANDARD = "standard"
    BOUNDARY = "boundary"
    INFINITE = "infinite"


@dataclass(frozen=True)
class ProbePoint:
    kind: ProbeKind
    value: Scalar | None = None  # the standard point, or the endpoint
    side: int = 1  # +1: from above / +infinity, -1: from below / -infinity

    @classmethod
    def standard(cls, x) -> "ProbePoint":
        return cls(ProbeKind.STANDARD, to_scalar(x))

    @classmethod
    def boundary(cls, a, side: int = 1) -> "ProbePoint":
        return cls(ProbeKind.BOUNDARY, to_scalar(a), 1 if side > 0 else -1)

    @classmethod
    def infinite(cls, side: int = 1) -> "ProbePoint":
        return cls(ProbeKind.INFINITE, None, 1 if side > 0 else -1)

    @classmethod
    def parse(cls, text: str) -> "ProbePoint":
        t = text.strip()
        if t in ("infinite", "infinite+", "+infinite", "inf", "+inf"):
            return cls.infinite(1)
        if t in ("infinite-", "-infinite", "-inf"):
            return cls.infinite(-1)
        kind, _, arg = t.partition(":")
        try:
            if kind == "standard" and arg:
                return cls.standard(Fraction(arg))
            if kind == "boundary" and arg and arg[-1] in "+-":
                return cls.boundary(Fraction(arg[:-1]), 1 if arg[-1] == "+" else -1)
        except ValueError:
            pass
        raise UsageError(f"bad probe {text!r}; expected standard:X0, boundary:A+ / A-, or infinite")

    def germ(self) -> Germ | None:
        """The canonical germ realising the probe, if any."""
        if self.kind is ProbeKind.BOUNDARY:
            op = "+" if self.side > 0 else "-"
            return Germ(E.BinOp(op, _c(self.value), E.BinOp("/", _c(1), _N)))
        if self.kind is ProbeKind.INFINITE:
            return Germ(_N if self.side > 0 else E.Neg(_N))
        return None

    def text(self) -> str:
        if self.kind is ProbeKind.STANDARD:
            return f"standard:{format_scalar(self.value)}"
        if self.kind is ProbeKind.BOUNDARY:
            return f"boundary:{format_scalar(self.value)}{'+' if self.side > 0 else '-'}"
        return "infinite" if self.side > 0 else "infinite-"


# -- verdicts ---------------------------------------------------------------

class MicroStatus(enum.Enum):
    MICROCONTINUOUS = "microcontinuous"
    REFUTED = "refuted"
    UNKNOWN = "unknown"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Witness:
    family: str
    x: Germ
    x_prime: Germ
    gap: LimitResult

    def gap_text(self) -> str:
        return str(self.gap)


@dataclass
class MicroVerdict:
    probe: ProbePoint
    status: MicroStatus
    grade: Grade | None = None
    witness: Witness | None = None
    delta: LeviCivitaNumber | None = None
    delta_order: ExtOrder | None = None
    certificate: str = ""
    log: list[str] = field(default_factory=list)


# -- standard probes --------------------------------------------------------

def _var(e: E.Expr) -> str | None:
    names = E.free_vars(e)
    if len(names) > 1:
        raise UsageError(f"expected one variable, got {sorted(names)}")
    return next(iter(names), None)


def _lc_value(e: E.Expr, name: str | None, x: LeviCivitaNumber):
    out = E.evaluate(e, {name or "_": x})
    if not isinstance(out, LeviCivitaNumber):
        out = LeviCivitaNumber.from_scalar(out, x.trunc)
    return out


def _standard(e: E.Expr, p: ProbePoint, domain: DomainSpec | None, trunc) -> MicroVerdict:
    name = _var(e)
    x0 = p.value
    if domain is not None and not domain.contains(x0):
        raise UsageError(f"probe {p.text()} lies outside {domain.text()}")
    eps = LeviCivitaNumber.eps(trunc)
    sides = []
    if domain is None or domain.upper is None or x0 < domain.upper:
        sides.append(eps)
    if domain is None or domain.lower is None or x0 > domain.lower:
        sides.append(-eps)
    base = LeviCivitaNumber.from_scalar(x0, trunc)
    log = []
    worst = None
    try:
        f0 = _lc_value(e, name, base)
        for h in sides:
            d = _lc_value(e, name, base + h) - f0
            tag = "+eps" if h.sign() > 0 else "-eps"
            if d.is_zero():
                log.append(f"{tag}: delta = 0")
                worst = worst or d
                continue
            log.append(f"{tag}: delta = {d}, order {d.order()}")
            if worst is None or worst.is_zero() or d.leading_exponent < worst.leading_exponent:
                worst = d
    except (NotRepresentable, DomainError) as exc:
        log.append(f"series evaluation failed: {exc}")
        return MicroVerdict(p, MicroStatus.UNKNOWN, log=log)
    if worst.is_zero() or worst.leading_exponent > 0:
        order = None if worst.is_zero() else worst.order()
        return MicroVerdict(p, MicroStatus.MICROCONTINUOUS, Grade.SYMBOLIC, delta=worst,
                            delta_order=order, certificate="series", log=log)
    # an appreciable or infinite jump computed exactly in the series field
    gap = (LimitResult("finite", abs(worst.standard_part()), Grade.SYMBOLIC)
           if worst.is_finite() else LimitResult("infinite", None, Grade.SYMBOLIC, worst.sign()))
    x = Germ.constant(x0)
    step = E.BinOp("/", _c(1), _N)
    xp = Germ(E.BinOp("+", _c(x0), step))
    return MicroVerdict(p, MicroStatus.REFUTED, Grade.SYMBOLIC, witness=Witness("series jump", x, xp, gap),
                        delta=worst, delta_order=worst.order(), certificate="series", log=log)


# -- germ probes ------------------------------------------------------------

def _invert(u: E.Expr, target: E.Expr, name: str) -> E.Expr | None:
    """x with u(x) = target, for u built from monotone pieces; None otherwise."""
    if isinstance(u, E.Var):
        return target if u.name == name else None
    if isinstance(u, E.Neg):
        return _invert(u.arg, E.Neg(target), name)
    if isinstance(u, E.Call):
        inverse = {"exp": "log", "log": "exp"}.get(u.fn)
        if inverse:
            return _invert(u.arg, E.Call(inverse, target), name)
        if u.fn == "sqrt":
            return _invert(u.arg, E.BinOp("^", target, _c(2)), name)
        return None
    if isinstance(u, E.BinOp):
        lv, rv = name in E.free_vars(u.left), name in E.free_vars(u.right)
        if lv == rv:
            return None
        if u.op == "+":
            var_side, const = (u.left, u.right) if lv else (u.right, u.left)
            return _invert(var_side, E.BinOp("-", target, const), name)
        if u.op == "-":
            if lv:
                return _invert(u.left, E.BinOp("+", target, u.right), name)
            return _invert(u.right, E.BinOp("-", u.left, target), name)
        if u.op == "*":
            var_side, const = (u.left, u.right) if lv else (u.right, u.left)
            return _invert(var_side, E.BinOp("/", target, const), name)
        if u.op == "/":
            if lv:
                return _invert(u.left, E.BinOp("*", target, u.right), name)
            return _invert(u.right, E.BinOp("/", u.left, target), name)
        if u.op == "^" and lv:
            return _invert(u.left, E.BinOp("^", target, E.BinOp("/", _c(1), u.right)), name)
    return None


def _families(e: E.Expr, name: str, p: ProbePoint):
    """Candidate witness pairs as (family, x, x') expression pairs in n."""
    two_pi_n = E.BinOp("*", E.BinOp("*", _c(2), E.NamedConst("pi")), _N)
    quarter = E.BinOp("/", E.NamedConst("pi"), _c(2))
    seen = set()
    for node in E.walk(e):
        if isinstance(node, E.Call) and node.fn in ("sin", "cos") and name in E.free_vars(node.arg):
            for sign in (1, -1):
                t1 = two_pi_n if sign > 0 else E.Neg(two_pi_n)
                t2 = E.BinOp("+", t1, quarter)
                x1, x2 = _invert(node.arg, t1, name), _invert(node.arg, t2, name)
                if x1 is not None and x2 is not None and (x1, x2) not in seen:
                    seen.add((x1, x2))
                    yield "oscillation", x1, x2
    if p.kind is ProbeKind.INFINITE:
        s = p.side
        base = _N if s > 0 else E.Neg(_N)
        for step in (E.BinOp("/", _c(1), _N), E.BinOp("^", _N, _c(Fraction(-1, 2)))):
            yield "infinite point", base, E.BinOp("+" if s > 0 else "-", base, step)
    if p.kind is ProbeKind.BOUNDARY:
        op = "+" if p.side > 0 else "-"
        a = _c(p.value)
        yield ("open boundary", E.BinOp(op, a, E.BinOp("/", _c(1), _N)),
               E.BinOp(op, a, E.BinOp("/", _c(2), _N)))


def _approaches(x: Germ, p: ProbePoint) -> bool:
    """Symbolic check that x is eventually at the probe point, on the right side."""
    if p.kind is ProbeKind.INFINITE:
        lim = germ_limit(x)
        return lim.kind == "infinite" and lim.grade is Grade.SYMBOLIC and lim.sign == p.side
    d = x - Germ.constant(p.value)
    null = germ_is_null(d)
    side = germ_compare(d, 0, tier="symbolic")
    want = Ordering.GREATER if p.side > 0 else Ordering.LESS
    return null.answer is True and null.grade is Grade.SYMBOLIC and side.answer is want


def _lc_certificate(e: E.Expr, name: str, p: ProbePoint, trunc) -> str | None:
    """Series evidence that f is infinitely close to a standard value near p."""
    eps = LeviCivitaNumber.eps(trunc)
    if p.kind is ProbeKind.BOUNDARY:
        x = LeviCivitaNumber.from_scalar(p.value, trunc) + (eps if p.side > 0 else -eps)
    else:
        x = eps.invert() if p.side > 0 else -eps.invert()
    try:
        fx = _lc_value(e, name, x)
    except (NotRepresentable, DomainError, BContinuumError):
        return None
    if not fx.is_finite():
        return None
    d = fx - LeviCivitaNumber.from_scalar(fx.standard_part(), trunc)
    if d.is_zero() or d.leading_exponent > 0:
        return f"f at the probe = {fx}"
    return None


def _germ_probe(e: E.Expr, p: ProbePoint, domain: DomainSpec | None, trunc) -> MicroVerdict:
    name = _var(e)
    if domain is not None:
        if p.kind is ProbeKind.BOUNDARY:
            at_lower = domain.lower is not None and p.value == domain.lower and p.side > 0
            at_upper = domain.upper is not None and p.value == domain.upper and p.side < 0
            ok = (at_lower and domain.lower_open) or (at_upper and domain.upper_open)
            if not ok:
                raise UsageError(f"boundary probe {p.text()} needs an open endpoint of {domain.text()}")
        elif (p.side > 0 and domain.upper is not None) or (p.side < 0 and domain.lower is not None):
            raise UsageError(f"infinite probe {p.text()} needs an unbounded side of {domain.text()}")
    log = []
    if p.kind is ProbeKind.BOUNDARY:
        log.append(BJORLING_NOTE)
    if name is None:
        return MicroVerdict(p, MicroStatus.MICROCONTINUOUS, Grade.SYMBOLIC, certificate="constant", log=log)
    for family, ex1, ex2 in _families(e, name, p):
        x1, x2 = Germ(ex1), Germ(ex2)
        pair = f"{family}: ({x1.text()}, {x2.text()})"
        try:
            if not (_approaches(x1, p) and _approaches(x2, p)):
                log.append(f"{pair} skipped, not at the probe")
                continue
            close = germ_is_null(x1 - x2)
            if not (close.answer is True and close.grade is Grade.SYMBOLIC):
                log.append(f"{pair} skipped, not infinitely close")
                continue
            g = Germ.from_substitution(e, {name: x1}) - Germ.from_substitution(e, {name: x2})
            gap_null = germ_is_null(g)
        except (BContinuumError, A.NotSymbolic) as exc:
            log.append(f"{pair} skipped: {exc}")
            continue
        if gap_null.answer is False and gap_null.grade is Grade.SYMBOLIC:
            gap = germ_limit(g.map(E.Call("abs", E.Var("t"))))
            log.append(f"{pair} refutes, gap {gap}")
            return MicroVerdict(p, MicroStatus.REFUTED, Grade.SYMBOLIC,
                                witness=Witness(family, x1, x2, gap), certificate="symbolic gap", log=log)
        log.append(f"{pair} gap null: {gap_null}")
    cert = _lc_certificate(e, name, p, trunc)
    if cert:
        log.append(cert)
        return MicroVerdict(p, MicroStatus.MICROCONTINUOUS, Grade.SYMBOLIC, certificate="series", log=log)
    return MicroVerdict(p, MicroStatus.UNKNOWN, log=log)


def microcontinuity_at(e, p: ProbePoint, domain: DomainSpec | None = None, trunc=DEFAULT_TRUNC) -> MicroVerdict:
    e = E.ensure_expr(e)
    if p.kind is ProbeKind.STANDARD:
        return _standard(e, p, domain, trunc)
    return _germ_probe(e, p, domain, trunc)


# -- uniform layer ----------------------------------------------------------

class UniformStatus(enum.Enum):
    NOT_UNIFORM = "not_uniform"
    UNIFORM_ON_PROBES = "uniform_on_probes"
    UNKNOWN = "unknown"

    def __str__(self):
        return self.value


@dataclass
class UniformReport:
    status: UniformStatus
    domain: DomainSpec
    probes: list[MicroVerdict]
    refuted: MicroVerdict | None = None
    note: str = "uniform_on_probes is evidence from a finite probe set, not a proof"


def admissible_probes(domain: DomainSpec, grid_size: int) -> list[ProbePoint]:
    probes = [ProbePoint.standard(x) for x in domain.grid(grid_size)]
    if domain.lower is not None and domain.lower_open:
        probes.append(ProbePoint.boundary(domain.lower, 1))
    if domain.upper is not None and domain.upper_open:
        probes.append(ProbePoint.boundary(domain.upper, -1))
    if domain.upper is None:
        probes.append(ProbePoint.infinite(1))
    if domain.lower is None:
        probes.append(ProbePoint.infinite(-1))
    return probes


def classify_uniform(e, domain: DomainSpec, standard_grid_size: int = 11, trunc=DEFAULT_TRUNC) -> UniformReport:
    e = E.ensure_expr(e)
    results = [microcontinuity_at(e, p, domain, trunc) for p in admissible_probes(domain, standard_grid_size)]
    refuted = next((r for r in results if r.status is MicroStatus.REFUTED), None)
    if refuted is not None:
        status = UniformStatus.NOT_UNIFORM
    elif all(r.status is MicroStatus.MICROCONTINUOUS for r in results):
        status = UniformStatus.UNIFORM_ON_PROBES
    else:
        status = UniformStatus.UNKNOWN
    return UniformReport(status, domain, results, refuted)
