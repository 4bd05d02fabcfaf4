"""Pointwise versus diagonal convergence of a series of functions.

For a term f(k, x) and a sequence x_n, the diagonal remainder is
r_n = sum_{k>n} f(k, x_n). Pointwise convergence at every standard x says
nothing about r_n; convergence at the infinitesimal point x_n as well
(the stronger hypothesis) forces r_n to be a null sequence.

Tails are summed in doubling levels. Each level is summarised by a smooth
(bump-weighted) mean of the running sums across the level, which damps
oscillating remainders, and the level means are Richardson-extrapolated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from bcontinuum import expr as E
from bcontinuum._kernels import TermKernel
from bcontinuum.errors import UsageError
from bcontinuum.germ import sampling as S
from bcontinuum.germ.core import Germ, Grade, HorizonSchedule, germ_from_expr

TAIL_TOL = 1e-9
CAP_FACTOR = 10_000
START_FACTOR = 16
RICHARDSON_DEPTH = 3

DEFAULT_HORIZONS = HorizonSchedule(tuple(2**k for k in range(4, 11)), offsets=(0,))
DEFAULT_GRID = tuple(Fraction(k, 10) for k in range(1, 10))

AMBIGUITY_NOTE = (
    "the two readings of the convergence hypothesis are both computed; "
    "which one was intended is left open"
)


@dataclass
class TailResult:
    value: float
    converged: bool
    levels: int
    k_max: int


def tail_sum(kernel: TermKernel, x: float, n: int, tol: float = TAIL_TOL,
             cap_factor: int = CAP_FACTOR) -> TailResult:
    """sum_{k>n} f(k, x), accelerated; flagged when the cap is reached first."""
    cap = cap_factor * n
    lo = 8 * n
    s, _ = kernel.advance(x, 0.0, n + 1, lo - 1)
    hi = START_FACTOR * n
    table: list[list[float]] = []
    best = None
    level = 0
    while hi <= cap:
        s, mean = kernel.advance(x, s, lo, hi, weighted=True)
        row = [mean]
        for j in range(1, min(level, RICHARDSON_DEPTH) + 1):
            f = 2.0**j
            row.append((f * row[j - 1] - table[-1][j - 1]) / (f - 1.0))
        table.append(row)
        if level >= 1:
            prev, cur = table[-2][-1], row[-1]
            if abs(cur - prev) < tol:
                return TailResult(cur, True, level + 1, hi)
            best = cur
        lo, hi = hi + 1, 2 * hi
        level += 1
    return TailResult(best if best is not None else table[-1][-1], False, level, lo - 1)


def _richardson_limit(horizons, values) -> float:
    """Extrapolate r_n to n = infinity assuming an O(1/n) leading correction."""
    hs = list(horizons)
    vs = list(values)
    if len(vs) < 2:
        return vs[-1]
    rows = [vs[-3:]] if len(vs) >= 3 else [vs[-2:]]
    hs = hs[-len(rows[0]):]
    cur = rows[0]
    order = 1
    while len(cur) > 1:
        nxt = []
        for j in range(len(cur) - 1):
            ratio = (hs[j + order] / hs[j]) ** order if j + order < len(hs) else 2.0**order
            nxt.append((ratio * cur[j + 1] - cur[j]) / (ratio - 1.0))
        cur = nxt
        order += 1
    return cur[0]


@dataclass
class HorizonRow:
    n: int
    x: float
    remainder: float
    converged: bool
    k_max: int


@dataclass
class PointwiseRow:
    x: Fraction
    limit: float
    verdict: object
    envelopes: list


@dataclass
class SumTheoremReport:
    term: str
    x_seq: str
    rows: list[HorizonRow]
    null: object  # True / False / None
    null_grade: Grade | None
    diagonal_limit: float | None
    verdict1821: str
    verdict1853: str
    pointwise: list[PointwiseRow] = field(default_factory=list)
    flagged: bool = False
    backend: str = ""
    note: str = AMBIGUITY_NOTE


def _xseq_value(g: Germ, n: int) -> float:
    with mpmath.workdps(S.dps_for(n)):
        return float(S.to_mpf(g.sample(n)))


def _pointwise(kernel: TermKernel, x: Fraction, horizons) -> PointwiseRow:
    xf = float(x)
    n_ref = 2 * horizons[-1]
    tail = tail_sum(kernel, xf, n_ref)
    sums = kernel.partial_sums(xf, 1, n_ref)
    total = float(sums[-1]) + tail.value
    rows = []
    envs = []
    for h in horizons:
        env = float(max(abs(total - sums[h - 1:2 * h])))
        envs.append(env)
        rows.append((h, [h], [mpmath.mpf(env)]))
    if not tail.converged:
        return PointwiseRow(x, total, None, envs)
    ans, _ = S.numeric_null(rows)
    return PointwiseRow(x, total, ans, envs)


def sum_theorem_diagonal(term, x_seq, horizons: HorizonSchedule | None = None,
                         grid=DEFAULT_GRID, use_numba: bool | None = None) -> SumTheoremReport:
    if isinstance(term, str):
        term = E.parse(term, variables={"k", "x"})
    if isinstance(x_seq, (str, E.Expr)):
        x_seq = germ_from_expr(x_seq)
    extra = E.free_vars(term) - {"k", "x"}
    if extra:
        raise UsageError(f"series terms use k and x, got {sorted(extra)}")
    schedule = horizons or DEFAULT_HORIZONS
    kernel = TermKernel(term, use_numba)

    rows = []
    for n in schedule.horizons:
        x = _xseq_value(x_seq, n)
        t = tail_sum(kernel, x, n)
        rows.append(HorizonRow(n, x, t.value, t.converged, t.k_max))
    flagged = not all(r.converged for r in rows)

    diag = Germ(sampler=lambda n, table={r.n: r.remainder for r in rows}: mpmath.mpf(table[n]),
                label="diagonal remainder")
    if flagged:
        null, grade = None, None
    else:
        table = [(r.n, [r.n], [diag.raw(r.n)]) for r in rows]
        null, _ = S.numeric_null(table)
        grade = Grade.NUMERIC if null is not None else None

    if null is True:
        limit = 0.0
    elif flagged:
        limit = None
    else:
        limit = _richardson_limit([r.n for r in rows], [r.remainder for r in rows])

    pointwise = [_pointwise(kernel, Fraction(x), schedule.horizons) for x in grid]
    verdicts = [p.verdict for p in pointwise]
    if any(v is False for v in verdicts):
        v1821 = "violated"
    elif verdicts and all(v is True for v in verdicts):
        v1821 = "satisfied"
    else:
        v1821 = "unknown"

    if null is False:
        v1853 = "violated"
    elif null is True and v1821 == "satisfied":
        v1853 = "satisfied"
    else:
        v1853 = "unknown"

    return SumTheoremReport(
        term=E.to_text(term),
        x_seq=x_seq.text(),
        rows=rows,
        null=null,
        null_grade=grade,
        diagonal_limit=limit,
        verdict1821=v1821,
        verdict1853=v1853,
        pointwise=pointwise,
        flagged=flagged,
        backend=kernel.backend,
    )
