"""Command-line front end.

Every subcommand builds one payload dict; ``--json`` prints it as sorted,
indented JSON and the default text mode prints ``key: value`` lines from the
same dict. All numbers are written as strings so exact rationals survive.

Exit codes: 0 for any computed result (Unknown included), 2 for usage and
parse errors, 3 for domain errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, replace
from fractions import Fraction

from bcontinuum import __version__
from bcontinuum import expr as E
from bcontinuum.errors import DomainError, NonDifferentiable, NotRepresentable, UsageError
from bcontinuum.expr import ParseError
from bcontinuum.numeric import Approx, format_scalar, to_scalar

CONFIG_ENV = "BCONTINUUM_CONFIG"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3


@dataclass(frozen=True)
class CliConfig:
    trunc: int = 8
    precision: int = 15
    horizons: tuple[int, ...] | None = None
    r_max: int = 64
    output: str = "text"

    def validate(self) -> "CliConfig":
        if self.trunc < 2:
            raise UsageError("trunc must be at least 2")
        if self.precision < 1:
            raise UsageError("precision must be positive")
        if self.r_max < 1:
            raise UsageError("r_max must be positive")
        if self.output not in ("text", "json"):
            raise UsageError("output must be text or json")
        if self.horizons is not None:
            hs = self.horizons
            if len(hs) < 2 or any(b <= a for a, b in zip(hs, hs[1:])) or hs[0] < 1:
                raise UsageError("horizons must be positive, strictly increasing, at least two")
        return self

    def block(self) -> dict:
        return {
            "trunc": str(self.trunc),
            "precision": str(self.precision),
            "horizons": None if self.horizons is None else [str(h) for h in self.horizons],
            "r_max": str(self.r_max),
            "output": self.output,
        }


def load_config(path: str | None) -> CliConfig:
    cfg = CliConfig()
    if not path:
        return cfg
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    known = {"trunc", "precision", "horizons", "r_max", "output"}
    unknown = set(data) - known
    if unknown:
        raise UsageError(f"unknown config keys {sorted(unknown)}")
    if "horizons" in data and data["horizons"] is not None:
        data["horizons"] = tuple(int(h) for h in data["horizons"])
    return replace(cfg, **data)


# -- formatting ---------------------------------------------------------------

def num(x, digits: int = 15) -> str | None:
    """Decimal string: exact rationals as p/q, floats with ``digits`` significant digits."""
    if x is None:
        return None
    if isinstance(x, (int, Fraction)):
        return format_scalar(Fraction(x))
    if isinstance(x, Approx):
        x = x.value
    v = float(x)
    if v == 0:
        return "0"
    return f"{v:.{digits}g}"


def _verdict_word(ans) -> str:
    if ans is None:
        return "unknown"
    return str(ans).lower()


# -- subcommands --------------------------------------------------------------

def _schedule(cfg: CliConfig, offsets=None):
    from bcontinuum.germ import HorizonSchedule

    if cfg.horizons is None:
        return None
    if offsets is None:
        return HorizonSchedule(cfg.horizons)
    return HorizonSchedule(cfg.horizons, offsets)


def cmd_order(args, cfg):
    from bcontinuum.germ import cauchy_order

    f = E.parse(args.expr, variables={"i"})
    r = cauchy_order(f, "i", r_max=Fraction(cfg.r_max), schedule=_schedule(cfg))
    lo, hi = r.interval if r.interval else (None, None)
    return {
        "command": "order",
        "expr": E.to_text(f),
        "order": "unknown" if r.order is None else str(r.order),
        "grade": None if r.grade is None else str(r.grade),
        "regular": r.regular,
        "interval": [num(lo), num(hi)],
        "note": r.note,
    }


def cmd_st(args, cfg):
    from bcontinuum.levicivita import LeviCivitaNumber

    a = LeviCivitaNumber.parse(args.lc, trunc=cfg.trunc)
    return {
        "command": "st",
        "lc": a.to_text(),
        "class": a.classify().value,
        "st": num(a.standard_part(), cfg.precision),
    }


def cmd_deriv(args, cfg):
    from bcontinuum.analysis.derivative import central_difference, derivative_st
    from bcontinuum.dual import derivative_dual

    f = E.parse(args.expr)
    x0 = to_scalar(args.at)
    out = {"command": "deriv", "expr": E.to_text(f), "at": num(x0), "method": args.method,
           "lc": None, "dual": None, "agree": None, "status": "differentiable", "reason": ""}
    try:
        if args.method in ("lc", "both"):
            out["lc"] = num(derivative_st(f, x0, trunc=cfg.trunc), cfg.precision)
        if args.method in ("dual", "both"):
            out["dual"] = num(derivative_dual(f, x0), cfg.precision)
    except NonDifferentiable as exc:
        out.update(status="non_differentiable", reason=str(exc), lc=None, dual=None)
        return out
    except DomainError as exc:
        if args.method == "dual" or "abs has no derivative" not in str(exc):
            raise
        out.update(status="non_differentiable", reason=str(exc))
        return out
    if args.method == "both":
        out["agree"] = out["lc"] == out["dual"]
    out["central_difference"] = num(central_difference(f, x0), cfg.precision)
    return out


def _witness(w, digits):
    if w is None:
        return None
    return {"family": w.family, "x": w.x.text(), "x_prime": w.x_prime.text(), "gap": _limit_text(w.gap, digits)}


def _limit_text(lim, digits):
    if lim.kind == "finite":
        return num(lim.value, digits)
    return lim.kind


def _micro_payload(v, digits):
    return {
        "probe": v.probe.text(),
        "status": str(v.status),
        "grade": None if v.grade is None else str(v.grade),
        "delta": None if v.delta is None else v.delta.to_text(),
        "delta_order": None if v.delta_order is None else str(v.delta_order),
        "witness": _witness(v.witness, digits),
        "certificate": v.certificate,
    }


def cmd_microcont(args, cfg):
    from bcontinuum.analysis.micro import DomainSpec, ProbePoint, microcontinuity_at

    f = E.parse(args.expr)
    probe = ProbePoint.parse(args.probe)
    domain = DomainSpec.parse(args.domain) if args.domain else None
    v = microcontinuity_at(f, probe, domain, trunc=cfg.trunc)
    out = {"command": "microcont", "expr": E.to_text(f), "domain": None if domain is None else domain.text()}
    out.update(_micro_payload(v, cfg.precision))
    out["log"] = list(v.log)
    return out


def cmd_uniform(args, cfg):
    from bcontinuum.analysis.micro import DomainSpec, classify_uniform

    f = E.parse(args.expr)
    d = DomainSpec.parse(args.domain)
    r = classify_uniform(f, d, args.grid, trunc=cfg.trunc)
    return {
        "command": "uniform",
        "expr": E.to_text(f),
        "domain": d.text(),
        "grid": str(args.grid),
        "status": str(r.status),
        "refuted_at": None if r.refuted is None else r.refuted.probe.text(),
        "witness": None if r.refuted is None else _witness(r.refuted.witness, cfg.precision),
        "probes": [_micro_payload(v, cfg.precision) for v in r.probes],
        "note": r.note,
    }


def cmd_sumthm(args, cfg):
    from bcontinuum.analysis.sumthm import sum_theorem_diagonal
    from bcontinuum.germ import germ_from_expr

    term = E.parse(args.term, variables={"k", "x"})
    xseq = germ_from_expr(E.parse(args.xseq, variables={"n"}))
    r = sum_theorem_diagonal(term, xseq, _schedule(cfg, offsets=(0,)))
    d = min(cfg.precision, 12)
    return {
        "command": "sumthm",
        "term": r.term,
        "xseq": r.x_seq,
        "horizons": [
            {"n": str(h.n), "x": num(h.x, d), "remainder": num(h.remainder, d),
             "converged": h.converged, "k_max": str(h.k_max)}
            for h in r.rows
        ],
        "null": r.null,
        "null_grade": None if r.null_grade is None else str(r.null_grade),
        "diagonal_limit": num(r.diagonal_limit, d),
        "verdict1821": r.verdict1821,
        "verdict1853": r.verdict1853,
        "pointwise": [{"x": num(p.x), "converges": p.verdict} for p in r.pointwise],
        "flagged": r.flagged,
        "note": r.note,
    }


def cmd_euler(args, cfg):
    from bcontinuum.analysis.euler import euler_cosine

    r = euler_cosine(to_scalar(args.v), args.kmax, args.horizon)
    d = cfg.precision
    return {
        "command": "euler",
        "v": num(r.v),
        "horizon": str(r.horizon),
        "rows": [{"k": str(x.k), "term": num(x.term, d), "target": num(x.target, d), "error": num(x.error, 3)}
                 for x in r.rows],
        "partial_sum": num(r.partial_sum, d),
        "cosine": num(r.cosine, d),
        "error": num(r.error, 3),
    }


def cmd_compare(args, cfg):
    from bcontinuum.germ import germ_compare, germ_from_expr

    a = germ_from_expr(E.parse(args.lhs, variables={"n"}))
    b = germ_from_expr(E.parse(args.rhs, variables={"n"}))
    v = germ_compare(a, b, _schedule(cfg))
    return {
        "command": "compare",
        "lhs": a.text(),
        "rhs": b.text(),
        "ordering": _verdict_word(v.answer),
        "grade": None if v.grade is None else str(v.grade),
    }


def cmd_limit(args, cfg):
    from bcontinuum.germ import germ_from_expr, germ_limit

    g = germ_from_expr(E.parse(args.germ, variables={"n"}))
    r = germ_limit(g, _schedule(cfg))
    return {
        "command": "limit",
        "germ": g.text(),
        "limit": _limit_text(r, cfg.precision),
        "grade": None if r.grade is None else str(r.grade),
        "sign": str(r.sign),
    }


COMMANDS = {
    "order": cmd_order,
    "st": cmd_st,
    "deriv": cmd_deriv,
    "microcont": cmd_microcont,
    "uniform": cmd_uniform,
    "sumthm": cmd_sumthm,
    "euler": cmd_euler,
    "compare": cmd_compare,
    "limit": cmd_limit,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit JSON")
    common.add_argument("--trunc", type=int, default=argparse.SUPPRESS, help="series truncation order T")
    common.add_argument("--precision", type=int, default=argparse.SUPPRESS, help="digits for approximate output")
    common.add_argument("--horizons", default=argparse.SUPPRESS, help="comma-separated horizon schedule")
    common.add_argument("--r-max", type=int, dest="r_max", default=argparse.SUPPRESS)
    common.add_argument("--config", default=argparse.SUPPRESS,
                        help=f"JSON config file (default: ${CONFIG_ENV})")

    p = _Parser(prog="bcontinuum", parents=[common],
                description="Infinitesimal calculus over series, dual numbers and sequence germs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("order", parents=[common], help="Cauchy order of f(i) as i -> 0+")
    s.add_argument("--expr", required=True)
    s = sub.add_parser("st", parents=[common], help="standard part of a series")
    s.add_argument("--lc", required=True)
    s = sub.add_parser("deriv", parents=[common], help="derivative as st(dy/dx)")
    s.add_argument("--expr", required=True)
    s.add_argument("--at", required=True)
    s.add_argument("--method", choices=("lc", "dual", "both"), default="both")
    s = sub.add_parser("microcont", parents=[common], help="microcontinuity at one probe")
    s.add_argument("--expr", required=True)
    s.add_argument("--probe", required=True, help="standard:X0 | boundary:A+ | boundary:A- | infinite")
    s.add_argument("--domain", default=None)
    s = sub.add_parser("uniform", parents=[common], help="uniform continuity on probes")
    s.add_argument("--expr", required=True)
    s.add_argument("--domain", required=True)
    s.add_argument("--grid", type=int, default=11)
    s = sub.add_parser("sumthm", parents=[common], help="diagonal remainder of a function series")
    s.add_argument("--term", required=True)
    s.add_argument("--xseq", required=True)
    s = sub.add_parser("euler", parents=[common], help="cosine series via de Moivre at a large n")
    s.add_argument("--v", required=True)
    s.add_argument("--kmax", type=int, required=True)
    s.add_argument("--horizon", type=int, default=10**6)
    s = sub.add_parser("compare", parents=[common], help="compare two germs in n")
    s.add_argument("--lhs", required=True)
    s.add_argument("--rhs", required=True)
    s = sub.add_parser("limit", parents=[common], help="limit of a germ in n")
    s.add_argument("--germ", required=True)
    return p


def _resolve_config(ns) -> CliConfig:
    cfg = load_config(getattr(ns, "config", None) or os.environ.get(CONFIG_ENV))
    changes = {}
    for key in ("trunc", "precision", "r_max"):
        if hasattr(ns, key):
            changes[key] = getattr(ns, key)
    if hasattr(ns, "horizons"):
        try:
            changes["horizons"] = tuple(int(t) for t in ns.horizons.split(",") if t.strip())
        except ValueError:
            raise UsageError(f"bad horizon list {ns.horizons!r}") from None
    if getattr(ns, "json", False):
        changes["output"] = "json"
    return replace(cfg, **changes).validate()


def render(payload: dict, mode: str) -> str:
    if mode == "json":
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    lines = []
    for key, value in payload.items():
        if key == "config":
            continue
        if isinstance(value, (list, dict)):
            value = json.dumps(value, sort_keys=True)
        elif value is None:
            value = "-"
        elif isinstance(value, bool):
            value = str(value).lower()
        lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        ns = build_parser().parse_args(argv)
        cfg = _resolve_config(ns)
        payload = COMMANDS[ns.command](ns, cfg)
        payload["config"] = cfg.block()
    except ParseError as exc:
        print(f"parse error: {exc}", file=stderr)
        return EXIT_USAGE
    except (UsageError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, DomainError):
            print(f"domain error: {exc}", file=stderr)
            return EXIT_DOMAIN
        print(f"usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except (DomainError, NotRepresentable) as exc:
        print(f"domain error: {exc}", file=stderr)
        return EXIT_DOMAIN
    stdout.write(render(payload, cfg.output))
    return EXIT_OK


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
