"""Sequence germs modulo eventual equality."""

from bcontinuum.germ.asymptotic import NotSymbolic
from bcontinuum.germ.core import (
    DEFAULT_SCHEDULE,
    Germ,
    Grade,
    HorizonSchedule,
    LimitResult,
    OrderResult,
    Verdict,
    cauchy_order,
    germ_compare,
    germ_from_expr,
    germ_is_null,
    germ_limit,
    germ_sample,
    simplest_between,
)

__all__ = [
    "DEFAULT_SCHEDULE",
    "Germ",
    "Grade",
    "HorizonSchedule",
    "LimitResult",
    "NotSymbolic",
    "OrderResult",
    "Verdict",
    "cauchy_order",
    "germ_compare",
    "germ_from_expr",
    "germ_is_null",
    "germ_limit",
    "germ_sample",
    "simplest_between",
]
