"""Computable models of an infinitesimal-enriched continuum.

Three backends: truncated Levi-Civita series (:mod:`bcontinuum.levicivita`),
dual numbers (:mod:`bcontinuum.dual`) and Frechet-filter sequence germs
(:mod:`bcontinuum.germ`), tied together by a shared expression language
(:mod:`bcontinuum.expr`) and the analytic routines of
:mod:`bcontinuum.analysis`.
"""

from bcontinuum.errors import (
    BContinuumError,
    DomainError,
    NonDifferentiable,
    NotRepresentable,
    UsageError,
)
from bcontinuum.expr import ParseError, evaluate, parse, to_text
from bcontinuum.levicivita import LeviCivitaNumber
from bcontinuum.numeric import Approx, ExtOrder, Ordering

__all__ = [
    "Approx",
    "BContinuumError",
    "DomainError",
    "ExtOrder",
    "LeviCivitaNumber",
    "NonDifferentiable",
    "NotRepresentable",
    "Ordering",
    "ParseError",
    "UsageError",
    "evaluate",
    "parse",
    "to_text",
]

__version__ = "0.1.0"
