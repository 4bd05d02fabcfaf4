"""Derivatives, microcontinuity, the sum theorem and Euler's cosine series."""

from bcontinuum.analysis.derivative import central_difference, derivative_st
from bcontinuum.analysis.euler import EulerReport, euler_cosine
from bcontinuum.analysis.micro import (
    DomainSpec,
    MicroStatus,
    MicroVerdict,
    ProbePoint,
    UniformReport,
    UniformStatus,
    classify_uniform,
    microcontinuity_at,
)
from bcontinuum.analysis.sumthm import SumTheoremReport, sum_theorem_diagonal

__all__ = [
    "DomainSpec",
    "EulerReport",
    "MicroStatus",
    "MicroVerdict",
    "ProbePoint",
    "SumTheoremReport",
    "UniformReport",
    "UniformStatus",
    "central_difference",
    "classify_uniform",
    "derivative_st",
    "euler_cosine",
    "microcontinuity_at",
    "sum_theorem_diagonal",
]
