"""Exact finite computations around Glivenko-Cantelli classes.

Boolean independence and gamma-dimension, covering and bracketing numbers,
finite projective planes, a block class whose bracketing numbers blow up,
and Monte Carlo demonstrations of uniform convergence and its failure.
"""

from .core import (
    DomainMismatch,
    FiniteDomain,
    FunctionClass,
    Levels,
    Measure,
    Partition,
    SetFamily,
    as_fraction,
    partition_generated_by,
    refine,
)

__all__ = [
    "DomainMismatch",
    "FiniteDomain",
    "FunctionClass",
    "Levels",
    "Measure",
    "Partition",
    "SetFamily",
    "as_fraction",
    "partition_generated_by",
    "refine",
]
