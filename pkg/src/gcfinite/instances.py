"""Built-in example instances: a class together with its natural measure."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .core import FunctionClass, Measure, SetFamily
from .counterexample import BlockStructure, block_measure, build_block_class
from .projective import build_plane


def fano() -> tuple[FunctionClass, Measure]:
    """Indicators of the seven lines of PG(2,2) under the uniform measure."""
    fam = SetFamily(build_plane(2).incidence)
    return fam.to_function_class(), Measure.uniform(7)


def cube(d: int) -> tuple[FunctionClass, Measure]:
    """Coordinate indicators on ``{0,1}^d`` under the uniform measure."""
    x = np.arange(1 << d)
    rows = [[Fraction(int(b)) for b in (x >> i) & 1] for i in range(d)]
    return FunctionClass.from_rows(rows), Measure.uniform(1 << d)


def blocks(primes) -> tuple[FunctionClass, Measure]:
    """Block class on the given primes; block ``j`` gets mass ``m_j / total``."""
    s = BlockStructure(tuple(primes))
    _, fam = build_block_class(s)
    total = s.materialized_size
    return fam.to_function_class(), block_measure(s, [Fraction(m, total) for m in s.block_sizes])
