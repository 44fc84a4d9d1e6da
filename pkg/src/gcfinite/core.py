"""Finite-domain primitives: domains, measures, function classes, partitions.

Points of a domain are the dense indices ``0..size-1``.  Every object here is
an immutable value; numpy arrays are stored read-only.  Exact mode keeps all
numbers as :class:`fractions.Fraction` (numpy ``object`` arrays); approximate
mode uses ``float64``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from typing import Iterable, Sequence, Union

import numpy as np

Number = Union[Fraction, float, int]

APPROX_TOL = 1e-12


class DomainMismatch(ValueError):
    """Raised when two objects live on domains of different sizes."""


def as_fraction(x) -> Fraction:
    """Coerce ``x`` to a Fraction.

    Strings of the form ``"a/b"`` or ``"a"`` are parsed exactly.  Floats are
    refused: an exact pipeline must never see a rounded value.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (bool, np.bool_)):
        return Fraction(int(x))
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        s = x.strip()
        if "." in s or "e" in s.lower():
            raise ValueError(f"refusing decimal literal {x!r} in exact mode; use 'a/b'")
        return Fraction(s)
    raise TypeError(f"cannot use {type(x).__name__} value {x!r} as an exact rational")


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def _lcm(values: Iterable[int]) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


def _integer_scale(arr: np.ndarray) -> tuple[np.ndarray, int]:
    """Write an array of Fractions as ``ints / denominator`` (exact).

    The integer array is int64 when it fits, otherwise an object array of
    Python ints.
    """
    flat = arr.ravel()
    den = _lcm(v.denominator for v in flat)
    ints = [v.numerator * (den // v.denominator) for v in flat]
    if ints and max(abs(i) for i in ints) < 2**62 // max(1, len(ints)):
        out = np.array(ints, dtype=np.int64)
    else:
        out = np.empty(len(ints), dtype=object)
        out[:] = ints
    return out.reshape(arr.shape), den


def _to_mask(points, size: int) -> np.ndarray:
    """Boolean membership vector from a mask or an iterable of indices."""
    if isinstance(points, np.ndarray) and points.dtype == bool:
        if points.shape != (size,):
            raise DomainMismatch(f"mask of length {points.shape} on a {size}-point domain")
        return points
    mask = np.zeros(size, dtype=bool)
    idx = np.fromiter((int(p) for p in points), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= size):
        raise IndexError(f"point index out of range for domain of size {size}")
    mask[idx] = True
    return mask


@dataclass(frozen=True)
class FiniteDomain:
    size: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("a domain needs at least one point")
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            if len(self.labels) != self.size:
                raise ValueError("labels must have one entry per point")

    def mask(self, points) -> np.ndarray:
        return _to_mask(points, self.size)


@dataclass(frozen=True, eq=False)
class Measure:
    """Point weights on ``0..size-1``.

    ``residual`` is mass that lives outside the materialized points (used by
    block truncations of countable domains).  The weights sum to
    ``1 - residual``: exactly in exact mode, within ``1e-12`` otherwise.
    """

    weights: np.ndarray
    exact: bool = True
    residual: Number = 0

    def __post_init__(self):
        w = self.weights
        if self.exact:
            w = np.array([as_fraction(v) for v in np.ravel(w)], dtype=object)
            res = as_fraction(self.residual)
        else:
            w = np.asarray(w, dtype=np.float64).ravel().copy()
            res = float(self.residual)
        if w.size < 1:
            raise ValueError("measure on an empty domain")
        if any(v < 0 for v in w) or res < 0:
            raise ValueError("negative weight")
        total = sum(w, Fraction(0) if self.exact else 0.0) + res
        if self.exact and total != 1:
            raise ValueError(f"weights plus residual sum to {total}, not 1")
        if not self.exact and abs(total - 1.0) > APPROX_TOL:
            raise ValueError(f"weights plus residual sum to {total!r}, not 1")
        object.__setattr__(self, "weights", _frozen(w))
        object.__setattr__(self, "residual", res)

    @classmethod
    def uniform(cls, size: int, exact: bool = True) -> "Measure":
        if exact:
            return cls(np.array([Fraction(1, size)] * size, dtype=object))
        return cls(np.full(size, 1.0 / size), exact=False)

    @classmethod
    def point_mass(cls, size: int, point: int) -> "Measure":
        w = [Fraction(0)] * size
        w[point] = Fraction(1)
        return cls(np.array(w, dtype=object))

    @property
    def size(self) -> int:
        return self.weights.size

    @cached_property
    def integer_weights(self) -> tuple[np.ndarray, int]:
        """Weights as ``(ints, denominator)``; exact mode only."""
        if not self.exact:
            raise TypeError("integer weights need an exact measure")
        return _integer_scale(self.weights)

    def mass(self, points) -> Number:
        mask = _to_mask(points, self.size)
        zero = Fraction(0) if self.exact else 0.0
        return sum(self.weights[mask], zero)

    def integrate(self, values: np.ndarray) -> Number:
        """``sum_x mu(x) * values[x]``."""
        values = np.asarray(values, dtype=object if self.exact else np.float64)
        if values.shape != (self.size,):
            raise DomainMismatch("value vector does not match the measure's domain")
        zero = Fraction(0) if self.exact else 0.0
        return sum(self.weights * values, zero)

    @cached_property
    def support(self) -> np.ndarray:
        return _frozen(np.array([v > 0 for v in self.weights], dtype=bool))

    def __eq__(self, other):
        if not isinstance(other, Measure):
            return NotImplemented
        return (
            self.exact == other.exact
            and self.residual == other.residual
            and self.weights.shape == other.weights.shape
            and bool(np.all(self.weights == other.weights))
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class FunctionClass:
    """Finitely many bounded functions on a finite domain.

    ``values[i, x]`` is the value of function ``i`` at point ``x``.  The
    bounds ``kappa_minus``/``kappa_plus`` are the tight min/max over all
    entries.
    """

    values: np.ndarray
    exact: bool = True

    def __post_init__(self):
        v = np.asarray(self.values, dtype=object if self.exact else np.float64)
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise ValueError("values must be a nonempty (functions x points) matrix")
        if self.exact:
            v = np.vectorize(as_fraction, otypes=[object])(v)
        else:
            v = v.copy()
        object.__setattr__(self, "values", _frozen(v))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], exact: bool = True) -> "FunctionClass":
        if exact:
            arr = np.array([[as_fraction(x) for x in r] for r in rows], dtype=object)
        else:
            arr = np.array(rows, dtype=np.float64)
        return cls(arr, exact=exact)

    @property
    def n_functions(self) -> int:
        return self.values.shape[0]

    @property
    def size(self) -> int:
        return self.values.shape[1]

    @cached_property
    def kappa_minus(self) -> Number:
        return min(self.values.ravel())

    @cached_property
    def kappa_plus(self) -> Number:
        return max(self.values.ravel())

    @cached_property
    def integer_values(self) -> tuple[np.ndarray, int]:
        """Values as ``(ints, denominator)``; exact mode only."""
        if not self.exact:
            raise TypeError("integer values need an exact class")
        return _integer_scale(self.values)

    def subclass(self, indices: Sequence[int]) -> "FunctionClass":
        return FunctionClass(self.values[list(indices)], exact=self.exact)

    def check_index(self, i: int) -> int:
        if not 0 <= i < self.n_functions:
            raise IndexError(f"function index {i} out of range 0..{self.n_functions - 1}")
        return int(i)

    def __eq__(self, other):
        if not isinstance(other, FunctionClass):
            return NotImplemented
        return (
            self.exact == other.exact
            and self.values.shape == other.values.shape
            and bool(np.all(self.values == other.values))
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class SetFamily:
    """Subsets of the domain, stored as rows of a boolean matrix."""

    masks: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.masks, dtype=bool)
        if m.ndim != 2 or m.shape[1] < 1:
            raise ValueError("masks must be a (sets x points) boolean matrix")
        object.__setattr__(self, "masks", _frozen(m.copy()))

    @classmethod
    def from_sets(cls, sets: Iterable[Iterable[int]], size: int) -> "SetFamily":
        rows = [_to_mask(s, size) for s in sets]
        if not rows:
            return cls(np.zeros((0, size), dtype=bool))
        return cls(np.stack(rows))

    @property
    def size(self) -> int:
        return self.masks.shape[1]

    def __len__(self) -> int:
        return self.masks.shape[0]

    def sets(self) -> list[frozenset[int]]:
        return [frozenset(np.flatnonzero(row).tolist()) for row in self.masks]

    def to_function_class(self) -> FunctionClass:
        ones = np.where(self.masks, Fraction(1), Fraction(0)).astype(object)
        return FunctionClass(ones)

    def __eq__(self, other):
        if not isinstance(other, SetFamily):
            return NotImplemented
        return self.masks.shape == other.masks.shape and bool(np.all(self.masks == other.masks))

    __hash__ = None


def _canonical_labels(raw: Sequence) -> tuple[int, ...]:
    ids: dict = {}
    return tuple(ids.setdefault(r, len(ids)) for r in raw)


@dataclass(frozen=True)
class Partition:
    """A finite partition as a point labeling.

    Labels are canonicalized on construction (blocks numbered by first
    occurrence), so two partitions compare equal iff they have the same
    blocks.
    """

    labels: tuple[int, ...]

    def __post_init__(self):
        if len(self.labels) < 1:
            raise ValueError("partition of an empty domain")
        object.__setattr__(self, "labels", _canonical_labels(self.labels))

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], size: int) -> "Partition":
        lab = [-1] * size
        for b, block in enumerate(blocks):
            for x in block:
                if lab[x] != -1:
                    raise ValueError(f"point {x} appears in two blocks")
                lab[x] = b
        if -1 in lab:
            raise ValueError(f"point {lab.index(-1)} is in no block")
        return cls(tuple(lab))

    @classmethod
    def trivial(cls, size: int) -> "Partition":
        return cls((0,) * size)

    @classmethod
    def discrete(cls, size: int) -> "Partition":
        return cls(tuple(range(size)))

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def k(self) -> int:
        return max(self.labels) + 1

    def blocks(self) -> list[np.ndarray]:
        lab = np.asarray(self.labels)
        return [np.flatnonzero(lab == b) for b in range(self.k)]

    def block_masks(self) -> np.ndarray:
        lab = np.asarray(self.labels)
        return lab[None, :] == np.arange(self.k)[:, None]

    def is_finer_than(self, other: "Partition") -> bool:
        """``self`` refines ``other``: every block of ``self`` sits in one block of ``other``."""
        if self.size != other.size:
            raise DomainMismatch("partitions on different domains")
        seen: dict[int, int] = {}
        for a, b in zip(self.labels, other.labels):
            if seen.setdefault(a, b) != b:
                return False
        return True


def refine(p1: Partition, p2: Partition) -> Partition:
    """Common refinement of two partitions."""
    if p1.size != p2.size:
        raise DomainMismatch(f"partitions on domains of size {p1.size} and {p2.size}")
    return Partition(tuple(zip(p1.labels, p2.labels)))


def partition_generated_by(sets: SetFamily) -> Partition:
    """Coarsest partition under which every member of ``sets`` is a union of blocks.

    Two points share a block iff they belong to exactly the same members.
    """
    if len(sets) == 0:
        raise ValueError("empty set family")
    return Partition(tuple(map(bytes, np.packbits(sets.masks.T, axis=1))))


@dataclass(frozen=True)
class Levels:
    alpha: Fraction
    beta: Fraction

    def __post_init__(self):
        a, b = as_fraction(self.alpha), as_fraction(self.beta)
        if not a < b:
            raise ValueError(f"levels need alpha < beta, got ({a}, {b})")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @property
    def gap(self) -> Fraction:
        return self.beta - self.alpha

    def below(self, values: np.ndarray) -> np.ndarray:
        return np.asarray(values < self.alpha, dtype=bool)

    def above(self, values: np.ndarray) -> np.ndarray:
        return np.asarray(values > self.beta, dtype=bool)
