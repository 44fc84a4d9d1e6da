"""A class of VC dimension two whose bracketing numbers grow as fast as desired.

The domain is a countable union of consecutive blocks; block ``j`` carries a
copy of the lines of the projective plane of prime order ``q_j``.  Only the
first ``truncation`` blocks are ever materialized.  Everything else (block
sizes ``m_j``, the dyadic weight schedule, the lower bound on the bracketing
number) is computed with exact big-integer arithmetic.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .core import FiniteDomain, Measure, SetFamily, as_fraction
from .primes import check_prime, next_prime
from .projective import build_plane

MAX_MATERIALIZED = 10**5
THIRD = Fraction(1, 3)


class SizeCapExceeded(ValueError):
    pass


def plane_size(q: int) -> int:
    return q * q + q + 1


@dataclass(frozen=True)
class BlockStructure:
    """Consecutive blocks of sizes ``q_j**2 + q_j + 1`` for increasing primes."""

    primes: tuple[int, ...]
    truncation: int | None = None

    def __post_init__(self):
        primes = tuple(int(q) for q in self.primes)
        object.__setattr__(self, "primes", primes)
        if not primes:
            raise ValueError("need at least one block")
        if any(b <= a for a, b in zip(primes, primes[1:])):
            raise ValueError("block primes must be strictly increasing")
        bad = [q for q in primes if not check_prime(q).prime]
        if bad:
            raise ValueError(f"not prime: {bad[0]}")
        t = len(primes) if self.truncation is None else int(self.truncation)
        if not 0 <= t <= len(primes):
            raise ValueError("truncation out of range")
        object.__setattr__(self, "truncation", t)

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return tuple(plane_size(q) for q in self.primes)

    @property
    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for m in self.block_sizes:
            out.append(acc)
            acc += m
        return tuple(out)

    @property
    def materialized_size(self) -> int:
        return sum(self.block_sizes[: self.truncation])

    def block_of(self, point: int) -> int:
        for j, (off, m) in enumerate(zip(self.offsets, self.block_sizes)):
            if off <= point < off + m:
                return j
        raise IndexError(point)

    def to_dict(self) -> dict:
        return {
            "primes": [str(q) for q in self.primes],
            "block_sizes": [str(m) for m in self.block_sizes],
            "offsets": [str(o) for o in self.offsets],
            "truncation": self.truncation,
        }


def build_block_class(structure: BlockStructure) -> tuple[FiniteDomain, SetFamily]:
    """Disjoint union of plane line families on the materialized blocks."""
    t = structure.truncation
    if t < 1:
        raise ValueError("nothing materialized: truncation is 0")
    size = structure.materialized_size
    if size > MAX_MATERIALIZED:
        raise SizeCapExceeded(f"{size} points exceed the cap of {MAX_MATERIALIZED}")
    masks = np.zeros((size, size), dtype=bool)  # one line per point in each block
    labels = []
    for j in range(t):
        off, m = structure.offsets[j], structure.block_sizes[j]
        inc = build_plane(structure.primes[j]).incidence
        masks[off : off + m, off : off + m] = inc
        labels += [f"b{j}:{x}" for x in range(m)]
    return FiniteDomain(size, tuple(labels)), SetFamily(masks)


def block_measure(structure: BlockStructure, p: Sequence, residual=None) -> Measure:
    """Weight ``p_j / m_j`` on every point of materialized block ``j``.

    ``residual`` is the mass of the blocks that are not materialized; by
    default it is whatever ``p`` leaves over.
    """
    t = structure.truncation
    p = [as_fraction(v) for v in p]
    if len(p) != t:
        raise ValueError(f"expected {t} block weights, got {len(p)}")
    if any(v < 0 for v in p):
        raise ValueError("negative block weight")
    total = sum(p, Fraction(0))
    if total > 1:
        raise ValueError(f"block weights sum to {total} > 1")
    res = 1 - total if residual is None else as_fraction(residual)
    w = []
    for pj, m in zip(p, structure.block_sizes[:t]):
        w += [pj / m] * m
    return Measure(np.array(w, dtype=object), residual=res)


# -- n(eps) specifications -------------------------------------------------


class NSpec:
    """A nonincreasing, right-continuous target ``n(eps)`` on ``(0, 1/3)``."""

    name = "nspec"

    def __call__(self, eps: Fraction) -> int:
        raise NotImplementedError

    def sup_on(self, lo: Fraction, hi: Fraction) -> int:
        """Supremum over ``(lo, hi]``: the right limit at ``lo``."""
        return self(lo)

    def to_dict(self) -> dict:
        return {"kind": self.name}


class ConstantN(NSpec):
    name = "constant"

    def __init__(self, n: int):
        self.n = int(n)

    def __call__(self, eps):
        return self.n

    def to_dict(self):
        return {"kind": self.name, "n": self.n}


class CeilInverse(NSpec):
    """``n(eps) = ceil(1/eps)``."""

    name = "ceil-inv"

    def __call__(self, eps):
        eps = as_fraction(eps)
        if eps <= 0:
            raise ValueError("ceil(1/eps) needs eps > 0")
        return math.ceil(1 / eps)


class StepFunction(NSpec):
    """Breakpoints ``(eps_i, n_i)``: ``n = n_i`` on ``[eps_i, eps_{i+1})``.

    Below the first breakpoint the function is undefined.
    """

    name = "step"

    def __init__(self, breakpoints: Iterable[tuple]):
        pts = sorted((as_fraction(e), int(n)) for e, n in breakpoints)
        if not pts:
            raise ValueError("need at least one breakpoint")
        for (e0, n0), (e1, n1) in zip(pts, pts[1:]):
            if e0 == e1:
                raise ValueError(f"duplicate breakpoint at {e0}")
            if n1 > n0:
                raise ValueError(f"n_spec increases from {n0} to {n1} at eps={e1}")
        self.points = tuple(pts)

    def __call__(self, eps):
        eps = as_fraction(eps)
        if eps < self.points[0][0]:
            raise ValueError(f"n_spec undefined below {self.points[0][0]}")
        n = self.points[0][1]
        for e, v in self.points:
            if e > eps:
                break
            n = v
        return n

    def to_dict(self):
        return {"kind": self.name, "breakpoints": [[str(e), n] for e, n in self.points]}


def parse_nspec(text: str) -> NSpec:
    """``ceil-inv``, ``const:N`` or ``step:e1=n1,e2=n2,...``."""
    if text == "ceil-inv":
        return CeilInverse()
    kind, _, rest = text.partition(":")
    if kind == "const":
        return ConstantN(int(rest))
    if kind == "step":
        pairs = [item.split("=") for item in rest.split(",") if item]
        return StepFunction((e, int(n)) for e, n in pairs)
    raise ValueError(f"unknown n_spec {text!r}")


# -- schedule ---------------------------------------------------------------


def band_of(eps) -> int:
    """``floor(log2(2 / (3 eps)))``, exact."""
    eps = as_fraction(eps)
    if not 0 < eps < THIRD:
        raise ValueError("eps must lie in (0, 1/3)")
    r = Fraction(2, 3) / eps
    return (r.numerator // r.denominator).bit_length() - 1


def band_interval(k: int) -> tuple[Fraction, Fraction]:
    """The eps values with ``band_of(eps) == k``, as ``(lo, hi]``."""
    return Fraction(2, 3) / 2 ** (k + 1), Fraction(2, 3) / 2**k


def least_plane_order(threshold: int) -> int:
    """Least integer ``q >= 2`` with ``q**2 + q + 1 >= threshold``."""
    q = max(2, math.isqrt(threshold) - 1)
    while plane_size(q) < threshold:
        q += 1
    while q > 2 and plane_size(q - 1) >= threshold:
        q -= 1
    return q


@dataclass(frozen=True)
class Band:
    k: int
    lo: Fraction
    hi: Fraction
    n_star: int
    threshold: int
    q: int
    proven_prime: bool

    @property
    def m(self) -> int:
        return plane_size(self.q)

    @property
    def p(self) -> Fraction:
        return Fraction(1, 2**self.k)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "eps_band": [str(self.lo), str(self.hi)],
            "n_star": self.n_star,
            "threshold_exponent": 4 * self.n_star + 6,
            "q": str(self.q),
            "m": str(self.m),
            "p": str(self.p),
            "prime_certificate": "deterministic" if self.proven_prime else "bpsw",
        }


@dataclass(frozen=True)
class Schedule:
    """Blocks ``j = 1..K`` with weights ``p_j = 2**-j``.

    Only the scheduled blocks are kept: a block with zero weight contributes
    nothing to the measure or to the bound, so ``j(k) = k`` here.
    """

    n_spec: NSpec
    bands: tuple[Band, ...]

    @property
    def K(self) -> int:
        return len(self.bands)

    @property
    def j_of_k(self) -> tuple[int, ...]:
        return tuple(range(1, self.K + 1))

    @property
    def p(self) -> tuple[Fraction, ...]:
        return tuple(b.p for b in self.bands)

    @property
    def residual(self) -> Fraction:
        return Fraction(1, 2**self.K)

    @property
    def structure(self) -> BlockStructure:
        return BlockStructure(tuple(b.q for b in self.bands), truncation=0)

    def to_dict(self) -> dict:
        return {
            "n_spec": self.n_spec.to_dict(),
            "K": self.K,
            "j_of_k": list(self.j_of_k),
            "residual": str(self.residual),
            "bands": [b.to_dict() for b in self.bands],
        }


def choose_subsequence(n_spec: NSpec, K: int) -> Schedule:
    """Pick block ``k`` with ``m_k >= 3**(4 n* + 6)`` on the ``k``-th dyadic band.

    ``n*`` is the supremum of ``n_spec`` over the band.  Primes are forced to
    increase so that the blocks form a valid structure.
    """
    if K < 1:
        raise ValueError("need at least one band")
    bands: list[Band] = []
    prev_q, prev_n = 1, None
    for k in range(1, K + 1):
        lo, hi = band_interval(k)
        n_star = int(n_spec.sup_on(lo, hi))
        if n_star < 0:
            raise ValueError(f"n_spec is negative on band {k}")
        if prev_n is not None and n_star < prev_n:
            raise ValueError("n_spec is not nonincreasing in eps")
        threshold = 3 ** (4 * n_star + 6)
        q, proven = next_prime(max(least_plane_order(threshold), prev_q + 1))
        bands.append(Band(k, lo, hi, n_star, threshold, q, proven))
        prev_q, prev_n = q, n_star
    return Schedule(n_spec, tuple(bands))


# -- the lower bound ----------------------------------------------------------


def _floor_log(r: Fraction, base: int) -> int:
    """``floor(log_base r)`` for rational ``r > 0``, exact."""
    if r >= 1:
        n = r.numerator // r.denominator
        e = max(0, n.bit_length() // base.bit_length() - 1)
        while base ** (e + 1) <= n:
            e += 1
        return e
    # r < 1: with e the least exponent such that base**e >= 1/r, the floor is -e
    s = 1 / r
    e = 0
    while base**e * s.denominator < s.numerator:
        e += 1
    return -e


def bound_term(m: int, p: Fraction, eps: Fraction) -> int | None:
    """``floor(log3(m)/4 + log3(1 - min(eps/p, 1))/2)``; ``None`` for minus infinity.

    Equivalently the largest ``N`` with ``81**N <= m * x**2``, ``x = 1 - eps/p``.
    """
    if p <= eps:
        return None
    x = 1 - eps / p
    return _floor_log(m * x * x, 81)


@dataclass(frozen=True)
class BoundDetail:
    value: int
    raw: int | None
    argmax_k: int | None
    terms: tuple


def bound_detail(schedule: Schedule, eps) -> BoundDetail:
    eps = as_fraction(eps)
    if not 0 < eps < THIRD:
        raise ValueError("eps must lie in (0, 1/3)")
    terms = tuple(bound_term(b.m, b.p, eps) for b in schedule.bands)
    live = [(t, b.k) for t, b in zip(terms, schedule.bands) if t is not None]
    if not live:
        return BoundDetail(0, None, None, terms)
    raw, k = max(live, key=lambda tk: (tk[0], -tk[1]))
    return BoundDetail(max(0, raw), raw, k, terms)


def bracketing_lower_bound(schedule: Schedule, eps) -> int:
    """Lower bound on the bracketing number at ``eps`` from the block schedule.

    The supremum runs over scheduled blocks with ``p_j > eps``; the result is
    clipped at 0 (use :func:`bound_detail` for the raw supremum).
    """
    return bound_detail(schedule, eps).value


# -- verification -------------------------------------------------------------


def parse_grid(text: str) -> list[Fraction]:
    """``start:stop:step`` (inclusive, decimal literals read exactly) or a comma list."""
    if ":" in text:
        a, b, s = (Fraction(t) for t in text.split(":"))
        if s <= 0:
            raise ValueError("grid step must be positive")
        n = int((b - a) / s)
        return [a + i * s for i in range(n + 1)]
    return [Fraction(t) for t in text.split(",") if t]


@dataclass(frozen=True)
class BlowupPoint:
    eps: Fraction
    n: int
    bound: int
    raw: int | None
    chain_slack: int | None

    @property
    def margin(self) -> int:
        return self.bound - self.n

    @property
    def passed(self) -> bool:
        return self.bound >= self.n

    def to_dict(self) -> dict:
        return {
            "eps": str(self.eps),
            "n_spec": self.n,
            "bound": self.bound,
            "raw": self.raw,
            "margin": self.margin,
            "chain_slack": self.chain_slack,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class BlowupReport:
    schedule: Schedule
    points: tuple[BlowupPoint, ...] = field(default=())

    @property
    def all_pass(self) -> bool:
        return all(pt.passed for pt in self.points)

    @property
    def failures(self) -> list[BlowupPoint]:
        return [pt for pt in self.points if not pt.passed]

    def to_dict(self) -> dict:
        return {
            "all_pass": self.all_pass,
            "schedule": self.schedule.to_dict(),
            "points": [pt.to_dict() for pt in self.points],
            "lower_bound_kind": "formula",
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["eps", "n_spec", "bound", "margin"])
        for pt in self.points:
            w.writerow([str(pt.eps), pt.n, pt.bound, pt.margin])
        return buf.getvalue()


def verify_blowup(n_spec: NSpec, eps_grid: Sequence) -> BlowupReport:
    """Check ``bracketing_lower_bound(eps) >= n_spec(eps)`` on every grid point.

    ``chain_slack`` is the term of block ``J(eps)`` minus ``n(eps) + 1``; it is
    recorded, not asserted.
    """
    grid = [e if isinstance(e, Fraction) else Fraction(e) for e in eps_grid]
    grid = [e for e in grid if 0 < e < THIRD]
    if not grid:
        raise ValueError("grid has no point in (0, 1/3)")
    K = max(band_of(e) for e in grid)
    schedule = choose_subsequence(n_spec, K)
    points = []
    for e in grid:
        d = bound_detail(schedule, e)
        n = int(n_spec(e))
        own = d.terms[band_of(e) - 1]
        slack = None if own is None else own - (n + 1)
        points.append(BlowupPoint(e, n, d.value, d.raw, slack))
    return BlowupReport(schedule, tuple(points))
