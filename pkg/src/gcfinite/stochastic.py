"""Sampling, empirical deviations and the finite-depth Marczewski measure.

All randomness comes from numpy's PCG64 generator seeded with a plain
integer, so a run is reproducible from ``(seed, measure, class, sizes)``.
Exact measures are sampled by integer inverse CDF: a uniform integer below
the common denominator is located in the cumulative integer weight table.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components

from .core import FunctionClass, Measure, _integer_scale, _to_mask, as_fraction
from .covers import Bracket, CoverResult

MAX_PAIRS = 20
GC_BUDGET = 10**8
_INT64_MAX = np.iinfo(np.int64).max


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed)))


# -- Marczewski measure -----------------------------------------------------


class EmptyCell(ValueError):
    def __init__(self, pattern: tuple[int, ...]):
        super().__init__(f"no point realizes the pattern {''.join(map(str, pattern))}")
        self.pattern = pattern


def marczewski_measure(size: int, pairs: Sequence[tuple], p) -> Measure:
    """Measure under which ``A_1..A_n`` are independent with probability ``p``.

    ``pairs`` holds disjoint ``(A_i, B_i)``; every cell
    ``A_F & B_{not F}`` must be nonempty.  Cell ``F`` puts mass
    ``p**|F| (1-p)**(n-|F|)`` on its lowest-index point, so ``mu(A_i) = p``
    and ``mu(B_i) = 1 - p``.
    """
    p = as_fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    n = len(pairs)
    if n > MAX_PAIRS:
        raise ValueError(f"at most {MAX_PAIRS} pairs")
    A = np.array([_to_mask(a, size) for a, _ in pairs], dtype=bool).reshape(n, size)
    B = np.array([_to_mask(b, size) for _, b in pairs], dtype=bool).reshape(n, size)
    overlap = np.flatnonzero((A & B).any(axis=1))
    if overlap.size:
        raise ValueError(f"A_{overlap[0]} and B_{overlap[0]} intersect")
    in_cell = (A | B).all(axis=0)
    codes = (A.astype(np.int64) << np.arange(n, dtype=np.int64)[:, None]).sum(axis=0)
    rep = np.full(1 << n, -1, dtype=np.int64)
    pts = np.flatnonzero(in_cell)
    found, first = np.unique(codes[pts], return_index=True)
    rep[found] = pts[first]  # lowest-index point of each cell
    missing = np.flatnonzero(rep < 0)
    if missing.size:
        c = int(missing[0])
        raise EmptyCell(tuple((c >> i) & 1 for i in range(n)))
    w = [Fraction(0)] * size
    ones = [bin(c).count("1") for c in range(1 << n)]
    powers = [p**k * (1 - p) ** (n - k) for k in range(n + 1)]
    for c in range(1 << n):
        w[rep[c]] += powers[ones[c]]
    return Measure(np.array(w, dtype=object))


@dataclass(frozen=True)
class IndependenceCheck:
    n: int
    p: Fraction
    subsets_checked: int
    violations: tuple

    @property
    def exact(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "p": str(self.p),
            "subsets_checked": self.subsets_checked,
            "violations": [list(v) for v in self.violations],
            "exact": self.exact,
        }


def check_independence(mu: Measure, pairs: Sequence[tuple], p, sample: int | None = None, seed: int = 0):
    """Compare ``mu(A_S)`` with ``p**|S|`` and ``mu(B_i)`` with ``1 - p``.

    Every subset ``S`` is checked when ``sample`` is None, otherwise ``sample``
    random subsets.  Violations are ``(kind, indices, value)`` triples.
    """
    p = as_fraction(p)
    n = len(pairs)
    A = [_to_mask(a, mu.size) for a, _ in pairs]
    bad = []
    for i, (_, b) in enumerate(pairs):
        if mu.mass(b) != 1 - p:
            bad.append(("B", (i,), str(mu.mass(b))))
    if sample is None:
        subsets = range(1 << n)
    else:
        subsets = rng_for(seed).integers(0, 1 << n, size=sample).tolist()
    count = 0
    for code in subsets:
        idx = tuple(i for i in range(n) if code >> i & 1)
        inter = np.ones(mu.size, dtype=bool)
        for i in idx:
            inter &= A[i]
        if mu.mass(inter) != p ** len(idx):
            bad.append(("A", idx, str(mu.mass(inter))))
        count += 1
    return IndependenceCheck(n, p, count, tuple(bad))


def coordinate_pairs(n: int) -> tuple[int, list[tuple[np.ndarray, np.ndarray]]]:
    """The cube ``{0,1}^n`` with ``A_i = {bit i set}``, ``B_i`` its complement."""
    size = 1 << n
    x = np.arange(size)
    pairs = []
    for i in range(n):
        a = (x >> i) & 1 == 1
        pairs.append((a, ~a))
    return size, pairs


# -- sampling and deviations ------------------------------------------------


def _cdf_table(mu: Measure):
    if mu.exact:
        ints, den = mu.integer_weights
        if den <= _INT64_MAX and ints.dtype == np.int64:
            return np.cumsum(ints), den
        w = np.array([float(v) for v in mu.weights])
    else:
        w = np.asarray(mu.weights, dtype=np.float64)
    return np.cumsum(w) / w.sum(), None


def _draw(cum: np.ndarray, den: int | None, rng: np.random.Generator, n: int) -> np.ndarray:
    if den is not None:
        u = rng.integers(0, den, size=n, dtype=np.int64)
    else:
        u = rng.random(n)
    return np.searchsorted(cum, u, side="right")


def sample_iid(mu: Measure, n: int, seed: int) -> np.ndarray:
    """``n`` i.i.d. points from ``mu`` (PCG64, inverse CDF).

    Mass declared as ``residual`` is not sampled: draws are conditioned on
    the materialized points.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    cum, den = _cdf_table(mu)
    return _draw(cum, den, rng_for(seed), n)


def _means(cls: FunctionClass, mu: Measure) -> list:
    return [mu.integrate(cls.values[i]) for i in range(cls.n_functions)]


def empirical_means(cls: FunctionClass, sample: np.ndarray) -> list:
    sample = np.asarray(sample)
    if sample.size == 0:
        raise ValueError("empty sample")
    counts = np.bincount(sample, minlength=cls.size)
    if cls.exact:
        ints, den = cls.integer_values
        tot = ints.astype(object) @ counts.astype(object)
        return [Fraction(int(t), den * sample.size) for t in tot]
    return list(cls.values @ counts / sample.size)


def empirical_sup_deviation(cls: FunctionClass, mu: Measure, sample: np.ndarray):
    """``max_f |(1/n) sum_k f(X_k) - mu(f)|`` over the finite class."""
    emp = empirical_means(cls, sample)
    return max(abs(e - m) for e, m in zip(emp, _means(cls, mu)))


class UncoveredFunction(ValueError):
    pass


def blum_dehardt_bound(
    brackets: CoverResult | Sequence[Bracket],
    mu: Measure,
    sample: np.ndarray,
    cls: FunctionClass | None = None,
    assignment: Sequence[int] | None = None,
):
    """``max_i {mu_n(g_i) - mu(f_i)}  v  max_i {mu(g_i) - mu_n(f_i)}`` over brackets ``[f_i, g_i]``.

    With ``cls`` given, every function must lie (on the support of ``mu``)
    in its assigned bracket, and the envelope is checked to dominate the
    empirical sup-deviation.
    """
    if isinstance(brackets, CoverResult):
        assignment = brackets.assignment if assignment is None else assignment
        brackets = brackets.witnesses
    brackets = list(brackets)
    if cls is not None:
        if assignment is None or len(assignment) != cls.n_functions:
            raise UncoveredFunction("assignment must map every function to a bracket")
        for f, i in enumerate(assignment):
            if not brackets[i].contains(cls.values[f], mu.support):
                raise UncoveredFunction(f"function {f} is not inside bracket {i}")
    lower = FunctionClass(np.array([b.lower for b in brackets], dtype=object))
    upper = FunctionClass(np.array([b.upper for b in brackets], dtype=object))
    emp_lo, emp_hi = empirical_means(lower, sample), empirical_means(upper, sample)
    mu_lo, mu_hi = _means(lower, mu), _means(upper, mu)
    env = max(max(eh - ml for eh, ml in zip(emp_hi, mu_lo)), max(mh - el for mh, el in zip(mu_hi, emp_lo)))
    if cls is not None:
        gamma = empirical_sup_deviation(cls, mu, sample)
        assert env >= gamma, "bracket envelope below the empirical deviation"
    return env


# -- runs -------------------------------------------------------------------


@dataclass(frozen=True)
class EmpiricalRun:
    seed: int
    sample_sizes: tuple[int, ...]
    samples: np.ndarray = field(repr=False)
    deviations: tuple
    envelope: tuple | None = None

    def __post_init__(self):
        assert all(d >= 0 for d in self.deviations)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "sample_sizes": list(self.sample_sizes),
            "samples": np.asarray(self.samples).tolist(),
            "deviations": [str(d) for d in self.deviations],
            "envelope": None if self.envelope is None else [str(e) for e in self.envelope],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "gamma_n", "envelope"])
        env = self.envelope or (None,) * len(self.sample_sizes)
        for n, d, e in zip(self.sample_sizes, self.deviations, env):
            w.writerow([n, str(d), "" if e is None else str(e)])
        return buf.getvalue()


def _prefix_deviations(cls, mu, path, sizes, brackets=None):
    devs, env = [], []
    for n in sizes:
        devs.append(empirical_sup_deviation(cls, mu, path[:n]))
        if brackets is not None:
            env.append(blum_dehardt_bound(brackets, mu, path[:n], cls))
    return tuple(devs), (tuple(env) if brackets is not None else None)


def iid_run(
    cls: FunctionClass,
    mu: Measure,
    sample_sizes: Sequence[int],
    seed: int,
    brackets: CoverResult | None = None,
) -> EmpiricalRun:
    """Draw ``max(sample_sizes)`` points once; report ``Gamma_n`` on each prefix."""
    sizes = tuple(int(n) for n in sample_sizes)
    path = sample_iid(mu, max(sizes), seed)
    devs, env = _prefix_deviations(cls, mu, path, sizes, brackets)
    return EmpiricalRun(int(seed), sizes, path, devs, env)


@dataclass(frozen=True)
class ConvergenceStudy:
    n: int
    runs: tuple[EmpiricalRun, ...]

    @property
    def median(self) -> Fraction:
        d = sorted(r.deviations[0] for r in self.runs)
        h = len(d) // 2
        return d[h] if len(d) % 2 else (d[h - 1] + d[h]) / 2

    @property
    def envelope_dominates(self) -> bool:
        return all(r.envelope is None or r.envelope[0] >= r.deviations[0] for r in self.runs)

    def to_dict(self) -> dict:
        runs = [{k: v for k, v in r.to_dict().items() if k != "samples"} for r in self.runs]
        return {"n": self.n, "median_gamma": str(self.median), "envelope_dominates": self.envelope_dominates, "runs": runs}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["seed", "n", "gamma_n", "envelope"])
        for r in self.runs:
            w.writerow([r.seed, self.n, str(r.deviations[0]), "" if r.envelope is None else str(r.envelope[0])])
        return buf.getvalue()


def convergence_study(cls, mu, n: int, seeds: Sequence[int], brackets: CoverResult | None = None):
    """One i.i.d. run of size ``n`` per seed, sorted by seed."""
    runs = sorted((iid_run(cls, mu, [n], s, brackets) for s in seeds), key=lambda r: r.seed)
    return ConvergenceStudy(int(n), tuple(runs))


class NotStationary(ValueError):
    pass


class Reducible(ValueError):
    pass


def stationary_demo(
    kernel: Sequence[Sequence],
    pi0: Sequence,
    cls: FunctionClass,
    n: int | Sequence[int],
    seed: int,
) -> EmpiricalRun:
    """Run the chain started from its stationary law; report time-average deviations.

    ``pi0 @ kernel == pi0`` is checked exactly and the kernel must be
    irreducible, so the time averages converge to ``pi0(f)``.
    """
    K = np.array([[as_fraction(v) for v in row] for row in kernel], dtype=object)
    pi = np.array([as_fraction(v) for v in pi0], dtype=object)
    s = pi.size
    if K.shape != (s, s):
        raise ValueError("kernel must be square and match pi0")
    if any(v < 0 for v in K.ravel()) or any(sum(row, Fraction(0)) != 1 for row in K):
        raise ValueError("kernel rows must be probability vectors")
    if list(pi @ K) != list(pi):
        raise NotStationary("pi0 is not stationary for the kernel")
    n_comp, _ = connected_components(K.astype(bool).astype(np.int8), directed=True, connection="strong")
    if n_comp != 1:
        raise Reducible("kernel is reducible")
    mu = Measure(pi)
    sizes = (int(n),) if np.isscalar(n) else tuple(int(v) for v in n)
    total = max(sizes)
    rng = rng_for(seed)
    cum0, den0 = _cdf_table(mu)
    ints, den = _integer_scale(K)
    if den <= _INT64_MAX and ints.dtype == np.int64:
        cums, u = np.cumsum(ints, axis=1), rng.integers(0, den, size=total, dtype=np.int64)
    else:
        cums, u = np.cumsum(K.astype(np.float64), axis=1), rng.random(total)
    path = np.empty(total, dtype=np.int64)
    path[0] = _draw(cum0, den0, rng, 1)[0]
    for t in range(1, total):
        path[t] = np.searchsorted(cums[path[t - 1]], u[t], side="right")
    devs, _ = _prefix_deviations(cls, mu, path, sizes)
    return EmpiricalRun(int(seed), sizes, path, devs)


# -- failure of uniform convergence for a growing class ----------------------


@dataclass(frozen=True)
class GCFailure:
    d: int
    n: int
    p: Fraction
    seed: int
    gamma: Fraction
    event: bool
    analytic_probability: float

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "n": self.n,
            "p": str(self.p),
            "seed": self.seed,
            "gamma_n": str(self.gamma),
            "event": self.event,
            "analytic_probability": self.analytic_probability,
        }


def all_ones_probability(d: int, n: int, p) -> float:
    """``1 - (1 - p**n)**d``, the chance that some coordinate is 1 in all ``n`` draws."""
    p = as_fraction(p)
    return -math.expm1(d * math.log1p(-float(p**n))) if p < 1 else 1.0


def gc_failure_demo(d: int, n: int, p, seed: int) -> GCFailure:
    """``n`` draws of ``d`` independent Bernoulli(``p``) coordinates.

    The class is the ``d`` coordinate indicators, each with mean ``p``.  The
    ``2**d`` domain is never built; only the ``n x d`` bit matrix is drawn,
    column block by column block.
    """
    p = as_fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    if d < 1 or n < 1:
        raise ValueError("need d, n >= 1")
    if d * n > GC_BUDGET:
        raise ValueError(f"d*n = {d * n} exceeds the budget of {GC_BUDGET}")
    rng = rng_for(seed)
    chunk = max(1, 10**7 // n)
    counts = np.empty(d, dtype=np.int64)
    for start in range(0, d, chunk):
        w = min(chunk, d - start)
        bits = rng.integers(0, p.denominator, size=(n, w), dtype=np.int64) < p.numerator
        counts[start : start + w] = bits.sum(axis=0)
    lo, hi = int(counts.min()), int(counts.max())
    gamma = max(abs(Fraction(lo, n) - p), abs(Fraction(hi, n) - p))
    return GCFailure(d, n, p, int(seed), gamma, hi == n, all_ones_probability(d, n, p))


@dataclass(frozen=True)
class GCFailureStudy:
    runs: tuple[GCFailure, ...]

    @property
    def frequency(self) -> float:
        return sum(r.event for r in self.runs) / len(self.runs)

    def to_dict(self) -> dict:
        r0 = self.runs[0]
        return {
            "d": r0.d,
            "n": r0.n,
            "p": str(r0.p),
            "seeds": [r.seed for r in self.runs],
            "event_frequency": self.frequency,
            "analytic_probability": r0.analytic_probability,
            "runs": [r.to_dict() for r in self.runs],
        }


def gc_failure_study(d: int, n: int, p, seeds: Sequence[int]) -> GCFailureStudy:
    runs = sorted((gc_failure_demo(d, n, p, s) for s in seeds), key=lambda r: r.seed)
    return GCFailureStudy(tuple(runs))
