"""Covering, packing and bracketing numbers in L1(mu) on a finite domain.

Exact mode works on integer-scaled copies of the values and weights, so every
comparison against ``eps`` is an exact integer comparison.

Balls are closed (``d(f, c) <= eps``) and a set is ``eps``-separated when all
pairwise distances are ``>= eps``.  Covering centers are class members
(``centers="internal"``) unless ``centers="external"`` is requested, in
which case any function on the domain may serve as a center.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Sequence

import numpy as np

from . import setcover
from .core import (
    DomainMismatch,
    FunctionClass,
    Measure,
    Partition,
    SetFamily,
    _to_mask,
    as_fraction,
    partition_generated_by,
)

EXACT_COVER_CAP = 24
EXACT_BRACKET_CAP = 20
EXACT_EXTERNAL_CAP = 12
MAX_DFS_NODES = 5_000_000

Certificate = Literal["exact", "upper_bound", "lower_bound"]


class CapExceeded(ValueError):
    pass


class UndecidedCenter(RuntimeError):
    """The LP certificates could not separate a 1-center radius from eps."""


@dataclass(frozen=True, eq=False)
class Bracket:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=object)
        hi = np.asarray(self.upper, dtype=object)
        if lo.shape != hi.shape:
            raise DomainMismatch("bracket endpoints of different length")
        if any(a > b for a, b in zip(lo, hi)):
            raise ValueError("bracket lower endpoint exceeds the upper one")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    def width(self, mu: Measure):
        return mu.integrate(self.upper - self.lower)

    def contains(self, values, support: np.ndarray | None = None) -> bool:
        """Pointwise membership, optionally only on ``support``."""
        values = np.asarray(values, dtype=object)
        ok = (self.lower <= values) & (values <= self.upper)
        if support is not None:
            ok = ok | ~support
        return bool(np.all(ok))

    def to_dict(self) -> dict:
        return {"lower": [str(v) for v in self.lower], "upper": [str(v) for v in self.upper]}


@dataclass(frozen=True)
class CoverResult:
    kind: str
    count: int
    certified: Certificate
    epsilon: Fraction
    measure_ref: str
    witnesses: tuple = field(default=(), repr=False)
    assignment: tuple[int, ...] = ()
    lower_bound: int | None = None

    def to_dict(self) -> dict:
        def enc(w):
            if isinstance(w, Bracket):
                return w.to_dict()
            if isinstance(w, np.ndarray):
                return [str(v) for v in w]
            return w

        return {
            "kind": self.kind,
            "count": self.count,
            "certified": self.certified,
            "epsilon": str(self.epsilon),
            "measure_ref": self.measure_ref,
            "lower_bound": self.lower_bound,
            "witnesses": [enc(w) for w in self.witnesses],
            "assignment": list(self.assignment),
        }


def measure_ref(mu: Measure) -> str:
    text = ",".join(str(w) for w in mu.weights) + f"|{mu.residual}"
    return "sha256:" + hashlib.sha256(text.encode()).hexdigest()[:16]


def _check_domain(cls: FunctionClass, mu: Measure) -> None:
    if cls.size != mu.size:
        raise DomainMismatch(f"class on {cls.size} points, measure on {mu.size}")


def _int_dot(diffs: np.ndarray, weights: np.ndarray):
    """Exact ``diffs @ weights`` for integer arrays, promoting to Python ints if needed."""
    if diffs.dtype == np.int64 and weights.dtype == np.int64:
        bound = int(np.abs(diffs).max(initial=0)) * int(weights.max(initial=0)) * weights.size
        if bound < 2**62:
            return diffs @ weights
    return diffs.astype(object) @ weights.astype(object)


def pairwise_l1(cls: FunctionClass, mu: Measure) -> np.ndarray:
    """Matrix of ``mu(|f_i - f_j|)``; Fractions in exact mode."""
    _check_domain(cls, mu)
    if cls.exact and mu.exact:
        V, dv = cls.integer_values
        W, dw = mu.integer_weights
        n = cls.n_functions
        out = np.empty((n, n), dtype=object)
        for i in range(n):
            row = _int_dot(np.abs(V - V[i]), W)
            for j in range(n):
                out[i, j] = Fraction(int(row[j]), dv * dw)
        return out
    V = np.asarray(cls.values, dtype=np.float64)
    W = np.asarray(mu.weights, dtype=np.float64)
    return np.abs(V[:, None, :] - V[None, :, :]) @ W


def l1_distance(cls: FunctionClass, i: int, j: int, mu: Measure):
    _check_domain(cls, mu)
    i, j = cls.check_index(i), cls.check_index(j)
    return mu.integrate(np.abs(cls.values[i] - cls.values[j]))


def _eps(eps) -> Fraction:
    e = as_fraction(eps) if not isinstance(eps, float) else Fraction(eps)
    if e < 0:
        raise ValueError("eps must be nonnegative")
    return e


def covering_number(
    cls: FunctionClass,
    eps,
    mu: Measure,
    mode: Literal["exact", "greedy"] = "exact",
    centers: Literal["internal", "external"] = "internal",
) -> CoverResult:
    """Smallest number of closed eps-balls in L1(mu) covering the class."""
    eps = _eps(eps)
    _check_domain(cls, mu)
    n = cls.n_functions
    if centers == "external":
        return _external_covering(cls, eps, mu, mode)
    dist = pairwise_l1(cls, mu)
    balls = [sum(1 << j for j in range(n) if dist[i, j] <= eps) for i in range(n)]
    universe = (1 << n) - 1
    # no closed eps-ball holds two points more than 2*eps apart
    lower = len(_greedy_separated(dist, 2 * eps, strict=True))
    if mode == "greedy":
        chosen = setcover.greedy_cover(universe, balls)
        cert = "exact" if len(chosen) == lower else "upper_bound"
    else:
        if n > EXACT_COVER_CAP:
            raise CapExceeded(f"exact covering is limited to {EXACT_COVER_CAP} functions")
        chosen, _ = setcover.exact_cover(universe, balls)
        cert = "exact"
    chosen = sorted(chosen)
    assignment = tuple(next(c for c in chosen if balls[c] >> f & 1) for f in range(n))
    return CoverResult(
        "covering", len(chosen), cert, eps, measure_ref(mu), tuple(chosen), assignment, lower
    )


def _greedy_separated(dist: np.ndarray, eps, strict: bool = False) -> list[int]:
    chosen: list[int] = []
    for i in range(dist.shape[0]):
        if strict:
            ok = all(dist[i, j] > eps for j in chosen)
        else:
            ok = all(dist[i, j] >= eps for j in chosen)
        if ok:
            chosen.append(i)
    return chosen


def packing_number(cls: FunctionClass, eps, mu: Measure) -> CoverResult:
    """Greedy maximal eps-separated subset (pairwise distances ``>= eps``).

    The count lower-bounds the covering number at radius ``eps/2`` except in
    the tie case where two chosen members sit at distance exactly ``eps``.
    """
    eps = _eps(eps)
    if eps <= 0:
        raise ValueError("packing needs eps > 0")
    chosen = _greedy_separated(pairwise_l1(cls, mu), eps)
    return CoverResult("packing", len(chosen), "lower_bound", eps, measure_ref(mu), tuple(chosen))


# -- bracketing ---------------------------------------------------------------


def canonical_bracket(cls: FunctionClass, members: Sequence[int]) -> Bracket:
    """Tightest bracket holding ``members``: pointwise min and max."""
    rows = cls.values[list(members)]
    return Bracket(np.array(rows.min(axis=0), dtype=object), np.array(rows.max(axis=0), dtype=object))


class _WidthOracle:
    """Exact width test ``mu(max_S f - min_S f) <= eps`` on integer-scaled data."""

    def __init__(self, cls: FunctionClass, mu: Measure, eps: Fraction):
        if cls.exact and mu.exact:
            V, dv = cls.integer_values
            W, dw = mu.integer_weights
            keep = np.asarray(W != 0)
            self.V = V[:, keep]
            self.W = W[keep]
            self.limit = eps * dv * dw
        else:
            W = np.asarray(mu.weights, dtype=np.float64)
            keep = W > 0
            self.V = np.asarray(cls.values, dtype=np.float64)[:, keep]
            self.W = W[keep]
            self.limit = float(eps) * (1 + 1e-12)

    def width(self, hi: np.ndarray, lo: np.ndarray):
        return _int_dot(hi - lo, self.W) if self.V.dtype != np.float64 else (hi - lo) @ self.W

    def ok(self, hi, lo) -> bool:
        return self.width(hi, lo) <= self.limit


def maximal_feasible_groups(cls: FunctionClass, mu: Measure, eps: Fraction) -> list[int]:
    """All inclusion-maximal subsets whose canonical bracket has width <= eps (as bitmasks)."""
    oracle = _WidthOracle(cls, mu, eps)
    V = oracle.V
    n = cls.n_functions
    full = (1 << n) - 1
    if oracle.ok(V.max(axis=0), V.min(axis=0)):
        return [full]
    # pair compatibility prunes the DFS cheaply
    compat = [0] * n
    for i in range(n):
        for j in range(n):
            if oracle.ok(np.maximum(V[i], V[j]), np.minimum(V[i], V[j])):
                compat[i] |= 1 << j
    groups: list[int] = []
    nodes = [0]

    def dfs(mask: int, hi, lo, allowed: int, start: int) -> None:
        nodes[0] += 1
        if nodes[0] > MAX_DFS_NODES:
            raise CapExceeded("too many feasible subsets for exact bracketing")
        extended = False
        for f in range(start, n):
            if not allowed >> f & 1:
                continue
            nhi, nlo = np.maximum(hi, V[f]), np.minimum(lo, V[f])
            if oracle.ok(nhi, nlo):
                extended = True
                dfs(mask | 1 << f, nhi, nlo, allowed & compat[f], f + 1)
        if extended:
            return
        # maximal iff no lower-index member can be added either
        for g in range(n):
            if mask >> g & 1 or not allowed >> g & 1:
                continue
            if oracle.ok(np.maximum(hi, V[g]), np.minimum(lo, V[g])):
                return
        groups.append(mask)

    for f in range(n):
        dfs(1 << f, V[f], V[f], compat[f] & ~(1 << f), f + 1)
    return sorted(set(groups))


def _greedy_groups(cls: FunctionClass, mu: Measure, eps: Fraction) -> list[int]:
    oracle = _WidthOracle(cls, mu, eps)
    V = oracle.V
    n = cls.n_functions
    uncovered = set(range(n))
    groups = []
    while uncovered:
        best = None
        for seed in sorted(uncovered):
            members = [seed]
            hi, lo = V[seed], V[seed]
            for g in sorted(uncovered - {seed}):
                nhi, nlo = np.maximum(hi, V[g]), np.minimum(lo, V[g])
                if oracle.ok(nhi, nlo):
                    members.append(g)
                    hi, lo = nhi, nlo
            if best is None or len(members) > len(best):
                best = members
        groups.append(sum(1 << i for i in best))
        uncovered -= set(best)
    return groups


def bracketing_number(
    cls: FunctionClass, eps, mu: Measure, mode: Literal["exact", "greedy"] = "exact"
) -> CoverResult:
    """Smallest number of eps-brackets ``[lower, upper]`` covering the class.

    Any bracket holding a subset S can be tightened to the pointwise min/max
    over S without increasing its width, so the problem is a set cover by
    width-feasible subsets.
    """
    eps = _eps(eps)
    _check_domain(cls, mu)
    n = cls.n_functions
    universe = (1 << n) - 1
    if mode == "greedy":
        groups = _greedy_groups(cls, mu, eps)
        chosen = list(range(len(groups)))
        cert: Certificate = "upper_bound"
        lower = None
    else:
        if n > EXACT_BRACKET_CAP:
            raise CapExceeded(f"exact bracketing is limited to {EXACT_BRACKET_CAP} functions")
        groups = maximal_feasible_groups(cls, mu, eps)
        chosen, lower = setcover.exact_cover(universe, groups)
        cert = "exact"
    members = [[f for f in range(n) if groups[c] >> f & 1] for c in chosen]
    brackets = tuple(canonical_bracket(cls, m) for m in members)
    assignment = tuple(next(k for k, m in enumerate(members) if f in m) for f in range(n))
    return CoverResult(
        "bracketing", len(brackets), cert, eps, measure_ref(mu), brackets, assignment, lower
    )


# -- external covering (arbitrary centers) --------------------------------------


def _l1_to(values: np.ndarray, center: Sequence[Fraction], weights: np.ndarray) -> Fraction:
    return sum((w * abs(v - c) for v, c, w in zip(values, center, weights)), Fraction(0))


def _dual_bound(rows: np.ndarray, weights: np.ndarray, lam: Sequence[Fraction]) -> Fraction:
    """``sum_x w_x min_c sum_i lam_i |f_i(x) - c|``: a lower bound on the 1-center radius."""
    total = Fraction(0)
    for x in range(rows.shape[1]):
        col = rows[:, x]
        best = min(sum(l * abs(v - c) for l, v in zip(lam, col)) for c in set(col))
        total += weights[x] * best
    return total


def center_radius(rows: np.ndarray, weights: np.ndarray, eps: Fraction | None = None):
    """Certified bounds on ``min_c max_i mu(|f_i - c|)`` for exact rows.

    Returns ``(lower, upper, center)`` with exact rationals; ``center``
    attains ``upper``.  With ``eps`` given, stops as soon as the bounds
    decide ``radius <= eps``.
    """
    from scipy.optimize import linprog

    m, d = rows.shape
    cands = [rows[i] for i in range(m)]
    cands.append(np.array([Fraction(1, 2) * (a + b) for a, b in zip(rows.max(axis=0), rows.min(axis=0))], dtype=object))
    lower = max(
        _dual_bound(rows, weights, [Fraction(1, m)] * m),
        max((_l1_to(rows[i], rows[j], weights) / 2 for i in range(m) for j in range(i)), default=Fraction(0)),
    )
    upper, center = None, None
    for c in cands:
        r = max(_l1_to(rows[i], c, weights) for i in range(m))
        if upper is None or r < upper:
            upper, center = r, c
    if upper <= lower or m <= 2:
        return lower, upper, center
    if eps is not None and (upper <= eps or lower > eps):
        return lower, upper, center

    F = np.asarray(rows, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    nv = d + m * d + 1
    cost = np.zeros(nv)
    cost[-1] = 1.0
    A, b = [], []
    for i in range(m):
        for x in range(d):
            e = d + i * d + x
            r1 = np.zeros(nv); r1[x] = -1; r1[e] = -1
            A.append(r1); b.append(-F[i, x])
            r2 = np.zeros(nv); r2[x] = 1; r2[e] = -1
            A.append(r2); b.append(F[i, x])
    for i in range(m):
        r = np.zeros(nv)
        r[d + i * d : d + (i + 1) * d] = w
        r[-1] = -1
        A.append(r); b.append(0.0)
    bounds = [(None, None)] * d + [(0, None)] * (m * d) + [(0, None)]
    res = linprog(cost, A_ub=np.array(A), b_ub=np.array(b), bounds=bounds, method="highs")
    if res.status != 0:
        return lower, upper, center
    lam_f = np.clip(-np.asarray(res.ineqlin.marginals[-m:]), 0, None)
    dens = [int(np.lcm.reduce([v.denominator for v in rows.ravel()])) * 2 ** k for k in (1, 4, 10)]
    for den in dens + [10**6, 10**12]:
        c = [Fraction(float(v)).limit_denominator(den) for v in res.x[:d]]
        r = max(_l1_to(rows[i], c, weights) for i in range(m))
        if r < upper:
            upper, center = r, np.array(c, dtype=object)
        if lam_f.sum() > 0:
            lam = [Fraction(float(v)).limit_denominator(den) for v in lam_f]
            s = sum(lam)
            if s > 0:
                lower = max(lower, _dual_bound(rows, weights, [l / s for l in lam]))
        if lower == upper:
            break
    return lower, upper, center


def _external_groups(cls: FunctionClass, mu: Measure, eps: Fraction):
    """Maximal subsets admitting one common center within eps, with their centers."""
    if not (cls.exact and mu.exact):
        raise TypeError("external covering needs exact inputs")
    keep = np.asarray(mu.support)
    rows_all = cls.values[:, keep]
    w = mu.weights[keep]
    dist = pairwise_l1(cls, mu)
    n = cls.n_functions
    compat = [sum(1 << j for j in range(n) if dist[i, j] <= 2 * eps) for i in range(n)]
    feasible: dict[int, np.ndarray] = {}

    def check(mask: int):
        idx = [i for i in range(n) if mask >> i & 1]
        lower, upper, center = center_radius(rows_all[idx], w, eps)
        if upper <= eps:
            return center
        if lower > eps:
            return None
        raise UndecidedCenter(f"cannot certify the 1-center radius of {idx} against eps={eps}")

    def dfs(mask: int, allowed: int, start: int) -> None:
        for f in range(start, n):
            if allowed >> f & 1:
                nm = mask | 1 << f
                c = check(nm)
                if c is not None:
                    feasible[nm] = c
                    dfs(nm, allowed & compat[f], f + 1)

    for f in range(n):
        feasible[1 << f] = rows_all[f]
        dfs(1 << f, compat[f] & ~(1 << f), f + 1)
    masks = sorted(feasible)
    maximal = [m for m in masks if not any(o != m and o & m == m for o in masks)]
    full_centers = {}
    for m in maximal:
        c = np.array(cls.values[next(i for i in range(n) if m >> i & 1)], dtype=object)
        c[keep] = feasible[m]
        full_centers[m] = c
    return maximal, full_centers


def _external_covering(cls, eps, mu, mode) -> CoverResult:
    n = cls.n_functions
    if n > EXACT_EXTERNAL_CAP:
        raise CapExceeded(f"external covering is limited to {EXACT_EXTERNAL_CAP} functions")
    groups, centers = _external_groups(cls, mu, eps)
    universe = (1 << n) - 1
    if mode == "greedy":
        chosen = setcover.greedy_cover(universe, groups)
        cert: Certificate = "upper_bound"
        lower = None
    else:
        chosen, lower = setcover.exact_cover(universe, groups)
        cert = "exact"
    chosen = sorted(chosen)
    assignment = tuple(next(k for k, c in enumerate(chosen) if groups[c] >> f & 1) for f in range(n))
    wit = tuple(centers[groups[c]] for c in chosen)
    return CoverResult("covering_external", len(chosen), cert, eps, measure_ref(mu), wit, assignment, lower)


# -- boundaries and partition-based brackets ---------------------------------------


def essential_boundary(pi: Partition, a, b, mu: Measure) -> np.ndarray:
    """Union of the blocks carrying positive mass of both ``a`` and ``b`` (as a mask)."""
    if pi.size != mu.size:
        raise DomainMismatch("partition and measure on different domains")
    a = _to_mask(a, mu.size) & mu.support
    b = _to_mask(b, mu.size) & mu.support
    lab = np.asarray(pi.labels)
    hit = np.zeros(pi.k, dtype=bool)
    hit[np.unique(lab[a])] = True
    both = np.zeros(pi.k, dtype=bool)
    both[np.unique(lab[b])] = True
    return (hit & both)[lab]


@dataclass(frozen=True, eq=False)
class ApproxBrackets:
    """Brackets built from a partition on the [0,1]-normalized scale.

    ``widths``, ``xi_mass`` and ``gamma``/``delta`` are in normalized units;
    ``brackets`` are mapped back to the class's own scale.
    """

    brackets: tuple[Bracket, ...]
    assignment: tuple[int, ...]
    widths: tuple[Fraction, ...]
    xi: tuple[np.ndarray, ...]
    xi_mass: tuple[Fraction, ...]
    gamma: Fraction
    delta: Fraction

    @property
    def bound(self) -> Fraction:
        return self.gamma + 3 * self.delta

    def bound_applies(self) -> bool:
        return max(self.xi_mass) < self.delta

    def within_bound(self) -> bool:
        return all(w < self.bound for w in self.widths)


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def brackets_from_partition(
    cls: FunctionClass, mu: Measure, pi: Partition, gamma, delta
) -> ApproxBrackets:
    """Quantized block-wise brackets with the boundary set ``Xi(f)`` blown up to [0, top]."""
    gamma, delta = as_fraction(gamma), as_fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    _check_domain(cls, mu)
    if not (cls.exact and mu.exact):
        raise TypeError("partition brackets need exact inputs")
    if pi.size != cls.size:
        raise DomainMismatch("partition and class on different domains")
    lo, hi = cls.kappa_minus, cls.kappa_plus
    scale = hi - lo
    g = (cls.values - lo) / scale if scale else np.zeros_like(cls.values) + Fraction(0)
    top = delta * _ceil(1 / delta)
    levels = [j * delta for j in range(1, math.floor(1 / delta) + 1)]
    blocks = pi.blocks()
    pos = mu.support
    seen: dict[tuple, int] = {}
    brackets: list[Bracket] = []
    assignment, widths, xis, xi_masses = [], [], [], []
    for f in range(cls.n_functions):
        row = g[f]
        xi = np.zeros(cls.size, dtype=bool)
        for t in levels:
            below = np.asarray(row < t, dtype=bool)
            above = np.asarray(row > t + gamma, dtype=bool)
            xi |= essential_boundary(pi, below, above, mu)
        up = np.empty(cls.size, dtype=object)
        dn = np.empty(cls.size, dtype=object)
        for P in blocks:
            if xi[P[0]]:
                up[P], dn[P] = top, Fraction(0)
                continue
            live = P[pos[P]]
            if live.size == 0:
                up[P], dn[P] = Fraction(0), Fraction(0)
                continue
            up[P] = delta * _ceil(max(row[live]) / delta)
            dn[P] = delta * math.floor(min(row[live]) / delta)
        live = pos
        if not (np.all(dn[live] <= row[live]) and np.all(row[live] <= up[live])):
            raise AssertionError(f"bracket for function {f} does not enclose it on the support")
        widths.append(mu.integrate(up - dn))
        xis.append(xi)
        xi_masses.append(mu.mass(xi))
        key = (tuple(up), tuple(dn))
        if key not in seen:
            seen[key] = len(brackets)
            brackets.append(Bracket(lo + scale * dn, lo + scale * up))
        assignment.append(seen[key])
    return ApproxBrackets(
        tuple(brackets), tuple(assignment), tuple(widths), tuple(xis), tuple(xi_masses), gamma, delta
    )


class CrudePreconditionError(ValueError):
    def __init__(self, member: int, message: str):
        super().__init__(message)
        self.member = member


def set_boundary(pi: Partition, c) -> np.ndarray:
    """Blocks meeting ``c`` without being contained in it (as a mask)."""
    c = _to_mask(c, pi.size)
    lab = np.asarray(pi.labels)
    meets = np.zeros(pi.k, dtype=bool)
    meets[np.unique(lab[c])] = True
    outside = np.zeros(pi.k, dtype=bool)
    outside[np.unique(lab[~c])] = True
    return (meets & outside)[lab]


def crude_partition_from_brackets(
    brackets: Sequence[tuple], eps, mu: Measure, family: SetFamily
) -> tuple[Partition, Fraction]:
    """Partition generated by set brackets ``(C_minus, C_plus)`` and its worst boundary mass.

    Every member ``C`` must satisfy ``C_minus <= C <= C_plus`` for some pair of
    width ``mu(C_plus - C_minus) <= eps``.  The result has at most ``3**N``
    blocks and ``max_C mu(boundary of C) <= eps``.
    """
    eps = as_fraction(eps)
    size = family.size
    pairs = [(_to_mask(a, size), _to_mask(b, size)) for a, b in brackets]
    if not pairs:
        raise ValueError("no brackets given")
    for i, (lo, hi) in enumerate(pairs):
        if np.any(lo & ~hi):
            raise ValueError(f"bracket {i} has C_minus not contained in C_plus")
    for ci, c in enumerate(family.masks):
        if not any(
            not np.any(lo & ~c) and not np.any(c & ~hi) and mu.mass(hi & ~lo) <= eps
            for lo, hi in pairs
        ):
            raise CrudePreconditionError(ci, f"family member {ci} lies in no eps-bracket")
    pi = partition_generated_by(SetFamily(np.array([m for p in pairs for m in p])))
    worst = max(mu.mass(set_boundary(pi, c)) for c in family.masks)
    if pi.k > 3 ** len(pairs):
        raise AssertionError("generated partition exceeds 3**N blocks")
    if worst > eps:
        raise AssertionError(f"boundary mass {worst} exceeds eps={eps}")
    return pi, worst
