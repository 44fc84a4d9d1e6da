"""Finite projective planes PG(2, q) over prime fields and line-boundary search."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

import numpy as np

from .core import DomainMismatch, Partition, SetFamily, as_fraction

EXHAUSTIVE_LIMIT = 10**7


class NotPrime(ValueError):
    pass


def is_small_prime(q: int) -> bool:
    """Trial division; meant for plane orders, not big integers."""
    if q < 2:
        return False
    return all(q % d for d in range(2, math.isqrt(q) + 1))


def _normalized_vectors(q: int) -> list[tuple[int, int, int]]:
    # first nonzero coordinate equal to 1, lexicographic order
    out = []
    for v in itertools.product(range(q), repeat=3):
        nz = next((c for c in v if c), 0)
        if nz == 1:
            out.append(v)
    return out


@dataclass(frozen=True, eq=False)
class ProjectivePlane:
    q: int
    points: tuple[tuple[int, int, int], ...]
    lines: SetFamily = field(repr=False)
    incidence: np.ndarray = field(repr=False)

    @property
    def m(self) -> int:
        return self.q * self.q + self.q + 1

    def axiom_report(self) -> dict[str, bool]:
        I = self.incidence.astype(np.int64)
        q, m = self.q, self.m
        pair = I.T @ I  # points x points: number of common lines
        off = ~np.eye(m, dtype=bool)
        return {
            "counts": len(self.points) == m and I.shape == (m, m),
            "line_size": bool(np.all(I.sum(axis=1) == q + 1)),
            "point_degree": bool(np.all(I.sum(axis=0) == q + 1)),
            "unique_line_per_pair": bool(np.all(pair[off] == 1)),
        }

    def verify(self) -> bool:
        return all(self.axiom_report().values())

    def dual(self) -> "ProjectivePlane":
        """Plane with the roles of points and lines exchanged."""
        inc = self.incidence.T.copy()
        return ProjectivePlane(self.q, self.points, SetFamily(inc), inc)

    def to_adjacency_text(self) -> str:
        return "\n".join(" ".join(map(str, np.flatnonzero(row))) for row in self.incidence) + "\n"

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "m": self.m,
            "points": [list(p) for p in self.points],
            "lines": [np.flatnonzero(row).tolist() for row in self.incidence],
        }


def build_plane(q: int) -> ProjectivePlane:
    """PG(2, q): points are 1-dim subspaces of F_q^3, lines are 2-dim subspaces.

    A 2-dim subspace is the kernel of a nonzero functional ``a``; the line
    holds the points ``x`` with ``a . x = 0 (mod q)``.
    """
    if q < 2 or not is_small_prime(q):
        raise NotPrime(f"plane order must be a prime >= 2, got {q}")
    vecs = np.array(_normalized_vectors(q), dtype=np.int64)
    incidence = (vecs @ vecs.T) % q == 0
    incidence.setflags(write=False)
    plane = ProjectivePlane(q, tuple(map(tuple, vecs.tolist())), SetFamily(incidence), incidence)
    if not plane.verify():
        raise AssertionError(f"plane of order {q} fails the incidence axioms")
    return plane


def line_boundaries(incidence: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """``|boundary_pi(C)|`` for every line C, for one or a batch of labelings.

    A block is in the boundary of C when it meets C without being inside it.
    """
    labels = np.atleast_2d(labels)
    k = int(labels.max()) + 1
    inc = incidence.astype(np.int32).T  # points x lines
    out = np.zeros((labels.shape[0], incidence.shape[0]), dtype=np.int64)
    for b in range(k):
        member = (labels == b).astype(np.int32)
        size = member.sum(axis=1)[:, None]
        hits = member @ inc
        out += np.where((hits > 0) & (hits < size), size, 0)
    return out


def max_line_boundary(plane: ProjectivePlane, pi: Partition) -> Fraction:
    if pi.size != plane.m:
        raise DomainMismatch(f"partition on {pi.size} points, plane has {plane.m}")
    b = line_boundaries(plane.incidence, np.asarray(pi.labels))
    return Fraction(int(b.max()), plane.m)


@dataclass(frozen=True)
class BoundarySearch:
    partition: Partition
    value: Fraction
    method: Literal["exhaustive", "local_search"]
    evaluations: int


def _exhaustive(plane: ProjectivePlane, k: int) -> BoundarySearch:
    m = plane.m
    if k == 1:
        pi = Partition.trivial(m)
        return BoundarySearch(pi, max_line_boundary(plane, pi), "exhaustive", 1)
    # point 0 is pinned to block 0; labelings with empty blocks are coarser
    # partitions and never beat their refinements, so they can stay in.
    total = k ** (m - 1)
    best_val, best_lab = None, None
    chunk = 1 << 15
    radix = k ** np.arange(m - 1, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        labs = np.zeros((idx.size, m), dtype=np.int64)
        labs[:, 1:] = (idx[:, None] // radix[None, :]) % k
        vals = line_boundaries(plane.incidence, labs).max(axis=1)
        i = int(np.argmin(vals))
        if best_val is None or vals[i] < best_val:
            best_val, best_lab = int(vals[i]), labs[i].copy()
    return BoundarySearch(Partition(tuple(best_lab.tolist())), Fraction(best_val, m), "exhaustive", total)


def _initial_labels(rng: np.random.Generator, m: int, k: int, spread: str) -> np.ndarray:
    if spread == "singletons":
        lab = np.zeros(m, dtype=np.int64)
        lab[rng.permutation(m)[: k - 1]] = np.arange(1, k)
        return lab
    if spread == "balanced":
        lab = rng.integers(0, k, size=m)
    else:
        # skewed block sizes; the good partitions have very small blocks
        sizes = 1 + rng.multinomial(m - k, rng.dirichlet(np.full(k, 0.5)))
        lab = np.repeat(np.arange(k), sizes)
        rng.shuffle(lab)
    lab[rng.permutation(m)[:k]] = np.arange(k)
    return lab


def _local_search(
    plane: ProjectivePlane, k: int, budget: int, seed: int, spread: str = "skewed"
) -> tuple[tuple, np.ndarray, int]:
    """Random single-point moves minimizing (max boundary, total boundary).

    A move is kept when it does not worsen the objective, so the walk can
    cross plateaus; the best labeling seen is returned.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    m = plane.m
    lines_of = [np.flatnonzero(plane.incidence[:, x]) for x in range(m)]
    lab = _initial_labels(rng, m, k, spread)
    hits = np.zeros((k, m), dtype=np.int64)  # block x line
    for x in range(m):
        hits[lab[x], lines_of[x]] += 1
    sizes = np.bincount(lab, minlength=k).astype(np.int64)

    def objective():
        s = sizes[:, None]
        b = np.where((hits > 0) & (hits < s), s, 0).sum(axis=0)
        return int(b.max()), int(b.sum())

    cur = objective()
    best, best_lab = cur, lab.copy()
    xs = rng.integers(0, m, size=budget)
    shifts = rng.integers(1, max(k, 2), size=budget)
    for x, shift in zip(xs, shifts):
        a = lab[x]
        b = (a + shift) % k
        if b == a:
            continue
        hits[a, lines_of[x]] -= 1
        hits[b, lines_of[x]] += 1
        sizes[a] -= 1
        sizes[b] += 1
        new = objective()
        if new <= cur:
            cur, lab[x] = new, b
            if new < best:
                best, best_lab = new, lab.copy()
        else:
            hits[a, lines_of[x]] += 1
            hits[b, lines_of[x]] -= 1
            sizes[a] += 1
            sizes[b] -= 1
    return best, best_lab, budget


def minimize_boundary(
    plane: ProjectivePlane,
    k: int,
    budget: int = 100_000,
    seed: int = 0,
    restarts: int = 20,
    threads: int = 1,
) -> BoundarySearch:
    """Smallest max line boundary over partitions into (at most) ``k`` blocks.

    Exhaustive when ``k**(m-1)`` labelings fit in :data:`EXHAUSTIVE_LIMIT`,
    otherwise seeded multi-start local search with ``budget`` move
    evaluations split evenly over ``restarts`` (restart 0 starts from a
    balanced labeling, restart 1 from ``k-1`` singleton blocks, the others
    from skewed block sizes); restart ``r`` uses seed
    ``seed + r`` and the best (value, restart index) wins.
    """
    if k < 1:
        raise ValueError("need at least one block")
    m = plane.m
    k = min(k, m)
    if k == m:
        pi = Partition.discrete(m)
        return BoundarySearch(pi, max_line_boundary(plane, pi), "exhaustive", 1)
    if k == 1 or k ** (m - 1) <= EXHAUSTIVE_LIMIT:
        return _exhaustive(plane, k)
    per = max(1, budget // restarts)

    def run(r: int):
        spread = "balanced" if r == 0 else "singletons" if r == 1 else "skewed"
        return _local_search(plane, k, per, seed + r, spread)

    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            runs = list(ex.map(run, range(restarts)))
    else:
        runs = [run(r) for r in range(restarts)]
    best = min(range(restarts), key=lambda r: (runs[r][0], r))
    _, lab, _ = runs[best]
    pi = Partition(tuple(lab.tolist()))
    return BoundarySearch(pi, max_line_boundary(plane, pi), "local_search", sum(r[2] for r in runs))


def alon_hypothesis(m: int, eps, k: int) -> bool:
    """``k**2 <= sqrt(m) * (1 - eps)``, decided exactly as ``k**4 <= m (1-eps)**2``."""
    eps = as_fraction(eps)
    if eps >= 1:
        return False
    return Fraction(k) ** 4 <= m * (1 - eps) ** 2


@dataclass(frozen=True)
class AlonReport:
    q: int
    k: int
    eps: Fraction
    status: Literal["pass", "fail", "vacuous"]
    certificate: Literal["proof", "non_falsification", "none"]
    value: Fraction | None
    method: str | None

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "k": self.k,
            "eps": str(self.eps),
            "status": self.status,
            "certificate": self.certificate,
            "value": None if self.value is None else str(self.value),
            "method": self.method,
        }


def alon_bound_check(
    plane: ProjectivePlane,
    eps,
    k: int,
    budget: int = 100_000,
    seed: int = 0,
    restarts: int = 20,
    search: BoundarySearch | None = None,
) -> AlonReport:
    """Test ``max_C |boundary C| / m > eps`` for partitions into at most ``k`` blocks.

    A precomputed ``search`` for the same ``k`` can be passed to check many
    ``eps`` values against one minimization.
    """
    eps = as_fraction(eps)
    if not alon_hypothesis(plane.m, eps, k):
        return AlonReport(plane.q, k, eps, "vacuous", "none", None, None)
    if search is None:
        search = minimize_boundary(plane, k, budget, seed, restarts)
    ok = search.value > eps
    cert = "proof" if search.method == "exhaustive" else "non_falsification"
    return AlonReport(plane.q, k, eps, "pass" if ok else "fail", cert, search.value, search.method)
