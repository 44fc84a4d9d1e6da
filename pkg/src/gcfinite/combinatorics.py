"""Boolean independence, gamma-shattering and gamma-dimension on finite domains.

Sign patterns are written as bit-strings.  For an independence witness over
functions ``f_0..f_{k-1}`` the pattern ``"0110"`` has character ``j`` equal
to ``'1'`` when ``f_j < alpha`` (function ``j`` is *below*) and ``'0'`` when
``f_j > beta``.  For a shattering witness over points ``x_0..x_{n-1}`` the
character ``j`` is ``'1'`` when ``x_j`` belongs to the subset ``F``, i.e. the
selected function is below ``alpha`` at ``x_j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .core import FunctionClass, Levels, Measure, SetFamily, _to_mask, as_fraction

MAX_WIDTH = 24


class WidthLimitExceeded(ValueError):
    """A pattern table of width above :data:`MAX_WIDTH` was requested."""


def _check_width(k: int) -> None:
    if k > MAX_WIDTH:
        raise WidthLimitExceeded(f"pattern width {k} exceeds the hard cap {MAX_WIDTH}")


def _key(code: int, width: int) -> str:
    # character j <-> bit j of code
    return "".join("1" if (code >> j) & 1 else "0" for j in range(width))


@dataclass(frozen=True)
class IndependenceWitness:
    function_indices: tuple[int, ...]
    levels: Levels
    cell_points: dict[str, int] = field(hash=False)

    @property
    def k(self) -> int:
        return len(self.function_indices)

    def verify(self, cls: FunctionClass) -> bool:
        """Recheck every cell point against the class values."""
        if len(self.cell_points) != 2**self.k:
            return False
        for key, x in self.cell_points.items():
            for j, f in enumerate(self.function_indices):
                v = cls.values[f, x]
                if key[j] == "1" and not v < self.levels.alpha:
                    return False
                if key[j] == "0" and not v > self.levels.beta:
                    return False
        return True

    def to_dict(self) -> dict:
        return {
            "function_indices": list(self.function_indices),
            "levels": [str(self.levels.alpha), str(self.levels.beta)],
            "cell_points": dict(sorted(self.cell_points.items())),
        }


@dataclass(frozen=True)
class ShatterWitness:
    points: tuple[int, ...]
    levels: Levels
    selector: dict[str, int] = field(hash=False)

    def verify(self, cls: FunctionClass, gamma=None) -> bool:
        if gamma is not None and self.levels.gap < as_fraction(gamma):
            return False
        if len(self.selector) != 2 ** len(self.points):
            return False
        for key, f in self.selector.items():
            for j, x in enumerate(self.points):
                v = cls.values[f, x]
                if key[j] == "1" and not v < self.levels.alpha:
                    return False
                if key[j] == "0" and not v > self.levels.beta:
                    return False
        return True

    def to_dict(self) -> dict:
        return {
            "points": list(self.points),
            "levels": [str(self.levels.alpha), str(self.levels.beta)],
            "selector": dict(sorted(self.selector.items())),
        }


def _sides(cls: FunctionClass, levels: Levels) -> tuple[np.ndarray, np.ndarray]:
    below = np.asarray(cls.values < levels.alpha, dtype=bool)
    above = np.asarray(cls.values > levels.beta, dtype=bool)
    return below, above


def _point_codes(below: np.ndarray, decided: np.ndarray, rows: Sequence[int]):
    """Pattern code per point for the functions in ``rows`` (-1 where undecided)."""
    rows = list(rows)
    n_points = below.shape[1]
    codes = np.zeros(n_points, dtype=np.int64)
    ok = np.ones(n_points, dtype=bool)
    for j, f in enumerate(rows):
        codes |= below[f].astype(np.int64) << j
        ok &= decided[f]
    return np.where(ok, codes, -1)


def _cells_from_codes(codes: np.ndarray, k: int) -> dict[int, int] | None:
    # lowest-index point per code; None unless all 2**k codes occur
    valid = codes >= 0
    uniq, first = np.unique(codes[valid], return_index=True)
    if uniq.size != 2**k:
        return None
    idx = np.flatnonzero(valid)[first]
    return dict(zip(uniq.tolist(), idx.tolist()))


def is_boolean_independent(
    cls: FunctionClass, subset: Sequence[int], levels: Levels
) -> IndependenceWitness | None:
    """Witness that every strict sign cell of ``subset`` is nonempty, else None."""
    subset = [cls.check_index(i) for i in subset]
    k = len(subset)
    _check_width(k)
    below, above = _sides(cls, levels)
    codes = _point_codes(below, below | above, subset)
    cells = _cells_from_codes(codes, k)
    if cells is None:
        return None
    return IndependenceWitness(
        tuple(subset), levels, {_key(c, k): x for c, x in sorted(cells.items())}
    )


def max_boolean_independent(
    cls: FunctionClass, levels: Levels, cap: int = MAX_WIDTH
) -> tuple[int, IndependenceWitness | None]:
    """Largest independent subfamily (size <= cap) by branch-and-bound.

    Subsets are grown in increasing index order; a dependent family is never
    extended.  Among the largest families the lexicographically first one is
    returned.
    """
    _check_width(cap)
    below, above = _sides(cls, levels)
    decided = below | above
    n = cls.n_functions
    n_points = cls.size
    # 2**k nonempty cells need 2**k distinct points
    cap = min(cap, n, int(np.floor(np.log2(n_points))) if n_points else 0)

    best: list = [0, ()]

    def extend(chosen: list[int], codes: np.ndarray, start: int) -> None:
        k = len(chosen)
        if k > best[0]:
            best[0], best[1] = k, tuple(chosen)
        if k == cap:
            return
        for f in range(start, n):
            if k + (n - f) <= best[0]:
                return
            new = np.where(decided[f] & (codes >= 0), codes | (below[f].astype(np.int64) << k), -1)
            if np.unique(new[new >= 0]).size == 2 ** (k + 1):
                chosen.append(f)
                extend(chosen, new, f + 1)
                chosen.pop()

    extend([], np.zeros(n_points, dtype=np.int64), 0)
    if best[0] == 0:
        return 0, None
    return best[0], is_boolean_independent(cls, best[1], levels)


def level_candidates(cls: FunctionClass, gamma) -> list[Levels]:
    """Level pairs with gap ``gamma`` covering every distinct below/above split.

    Any admissible ``(alpha, beta)`` induces ``below = {v <= v_i}`` and
    ``above = {v >= v_j}`` for consecutive-value cut points ``v_i < v_j`` of the
    value set (augmented by ``kappa_minus - 1`` and ``kappa_plus + 1``); such a
    split is reachable with gap ``>= gamma`` iff ``v_j - v_i > gamma``, and the
    window of width ``gamma`` centred in ``(v_i, v_j)`` realizes it.
    """
    gamma = as_fraction(gamma)
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    vals = sorted({Fraction(v) for v in cls.values.ravel().tolist()})
    vals = [vals[0] - 1] + vals + [vals[-1] + 1]
    out = []
    for i, lo in enumerate(vals):
        for hi in vals[i + 1 :]:
            if hi - lo > gamma:
                alpha = (lo + hi) / 2 - gamma / 2
                out.append(Levels(alpha, alpha + gamma))
    return out


def _shatter_table(cls: FunctionClass, levels: Levels, points: Sequence[int]):
    below, above = _sides(cls, levels)
    pts = list(points)
    decided = np.all((below | above)[:, pts], axis=1)
    codes = np.zeros(cls.n_functions, dtype=np.int64)
    for j, x in enumerate(pts):
        codes |= below[:, x].astype(np.int64) << j
    rows = np.flatnonzero(decided)
    uniq, first = np.unique(codes[rows], return_index=True)
    return uniq, rows[first]


def is_gamma_shattered(cls: FunctionClass, gamma, points: Sequence[int]) -> ShatterWitness | None:
    pts = [int(x) for x in points]
    if len(set(pts)) != len(pts):
        raise ValueError("points must be distinct")
    for x in pts:
        if not 0 <= x < cls.size:
            raise IndexError(f"point {x} outside the domain")
    _check_width(len(pts))
    for levels in level_candidates(cls, gamma):
        uniq, fidx = _shatter_table(cls, levels, pts)
        if uniq.size == 2 ** len(pts):
            sel = {_key(int(c), len(pts)): int(f) for c, f in zip(uniq, fidx)}
            return ShatterWitness(tuple(pts), levels, sel)
    return None


class Dimension(NamedTuple):
    value: int
    capped: bool
    witness: ShatterWitness | None


def _max_shattered(below: np.ndarray, decided: np.ndarray, cap: int, floor: int):
    """Largest shattered point set for one fixed level pair (DFS, downward closed)."""
    n_f, n_points = below.shape
    best: list = [floor, None]

    def extend(chosen: list[int], active: np.ndarray, codes: np.ndarray, start: int):
        n = len(chosen)
        if n > best[0]:
            best[0], best[1] = n, tuple(chosen)
        if n == cap:
            return
        for x in range(start, n_points):
            if n + (n_points - x) <= best[0]:
                return
            keep = decided[active, x]
            if keep.sum() < 2 ** (n + 1):
                continue
            act = active[keep]
            new = codes[keep] | (below[act, x].astype(np.int64) << n)
            if np.unique(new).size == 2 ** (n + 1):
                chosen.append(x)
                extend(chosen, act, new, x + 1)
                chosen.pop()

    extend([], np.arange(n_f), np.zeros(n_f, dtype=np.int64), 0)
    return best[0], best[1]


def gamma_dimension(cls: FunctionClass, gamma, cap: int = MAX_WIDTH) -> Dimension:
    """Maximal size of a gamma-shattered point set, truncated at ``cap``."""
    _check_width(cap)
    # 2**n patterns need 2**n distinct functions
    limit = min(cap, cls.size, int(np.floor(np.log2(cls.n_functions))))
    best, best_pts = 0, ()
    for levels in level_candidates(cls, gamma):
        below, above = _sides(cls, levels)
        size, pts = _max_shattered(below, below | above, limit, best)
        if pts is not None and size > best:
            best, best_pts = size, pts
        if best == limit:
            break
    witness = is_gamma_shattered(cls, gamma, best_pts)
    capped = best == cap and _extends_beyond(cls, gamma, cap)
    return Dimension(best, capped, witness)


def _extends_beyond(cls: FunctionClass, gamma, cap: int) -> bool:
    if cap >= cls.size or 2 ** (cap + 1) > cls.n_functions:
        return False
    for levels in level_candidates(cls, gamma):
        below, above = _sides(cls, levels)
        size, _ = _max_shattered(below, below | above, cap + 1, cap)
        if size > cap:
            return True
    return False


def vc_dimension(family: SetFamily, cap: int = MAX_WIDTH) -> Dimension:
    """Classical VC dimension: gamma-dimension of the indicator class at gamma = 1/2."""
    return gamma_dimension(family.to_function_class(), Fraction(1, 2), cap)


def assouad_shatter(cls: FunctionClass, witness: IndependenceWitness) -> ShatterWitness:
    """Turn ``2**n`` independent functions into ``n`` shattered points.

    Position ``l = sum_{j in F} 2**(j-1)`` of ``witness.function_indices``
    plays the role of the function attached to ``F``; point ``x_j`` is taken
    from the cell where exactly the functions with ``j in F`` are below.
    """
    size = len(witness.function_indices)
    if size < 1 or size & (size - 1):
        raise ValueError(f"witness has {size} functions, not a power of two")
    n = size.bit_length() - 1
    _check_width(size)
    points = []
    for j in range(n):
        key = "".join("1" if (pos >> j) & 1 else "0" for pos in range(size))
        if key not in witness.cell_points:
            raise ValueError(f"witness lacks the cell {key}")
        points.append(int(witness.cell_points[key]))
    selector = {_key(mask, n): witness.function_indices[mask] for mask in range(size)}
    out = ShatterWitness(tuple(points), witness.levels, selector)
    if not out.verify(cls):
        raise ValueError("witness cells are not realized by the class (invalid witness)")
    return out


@dataclass(frozen=True)
class GrowthResult:
    """Outcome of growing an independent sequence over a base set.

    ``cells`` are the ``2**depth_reached`` positive-mass traces on the base
    set, keyed by pattern.  ``witness`` is set only when the requested depth
    was reached.
    """

    function_indices: tuple[int, ...]
    depth_requested: int
    cells: dict[str, np.ndarray] = field(hash=False, repr=False)
    witness: IndependenceWitness | None

    @property
    def depth_reached(self) -> int:
        return len(self.function_indices)

    @property
    def complete(self) -> bool:
        return self.depth_reached == self.depth_requested


def grow_boolean_independent(
    cls: FunctionClass, mu: Measure, base, levels: Levels, depth: int
) -> GrowthResult:
    """Greedy growth of an independent sequence whose cells keep positive mass on ``base``.

    At every step the lowest-index function splitting *every* current cell
    into two parts of positive mass (``{f < alpha}`` and ``{f > beta}``) is
    appended.
    """
    if depth > 20:
        raise WidthLimitExceeded("growth depth is capped at 20")
    if mu.size != cls.size:
        raise ValueError("measure and class live on different domains")
    base = mu.support & _to_mask(base, cls.size)
    if not base.any():
        raise ValueError("base set has zero mass")
    below, above = _sides(cls, levels)
    pos = mu.support
    cells: dict[int, np.ndarray] = {0: base}
    chosen: list[int] = []
    while len(chosen) < depth:
        k = len(chosen)
        pick = None
        for f in range(cls.n_functions):
            lo, hi = below[f] & pos, above[f] & pos
            if all((c & lo).any() and (c & hi).any() for c in cells.values()):
                pick = f
                break
        if pick is None:
            break
        new = {}
        for code, c in cells.items():
            new[code | (1 << k)] = c & below[pick]
            new[code] = c & above[pick]
        cells = new
        chosen.append(pick)
    k = len(chosen)
    keyed = {_key(c, k): m for c, m in sorted(cells.items())}
    witness = None
    if k == depth:
        points = {key: int(np.flatnonzero(m)[0]) for key, m in keyed.items()}
        witness = IndependenceWitness(tuple(chosen), levels, points)
    return GrowthResult(tuple(chosen), depth, keyed, witness)

