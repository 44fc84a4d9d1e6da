"""Minimum set cover on small universes (elements are bits of an int mask)."""

from __future__ import annotations

from typing import Sequence


def popcount(x: int) -> int:
    return bin(x).count("1")


def greedy_cover(universe: int, candidates: Sequence[int]) -> list[int]:
    """Classical greedy cover; ties go to the lowest candidate index."""
    uncovered = universe
    chosen: list[int] = []
    while uncovered:
        best, gain = -1, 0
        for i, c in enumerate(candidates):
            g = popcount(c & uncovered)
            if g > gain:
                best, gain = i, g
        if best < 0:
            raise ValueError("candidates do not cover the universe")
        chosen.append(best)
        uncovered &= ~candidates[best]
    return chosen


def packing_lower_bound(uncovered: int, candidates: Sequence[int]) -> int:
    """Size of a greedy set of elements no two of which share a candidate."""
    count = 0
    blocked = 0
    rest = uncovered
    while rest:
        e = rest & -rest
        rest &= rest - 1
        if blocked & e:
            continue
        count += 1
        for c in candidates:
            if c & e:
                blocked |= c
    return count


def exact_cover(universe: int, candidates: Sequence[int]) -> tuple[list[int], int]:
    """Optimal cover by branch-and-bound.

    Returns ``(chosen candidate indices, initial lower bound)``.  Among optimal
    covers the first one found in branching order is returned, which makes the
    result deterministic.
    """
    cands = list(candidates)
    if universe & ~_union(cands):
        raise ValueError("candidates do not cover the universe")
    best = greedy_cover(universe, cands)
    root_lb = max(packing_lower_bound(universe, cands), _size_bound(universe, cands))
    if len(best) == root_lb:
        return sorted(best), root_lb

    containing: dict[int, list[int]] = {}
    for bit in _bits(universe):
        opts = [i for i, c in enumerate(cands) if c >> bit & 1]
        opts.sort(key=lambda i: (-popcount(cands[i] & universe), i))
        containing[bit] = opts

    state = {"best": sorted(best)}

    def search(uncovered: int, chosen: list[int]) -> None:
        if not uncovered:
            if len(chosen) < len(state["best"]):
                state["best"] = sorted(chosen)
            return
        lb = max(packing_lower_bound(uncovered, cands), _size_bound(uncovered, cands))
        if len(chosen) + lb >= len(state["best"]):
            return
        # branch on the element with the fewest covering candidates
        bit = min(_bits(uncovered), key=lambda b: (len(containing[b]), b))
        for i in containing[bit]:
            chosen.append(i)
            search(uncovered & ~cands[i], chosen)
            chosen.pop()

    search(universe, [])
    return state["best"], root_lb


def _union(cands: Sequence[int]) -> int:
    u = 0
    for c in cands:
        u |= c
    return u


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _size_bound(uncovered: int, cands: Sequence[int]) -> int:
    n = popcount(uncovered)
    biggest = max((popcount(c & uncovered) for c in cands), default=0)
    if biggest == 0:
        return 0 if n == 0 else n
    return -(-n // biggest)
