import itertools
import random
from fractions import Fraction as F

import mpmath
import numpy as np
import pytest
import sympy

from gcfinite.combinatorics import vc_dimension
from gcfinite.core import FunctionClass, SetFamily
from gcfinite.counterexample import (
    BlockStructure,
    CeilInverse,
    ConstantN,
    SizeCapExceeded,
    StepFunction,
    band_interval,
    band_of,
    block_measure,
    bound_detail,
    bound_term,
    bracketing_lower_bound,
    build_block_class,
    choose_subsequence,
    least_plane_order,
    parse_grid,
    parse_nspec,
    verify_blowup,
)
from gcfinite.covers import bracketing_number, crude_partition_from_brackets
from gcfinite.projective import build_plane

mpmath.mp.dps = 80


def mp_term(m, p, eps):
    """Oracle: the floor evaluated in high-precision floating point."""
    x = 1 - mpmath.mpf(eps.numerator) / eps.denominator / (mpmath.mpf(p.numerator) / p.denominator)
    return int(mpmath.floor(mpmath.log(m, 3) / 4 + mpmath.log(x, 3) / 2))


def oracle_prime_for(n):
    t = 3 ** (4 * n + 6)
    q = 2
    while q * q + q + 1 < t:
        q += 1
    return sympy.nextprime(q - 1)


def test_block_class_two_blocks():
    s = BlockStructure((2, 3))
    assert s.block_sizes == (7, 13) and s.offsets == (0, 7)
    dom, fam = build_block_class(s)
    assert dom.size == 20 and len(fam) == 20
    # block 0 is the Fano family itself
    fano = build_plane(2).incidence
    assert np.array_equal(fam.masks[:7, :7], fano) and not fam.masks[:7, 7:].any()
    assert vc_dimension(fam).value == 2


def test_block_class_vc_two_exhaustive_three_blocks():
    _, fam = build_block_class(BlockStructure((2, 3, 5)))
    assert vc_dimension(fam).value == 2
    # exhaustive: no triple of the 51 points is shattered
    sets = [frozenset(s) for s in fam.sets()]
    for pts in itertools.combinations(range(51), 3):
        traces = {tuple(x in s for x in pts) for s in sets}
        assert len(traces) < 8


def test_single_block_is_fano():
    _, fam = build_block_class(BlockStructure((2,)))
    assert np.array_equal(fam.masks, build_plane(2).incidence)


def test_structure_validation():
    with pytest.raises(ValueError):
        BlockStructure((3, 2))
    with pytest.raises(ValueError):
        BlockStructure((2, 4))
    with pytest.raises(ValueError):
        build_block_class(BlockStructure((2, 3), truncation=0))
    with pytest.raises(SizeCapExceeded):
        build_block_class(BlockStructure((2, 331)))


def test_block_measure():
    s = BlockStructure((2, 3))
    mu = block_measure(s, [F(1, 2), F(1, 2)])
    assert mu.weights[0] == F(1, 14) and mu.weights[-1] == F(1, 26)
    mu = block_measure(BlockStructure((2,)), [1])
    assert set(mu.weights.tolist()) == {F(1, 7)}
    mu = block_measure(s, [F(1, 2), F(1, 4)])
    assert mu.residual == F(1, 4)
    with pytest.raises(ValueError):
        block_measure(s, [F(-1, 2), F(1, 2)])
    with pytest.raises(ValueError):
        block_measure(s, [F(3, 4), F(1, 2)])


def test_choose_subsequence_constant_zero():
    sch = choose_subsequence(ConstantN(0), 1)
    assert sch.bands[0].threshold == 729
    assert (sch.bands[0].q, sch.bands[0].m) == (29, 871)


def test_choose_subsequence_constant_one():
    sch = choose_subsequence(ConstantN(1), 1)
    q = sch.bands[0].q
    assert q == oracle_prime_for(1) == 251
    assert q * q + q + 1 >= 59049 > 241 * 241 + 241 + 1


def test_primes_increase_and_dominate_thresholds():
    sch = choose_subsequence(CeilInverse(), 6)
    qs = [b.q for b in sch.bands]
    assert qs == sorted(qs) and len(set(qs)) == 6
    assert [b.n_star for b in sch.bands] == [3 * 2**k for k in range(1, 7)]
    for b in sch.bands:
        assert b.m >= b.threshold
        # least such prime (no smaller one forced by monotonicity here)
        q0 = least_plane_order(b.threshold)
        assert (q0 - 1) ** 2 + q0 < b.threshold
        assert sympy.isprime(b.q) and sympy.prevprime(b.q) < q0
    assert sch.residual == F(1, 64) and sum(sch.p) + sch.residual == 1


def test_band_arithmetic_matches_floor_log():
    rnd = random.Random(1)
    for _ in range(300):
        eps = F(rnd.randint(1, 10**6), 3 * 10**6 + 1)
        k = band_of(eps)
        assert k == int(mpmath.floor(mpmath.log(mpmath.mpf(2) / (3 * mpmath.mpf(eps.numerator) / eps.denominator), 2)))
        lo, hi = band_interval(k)
        assert lo < eps <= hi
    assert band_interval(1) == (F(1, 6), F(1, 3))
    with pytest.raises(ValueError):
        band_of(F(1, 3))


def test_bound_term_against_mpmath():
    assert bound_term(871, F(1), F(1, 10)) == mp_term(871, F(1), F(1, 10)) == 1
    rnd = random.Random(7)
    for _ in range(200):
        m = rnd.randint(7, 10**30)
        p = F(1, 2 ** rnd.randint(1, 6))
        eps = F(rnd.randint(1, 999), 3000)
        if eps >= p:
            assert bound_term(m, p, eps) is None
        else:
            assert bound_term(m, p, eps) == mp_term(m, p, eps)


def test_bound_is_clipped_and_monotone():
    sch = choose_subsequence(CeilInverse(), 6)
    grid = [F(i, 400) for i in range(2, 133)]
    values = [bracketing_lower_bound(sch, e) for e in grid]
    assert all(a >= b for a, b in zip(values, values[1:]))
    sch0 = choose_subsequence(ConstantN(0), 1)
    d = bound_detail(sch0, F(1, 4))
    # 871 * (1/2)^2 = 217.75 < 81^2, so the raw floor is 1
    assert d.raw == 1 and d.value == 1
    # 7 * (1/50)^2 < 1: a negative raw term
    assert bound_term(7, F(1, 2), F(49, 100)) == -2 == mp_term(7, F(1, 2), F(49, 100))
    assert bound_term(7, F(1, 2), F(1, 2)) is None


def test_bound_grows_with_nspec():
    e = F(1, 20)
    a = bracketing_lower_bound(choose_subsequence(ConstantN(1), 4), e)
    b = bracketing_lower_bound(choose_subsequence(CeilInverse(), 4), e)
    assert b >= a


def test_verify_blowup_ceil_inverse_grid():
    rep = verify_blowup(CeilInverse(), parse_grid("0.01:0.33:0.01"))
    assert len(rep.points) == 33 and rep.all_pass
    assert rep.points[0].eps == F(1, 100) and rep.points[0].bound >= 100
    assert all(pt.chain_slack >= 0 for pt in rep.points)
    assert rep.to_csv().splitlines()[0] == "eps,n_spec,bound,margin"


def test_verify_blowup_constant_one():
    assert verify_blowup(ConstantN(1), [F(1, 5), F(1, 50)]).all_pass


def test_nspec_parsing_and_validation():
    assert isinstance(parse_nspec("ceil-inv"), CeilInverse)
    assert parse_nspec("const:3")(F(1, 7)) == 3
    step = parse_nspec("step:1/100=50,1/10=5")
    assert step(F(1, 10)) == 5 and step(F(1, 20)) == 50
    assert step.sup_on(F(1, 10), F(1, 5)) == 5
    with pytest.raises(ValueError):
        StepFunction([(F(1, 10), 1), (F(1, 5), 2)])
    with pytest.raises(ValueError):
        parse_nspec("bogus")
    assert CeilInverse().sup_on(F(1, 6), F(1, 3)) == 6


def test_truncated_exact_bracketing_dominates_formula_and_crude_linkage():
    s = BlockStructure((2, 3))
    mu = block_measure(s, [F(1, 2), F(1, 4)])
    _, fam = build_block_class(s)
    cls = fam.to_function_class()
    sch_m = [(7, F(1, 2)), (13, F(1, 4))]
    for eps in (F(1, 10), F(1, 5), F(3, 10)):
        formula = max(0, max((t for t in (bound_term(m, p, eps) for m, p in sch_m) if t is not None), default=0))
        res = bracketing_number(cls, eps, mu)
        assert res.count >= formula
        pairs = [(np.asarray(b.lower == 1, dtype=bool), np.asarray(b.upper == 1, dtype=bool)) for b in res.witnesses]
        pi, worst = crude_partition_from_brackets(pairs, eps, mu, fam)
        assert pi.k <= 3 ** res.count and worst <= eps
