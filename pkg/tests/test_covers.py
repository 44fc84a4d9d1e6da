from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from strategies import class_and_measure
from gcfinite import instances
from gcfinite.core import FunctionClass, Measure, Partition, SetFamily
from gcfinite.covers import (
    Bracket,
    CapExceeded,
    brackets_from_partition,
    bracketing_number,
    canonical_bracket,
    center_radius,
    covering_number,
    crude_partition_from_brackets,
    essential_boundary,
    packing_number,
    pairwise_l1,
    set_boundary,
)

# frozen from the brute-force set-partition oracle on the difference-set Fano plane
FANO_BRACKETING = {
    F(1, 7): 7, F(2, 7): 7, F(3, 7): 7, F(55, 98): 7,
    F(4, 7): 4, F(5, 7): 4, F(6, 7): 2, F(1): 1,
}


def fano_oracle_rows():
    return [[F(int(x in line)) for x in range(7)] for line in oracles.fano_lines()]


@pytest.mark.parametrize("eps,expected", sorted(FANO_BRACKETING.items()))
def test_fano_bracketing_table(eps, expected):
    cls, mu = instances.fano()
    res = bracketing_number(cls, eps, mu)
    assert res.count == expected and res.certified == "exact"
    assert oracles.brute_bracketing(fano_oracle_rows(), [F(1, 7)] * 7, eps) == expected
    for f, i in enumerate(res.assignment):
        assert res.witnesses[i].contains(cls.values[f])
        assert res.witnesses[i].width(mu) <= eps


def test_fano_distances_and_packing():
    cls, mu = instances.fano()
    d = pairwise_l1(cls, mu)
    off = d[~np.eye(7, dtype=bool)]
    assert set(off.tolist()) == {F(4, 7)}
    assert packing_number(cls, F(4, 7), mu).count == 7
    assert covering_number(cls, F(1, 5), mu).count == 7
    assert covering_number(cls, F(4, 7), mu).count == 1


def test_fano_external_covering():
    cls, mu = instances.fano()
    assert covering_number(cls, F(2, 7), mu, centers="external").count == 3
    assert covering_number(cls, F(3, 7), mu, centers="external").count == 1


def test_center_radius_certificate_is_tight_on_two_points():
    rows = np.array([[F(0), F(0)], [F(1), F(1)]], dtype=object)
    w = np.array([F(1, 2), F(1, 2)], dtype=object)
    lo, hi, c = center_radius(rows, w)
    assert lo == hi == F(1, 2)


def test_bracket_rejects_crossed_endpoints():
    with pytest.raises(ValueError):
        Bracket(np.array([F(1)]), np.array([F(0)]))


def test_greedy_bracketing_upper_bounds_exact():
    cls, mu = instances.fano()
    for eps in FANO_BRACKETING:
        assert bracketing_number(cls, eps, mu, mode="greedy").count >= FANO_BRACKETING[eps]


def test_caps():
    cls = FunctionClass.from_rows([[F(i % 3, 2), F(i % 5, 4)] for i in range(30)])
    with pytest.raises(CapExceeded):
        covering_number(cls, F(1, 10), Measure.uniform(2))


@settings(max_examples=80, deadline=None)
@given(class_and_measure(max_functions=7, max_points=6), st.integers(1, 8))
def test_bracketing_matches_partition_oracle(cm, e):
    cls, mu = cm
    eps = F(e, 8)
    rows = [list(r) for r in cls.values]
    assert bracketing_number(cls, eps, mu).count == oracles.brute_bracketing(rows, list(mu.weights), eps)


@settings(max_examples=60, deadline=None)
@given(class_and_measure(max_functions=6, max_points=6), st.integers(1, 8))
def test_covering_matches_oracle(cm, e):
    cls, mu = cm
    eps = F(e, 8)
    rows = [list(r) for r in cls.values]
    w = list(mu.weights)
    res = covering_number(cls, eps, mu)
    assert res.count == oracles.brute_internal_covering(rows, w, eps)
    assert res.lower_bound <= res.count
    assert packing_number(cls, eps, mu).count <= oracles.brute_max_packing(rows, w, eps - F(1, 10**9))


def test_essential_boundary_ignores_null_blocks():
    mu = Measure(np.array([F(1, 2), F(1, 2), F(0), F(0)], dtype=object))
    pi = Partition((0, 0, 1, 1))
    # block 1 holds both sets but carries no mass
    assert not essential_boundary(pi, [0, 2], [1, 3], mu)[2:].any()
    assert essential_boundary(pi, [0, 2], [1, 3], mu)[:2].all()


def test_set_boundary():
    pi = Partition((0, 0, 1, 1, 2))
    assert set_boundary(pi, [0, 2]).tolist() == [True, True, True, True, False]
    assert not set_boundary(pi, [0, 1]).any()


def test_brackets_from_partition_discrete_is_exact_scale():
    cls, mu = instances.fano()
    ab = brackets_from_partition(cls, mu, Partition.discrete(7), F(1, 4), F(1, 4))
    assert all(m == 0 for m in ab.xi_mass)
    assert ab.bound_applies() and ab.within_bound()
    for f, i in enumerate(ab.assignment):
        assert ab.brackets[i].contains(cls.values[f])


def test_brackets_from_trivial_partition_blow_up():
    cls, mu = instances.fano()
    ab = brackets_from_partition(cls, mu, Partition.trivial(7), F(1, 4), F(1, 4))
    assert all(m == 1 for m in ab.xi_mass)
    assert not ab.bound_applies()


def test_crude_partition_from_fano_brackets():
    cls, mu = instances.fano()
    fam = SetFamily(cls.values == 1)
    res = bracketing_number(cls, F(4, 7), mu)
    pairs = [(np.asarray(b.lower == 1, dtype=bool), np.asarray(b.upper == 1, dtype=bool)) for b in res.witnesses]
    pi, worst = crude_partition_from_brackets(pairs, F(4, 7), mu, fam)
    assert pi.k <= 3 ** res.count and worst <= F(4, 7)


def test_canonical_bracket():
    cls = FunctionClass.from_rows([[0, 1], [1, 0]])
    b = canonical_bracket(cls, [0, 1])
    assert list(b.lower) == [0, 0] and list(b.upper) == [1, 1]
