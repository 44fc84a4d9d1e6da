import itertools
from fractions import Fraction as F

import numpy as np
import pytest

from gcfinite import instances
from gcfinite.core import FunctionClass, Measure
from gcfinite.covers import Bracket, bracketing_number, packing_number
from gcfinite.stochastic import (
    EmptyCell,
    NotStationary,
    Reducible,
    UncoveredFunction,
    all_ones_probability,
    blum_dehardt_bound,
    check_independence,
    convergence_study,
    coordinate_pairs,
    empirical_sup_deviation,
    gc_failure_demo,
    gc_failure_study,
    iid_run,
    marczewski_measure,
    sample_iid,
    stationary_demo,
)


def direct_intersection_mass(mu, pairs, S):
    """Oracle: sum the weights of points lying in every A_i, i in S."""
    total = F(0)
    for x in range(mu.size):
        if all(pairs[i][0][x] for i in S):
            total += mu.weights[x]
    return total


def test_marczewski_uniform_on_cube():
    size, pairs = coordinate_pairs(3)
    mu = marczewski_measure(size, pairs, F(1, 2))
    assert set(mu.weights.tolist()) == {F(1, 8)}
    assert direct_intersection_mass(mu, pairs, [0, 1, 2]) == F(1, 8)


def test_marczewski_degenerate_p0():
    size, pairs = coordinate_pairs(3)
    mu = marczewski_measure(size, pairs, 0)
    assert mu.weights[0] == 1 and all(mu.mass(a) == 0 for a, _ in pairs)


def test_marczewski_p_third_ten_pairs():
    size, pairs = coordinate_pairs(10)
    mu = marczewski_measure(size, pairs, F(1, 3))
    assert direct_intersection_mass(mu, pairs, [0, 1]) == F(1, 9)
    assert check_independence(mu, pairs, F(1, 3)).exact


def test_marczewski_uses_lowest_point_of_larger_cells():
    # points 0..3 realize the 2 patterns twice each
    pairs = [([1, 3], [0, 2])]
    mu = marczewski_measure(4, pairs, F(1, 4))
    assert mu.weights.tolist() == [F(3, 4), F(1, 4), 0, 0]


def test_marczewski_errors():
    with pytest.raises(ValueError, match="intersect"):
        marczewski_measure(3, [([0, 1], [1, 2])], F(1, 2))
    with pytest.raises(EmptyCell) as info:
        marczewski_measure(3, [([0], [1, 2]), ([0], [1, 2])], F(1, 2))
    assert info.value.pattern in {(1, 0), (0, 1)}


def test_packing_of_marczewski_indicators():
    size, pairs = coordinate_pairs(4)
    p = F(1, 3)
    mu = marczewski_measure(size, pairs, p)
    cls = FunctionClass.from_rows([[F(int(v)) for v in a] for a, _ in pairs])
    assert packing_number(cls, 2 * p * (1 - p), mu).count == 4


def test_sampler_determinism_and_point_mass():
    mu = Measure.uniform(7)
    assert np.array_equal(sample_iid(mu, 100, 5), sample_iid(mu, 100, 5))
    assert set(sample_iid(Measure.point_mass(4, 2), 50, 0).tolist()) == {2}


def test_sampler_uniform_counts():
    counts = np.bincount(sample_iid(Measure.uniform(7), 7000, 11), minlength=7)
    sigma = np.sqrt(7000 * (1 / 7) * (6 / 7))
    assert np.all(np.abs(counts - 1000) < 5 * sigma)


def test_sampler_frozen_prefix():
    # frozen output guards against silent changes to the sampling contract
    assert sample_iid(Measure.uniform(7), 8, 0).tolist() == FROZEN_PREFIX


def test_empirical_deviation_cases():
    const = FunctionClass.from_rows([[1, 1, 1]])
    assert empirical_sup_deviation(const, Measure.uniform(3), [0, 1]) == 0
    ind = FunctionClass.from_rows([[1, 0, 0]])
    assert empirical_sup_deviation(ind, Measure.uniform(3), [0, 0]) == F(2, 3)


def test_blum_dehardt_exact_brackets_equal_deviation():
    cls, mu = instances.fano()
    brackets = [Bracket(cls.values[i], cls.values[i]) for i in range(7)]
    s = sample_iid(mu, 200, 3)
    env = blum_dehardt_bound(brackets, mu, s, cls, list(range(7)))
    assert env == empirical_sup_deviation(cls, mu, s)


def test_blum_dehardt_global_bracket_and_uncovered():
    cls, mu = instances.fano()
    g = Bracket(np.zeros(7, dtype=object) + F(0), np.zeros(7, dtype=object) + F(1))
    s = sample_iid(mu, 100, 1)
    assert blum_dehardt_bound([g], mu, s, cls, [0] * 7) == 1
    with pytest.raises(UncoveredFunction):
        blum_dehardt_bound([Bracket(cls.values[0], cls.values[0])], mu, s, cls, [0] * 7)


def test_envelope_dominates_on_fano_runs():
    cls, mu = instances.fano()
    br = bracketing_number(cls, F(3, 7), mu)
    study = convergence_study(cls, mu, 2000, range(10), br)
    assert study.envelope_dominates
    run = iid_run(cls, mu, [10, 100, 1000], 4, br)
    assert run.to_csv().splitlines()[0] == "n,gamma_n,envelope"
    assert len(run.deviations) == 3


def test_gc_failure_small_cases():
    r = gc_failure_demo(1, 5, F(1, 2), 0)
    assert r.d == 1 and r.gamma <= F(1, 2)
    assert abs(all_ones_probability(10**4, 10, F(1, 2)) - 0.99994) < 1e-5
    # large n with small d: the event becomes rare
    st = gc_failure_study(4, 40, F(1, 2), range(50))
    assert st.frequency == 0
    with pytest.raises(ValueError):
        gc_failure_demo(10**5, 10**4, F(1, 2), 0)


def test_stationary_demo_cases():
    one = FunctionClass.from_rows([[1]])
    assert stationary_demo([[1]], [1], one, 100, 0).deviations[0] == 0
    two = FunctionClass.from_rows([[1, 0], [0, 1]])
    K = [[F(9, 10), F(1, 10)], [F(1, 10), F(9, 10)]]
    devs = sorted(float(stationary_demo(K, [F(1, 2), F(1, 2)], two, 10_000, s).deviations[0]) for s in range(20))
    assert devs[10] < 0.05
    with pytest.raises(NotStationary):
        stationary_demo(K, [F(1, 3), F(2, 3)], two, 10, 0)
    with pytest.raises(Reducible):
        stationary_demo([[1, 0], [0, 1]], [F(1, 2), F(1, 2)], two, 10, 0)


def test_iid_kernel_matches_iid_sampler_in_distribution():
    pi = [F(1, 4), F(3, 4)]
    cls = FunctionClass.from_rows([[1, 0]])
    mu = Measure(np.array(pi, dtype=object))
    a = sorted(float(stationary_demo([pi, pi], pi, cls, 400, s).deviations[0]) for s in range(60))
    b = sorted(float(empirical_sup_deviation(cls, mu, sample_iid(mu, 400, 1000 + s))) for s in range(60))
    for q in (15, 30, 45):
        assert abs(a[q] - b[q]) < 0.03


FROZEN_PREFIX = [5, 4, 3, 1, 2, 0, 0, 0]
