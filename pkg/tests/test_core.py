from fractions import Fraction as F

import numpy as np
import pytest

from gcfinite.core import (
    DomainMismatch,
    FiniteDomain,
    FunctionClass,
    Levels,
    Measure,
    Partition,
    SetFamily,
    as_fraction,
    partition_generated_by,
    refine,
)


def test_as_fraction_parses_ratios_and_refuses_floats():
    assert as_fraction("3/7") == F(3, 7)
    assert as_fraction(2) == F(2)
    with pytest.raises(ValueError):
        as_fraction("0.5")
    with pytest.raises(TypeError):
        as_fraction(0.5)


def test_measure_must_sum_to_one_with_residual():
    Measure(np.array([F(1, 4), F(1, 4)], dtype=object), residual=F(1, 2))
    with pytest.raises(ValueError):
        Measure(np.array([F(1, 4), F(1, 4)], dtype=object))
    with pytest.raises(ValueError):
        Measure(np.array([F(-1, 4), F(5, 4)], dtype=object))


def test_measure_mass_and_integrate():
    mu = Measure.uniform(4)
    assert mu.mass([0, 1]) == F(1, 2)
    assert mu.integrate(np.array([F(1), F(0), F(2), F(1)], dtype=object)) == 1
    assert list(Measure.point_mass(3, 1).support) == [False, True, False]
    with pytest.raises(DomainMismatch):
        mu.integrate(np.zeros(3, dtype=object))


def test_approximate_measure():
    mu = Measure.uniform(3, exact=False)
    assert abs(mu.mass([0]) - 1 / 3) < 1e-15


def test_function_class_bounds():
    cls = FunctionClass.from_rows([[0, 1, F(1, 2)], [F(-1), 2, 0]])
    assert cls.kappa_minus == -1 and cls.kappa_plus == 2
    assert cls.n_functions == 2 and cls.size == 3


def test_set_family_roundtrip():
    fam = SetFamily.from_sets([{0, 1}, {2}], 3)
    assert fam.sets() == [frozenset({0, 1}), frozenset({2})]
    assert fam.to_function_class().values[0, 1] == 1


def test_partition_canonical_and_refine():
    p = Partition((5, 5, 2, 2, 9))
    assert p.labels == (0, 0, 1, 1, 2)
    q = Partition((0, 1, 1, 1, 1))
    r = refine(p, q)
    assert r.k == 4
    assert r.is_finer_than(p) and r.is_finer_than(q)
    assert not p.is_finer_than(r)
    assert Partition.trivial(4).k == 1 and Partition.discrete(4).k == 4


def test_partition_generated_by_sets():
    fam = SetFamily.from_sets([{0, 1}, {1, 2}], 4)
    pi = partition_generated_by(fam)
    # atoms: {0}, {1}, {2}, {3}
    assert pi.k == 4
    fam = SetFamily.from_sets([{0, 1}], 4)
    assert partition_generated_by(fam).k == 2


def test_levels():
    lv = Levels(F(1, 4), F(3, 4))
    assert lv.gap == F(1, 2)
    v = np.array([F(0), F(1, 4), F(1, 2), F(1)], dtype=object)
    assert list(lv.below(v)) == [True, False, False, False]
    assert list(lv.above(v)) == [False, False, False, True]
    with pytest.raises(ValueError):
        Levels(F(1), F(0))


def test_domain_labels():
    with pytest.raises(ValueError):
        FiniteDomain(2, ("a",))
    assert FiniteDomain(3).mask([1]).tolist() == [False, True, False]
