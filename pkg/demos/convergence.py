# Uniform convergence on a finite class, and its failure for a growing family.
from fractions import Fraction as F

from gcfinite import instances
from gcfinite.core import FunctionClass
from gcfinite.covers import bracketing_number
from gcfinite.stochastic import (
    convergence_study,
    coordinate_pairs,
    gc_failure_study,
    iid_run,
    marczewski_measure,
    stationary_demo,
)

cls, mu = instances.fano()
br = bracketing_number(cls, F(4, 7), mu)
run = iid_run(cls, mu, [10, 100, 1000, 10_000], seed=1, brackets=br)
print(run.to_csv())  # the envelope stays above gamma_n and settles below 4/7

study = convergence_study(cls, mu, 10_000, range(50))
print("median gamma over 50 seeds:", float(study.median))

# d coordinates, n draws: some coordinate is all ones with probability 1-(1-2^-n)^d
st = gc_failure_study(10_000, 10, F(1, 2), range(100))
print("event frequency", st.frequency, "analytic", st.runs[0].analytic_probability)

# independent events with prescribed probability
size, pairs = coordinate_pairs(4)
m = marczewski_measure(size, pairs, F(1, 3))
print("mu(A_0 & A_1) =", m.mass(pairs[0][0] & pairs[1][0]))

# a sticky two-state chain still averages out
K = [[F(9, 10), F(1, 10)], [F(1, 10), F(9, 10)]]
two = FunctionClass.from_rows([[1, 0], [0, 1]])
print(stationary_demo(K, [F(1, 2), F(1, 2)], two, [100, 1000, 10_000], seed=0).to_csv())
