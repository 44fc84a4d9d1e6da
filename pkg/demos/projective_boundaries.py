# How badly can a partition into few blocks cut the lines of a projective plane?
from fractions import Fraction as F

from gcfinite.core import Partition
from gcfinite.projective import alon_bound_check, build_plane, max_line_boundary, minimize_boundary

for q in (2, 3, 5, 7, 11, 13):
    print(q, build_plane(q).m, build_plane(q).axiom_report())

fano = build_plane(2)
print("discrete partition:", max_line_boundary(fano, Partition.discrete(7)))  # 0, but 7 blocks
print("one point split off:", max_line_boundary(fano, Partition((0, 1, 1, 1, 1, 1, 1))))
print("best with 2 blocks:", minimize_boundary(fano, 2))  # exhaustive

plane = build_plane(11)
for k in (1, 2, 3):
    s = minimize_boundary(plane, k, budget=100_000, seed=0)
    print(f"q=11 k={k}: {s.value} via {s.method}")
    for eps in (F(1, 10), F(1, 2)):
        print("   ", alon_bound_check(plane, eps, k, search=s).to_dict())
