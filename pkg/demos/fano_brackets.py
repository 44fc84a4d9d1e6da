# Bracketing, covering and packing numbers of the Fano lines.
from fractions import Fraction as F

from gcfinite import instances
from gcfinite.covers import bracketing_number, covering_number, packing_number, pairwise_l1

cls, mu = instances.fano()  # 7 line indicators, uniform on 7 points

# any two lines meet in one point, so every pair is 4/7 apart in L1
print("distinct distances:", sorted(set(pairwise_l1(cls, mu).ravel().tolist())))

for eps in (F(1, 7), F(3, 7), F(4, 7), F(5, 7), F(6, 7), F(1)):
    b = bracketing_number(cls, eps, mu)
    c = covering_number(cls, eps, mu)
    print(f"eps={eps}: brackets {b.count} ({b.certified}), balls {c.count}")

# a ball around a point outside the class does better than any line
print("external centers, eps=3/7:", covering_number(cls, F(3, 7), mu, centers="external").count)
print("packing at 4/7:", packing_number(cls, F(4, 7), mu).count)

# the witnesses are real brackets
res = bracketing_number(cls, F(4, 7), mu)
for i, br in enumerate(res.witnesses):
    members = [f for f, j in enumerate(res.assignment) if j == i]
    print(i, members, "width", br.width(mu))
