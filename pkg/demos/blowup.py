# A VC-dimension-two class whose bracketing numbers outgrow any target n(eps).
from fractions import Fraction as F

from gcfinite.combinatorics import vc_dimension
from gcfinite.counterexample import (
    BlockStructure,
    CeilInverse,
    ConstantN,
    build_block_class,
    choose_subsequence,
    parse_grid,
    verify_blowup,
)

_, fam = build_block_class(BlockStructure((2, 3, 5)))
print("points:", fam.size, "sets:", len(fam), "VC dimension:", vc_dimension(fam).value)

# target n = 0 still needs a block with m >= 3^6
print(choose_subsequence(ConstantN(0), 1).bands[0].to_dict())

sched = choose_subsequence(CeilInverse(), 6)
for b in sched.bands:
    print(b.k, b.n_star, "q has", len(str(b.q)), "digits", b.to_dict()["prime_certificate"])

rep = verify_blowup(CeilInverse(), parse_grid("0.01:0.33:0.01"))
print("all pass:", rep.all_pass)
print(rep.to_csv())
