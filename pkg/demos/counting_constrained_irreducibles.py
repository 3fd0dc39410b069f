"""
Counting irreducibles with a constrained coefficient
=====================================================

How many monic irreducible polynomials of degree n over F_q have a given
coefficient pattern?  For one polynomial constraint the naive guess is
I(n)/q.  Here we count exactly and look at the gap.
"""

import numpy as np

from coeffsieve import CoeffPoly, ConstraintSystem, make_field
from coeffsieve.bounds import count_constrained, deviation, expected_count
from coeffsieve.upoly import count_irreducible, irreducible_mask, monic_lower_array

F = make_field(5)

# Coefficient vectors of all monic cubics, in enumeration order, and the
# irreducible ones among them.
lowers = monic_lower_array(F.q, 3)
mask = irreducible_mask(F, 3)
print(lowers.shape, int(mask.sum()), count_irreducible(5, 3))

# The constraint a0*a1 = 0: constant or linear coefficient vanishes.
R = CoeffPoly(F, 3, {(1, 1, 0): 1})
sys = ConstraintSystem(F, 3, (R,))
print("I_3(a0 a1) =", count_constrained(sys), " I(3)/5 =", expected_count(sys),
      " deviation =", deviation(sys))

# Irreducibles of degree >= 2 never have a0 = 0, so the whole count comes
# from a1 = 0.  Check it directly on the array.
irr = lowers[mask]
print(np.sum(irr[:, 1] == 0), np.sum(irr[:, 0] == 0))

# Deviation as n grows, for a product and for a mixed-degree constraint.
for n in (3, 4, 5):
    for name, terms in [("a0a1", {(1, 1) + (0,) * (n - 2): 1}),
                        ("a0a1+a2", {(1, 1) + (0,) * (n - 2): 1, (0, 0, 1) + (0,) * (n - 3): 1})]:
        s = ConstraintSystem(F, n, (CoeffPoly(F, n, terms),))
        dev = deviation(s)
        print(f"n={n} {name:8s} I_n={count_constrained(s):5d}  dev={float(dev):8.2f}  "
              f"sqrt(q^n)={np.sqrt(5.0 ** n):7.2f}")
