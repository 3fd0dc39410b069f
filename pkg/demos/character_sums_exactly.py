"""
Character sums without floating point
=====================================

An additive character sum over F_q is a sum of p-th roots of unity, so it
is stored as a vector of counts: how often each root occurs.  Zero tests
and identities then become integer comparisons.
"""

from coeffsieve import CharTuple, CoeffPoly, ConstraintSystem, CycInt, make_field
from coeffsieve.bounds import count_constrained, orthogonality_aggregate, prime_char_sum
from coeffsieve.charsum import character, enumerate_char_tuples

F9 = make_field(3, 2)

# psi_c(x) = zeta_3^Tr(c x).  The nine characters of F_9 are distinct.
table = [[character(F9, c).phase(x) for x in range(9)] for c in range(9)]
for row in table:
    print(row)

# 1 + zeta + zeta^2 = 0 is detected exactly: all counts equal.
z = CycInt(3, (4, 4, 4))
print(z.is_zero(), z.magnitude())

# Sum of psi_1(a0) over irreducible quadratics over F_3, a0 being the
# constant coefficient.  The constants are 1, 2, 2.
F3 = make_field(3)
sys = ConstraintSystem(F3, 2, (CoeffPoly(F3, 2, {(1, 0): 1}),))
s = prime_char_sum(sys, CharTuple(F3, (1,)))
print(s.counts, round(s.magnitude(), 12))

# Summing over every character tuple counts solutions: the aggregate is
# q^m * I_n as an integer.
sys2 = ConstraintSystem(F3, 4, (CoeffPoly(F3, 4, {(0, 1, 1, 0): 1, (0, 0, 0, 0): 2}),
                                CoeffPoly(F3, 4, {(1, 0, 0, 0): 1, (0, 0, 0, 0): 1})))
agg = orthogonality_aggregate(sys2)
print(agg.as_integer(), 9 * count_constrained(sys2))
print(len(list(enumerate_char_tuples(F3, 2))))
