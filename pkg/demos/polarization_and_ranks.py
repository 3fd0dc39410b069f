"""
Polarization, partition rank and analytic rank
==============================================

A degree-j polynomial polarizes to a symmetric j-linear form whose
diagonal is j! times the top-degree part.  The rank of that form is
compared two ways: combinatorially (partition rank, by bounded search) and
through the bias of its exponential sum (analytic rank).
"""

import numpy as np

from coeffsieve import CoeffPoly, MultiTensor, make_field
from coeffsieve.polarize import diagonal, polarization, tensor_eval
from coeffsieve.ranks import (analytic_rank, analytic_rank_sum, matrix_rank, measure_c,
                              partition_rank, schmidt_rank)

F5 = make_field(5)

# x0^2 + x1 x2: a nondegenerate quadratic form in three variables.
R = CoeffPoly(F5, 3, {(2, 0, 0): 1, (0, 1, 1): 1, (1, 0, 0): 3})
T = polarization(R)
print(T.dense())
print("diagonal:", diagonal(T).pretty(), " 2! * top:", R.homogeneous_component(2).scale(2).pretty())
print(tensor_eval(T, [[1, 0, 0], [1, 0, 0]]), tensor_eval(T, [[0, 1, 0], [0, 0, 1]]))

# Rank of the polynomial versus partition rank of its polarization.
print("schmidt:", schmidt_rank(R), " PR:", partition_rank(T))

# x^2 + y^2 over F_3 does not factor (-1 is a nonsquare), so its rank is 2.
F3 = make_field(3)
print(schmidt_rank(CoeffPoly(F3, 2, {(2, 0): 1, (0, 2): 1})))

# For bilinear forms all three notions agree with matrix rank.
rng = np.random.default_rng(0)
battery = []
for _ in range(200):
    M = rng.integers(0, 3, size=(3, 3))
    T = MultiTensor.from_matrix(F3, M)
    r = matrix_rank(F3, M)
    if r:
        assert analytic_rank_sum(T) == 3 ** (6 - r)
        assert partition_rank(T).value == r
        battery.append(T)
print("measured c on bilinear forms:", measure_c(battery).c)

# Trilinear forms over F_2 are where AR and PR come apart.
F2 = make_field(2, allow_even=True)
ratios = []
for _ in range(64):
    T = MultiTensor.from_dense(F2, rng.integers(0, 2, size=(2, 2, 2)))
    pr = partition_rank(T)
    if pr.value >= 1:
        ratios.append(analytic_rank(T) / pr.value)
print("min AR/PR on 2x2x2 trilinear forms over F_2:", min(ratios))
