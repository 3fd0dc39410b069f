"""Irreducible polynomials over finite fields with constrained coefficients.

Exact counts, additive character sums, polarization and tensor ranks, and
the rank-weighted bound on the number of irreducibles whose coefficient
vector lies on a variety.
"""

__version__ = "0.1.0"

from .bounds import (BoundEngine, InvariantViolation, VaughanParams, count_constrained, deviation,
                     expected_count, lambda_char_sum, orthogonality_aggregate, prime_char_sum,
                     s1_theorem, s2_theorem, sigma1, sigma2, theorem_rhs, valid_params,
                     vaughan_lhs)
from .charsum import (CharTuple, Character, CycInt, char_sum_from_values, character,
                      enumerate_char_tuples, psi0, weighted_char_sum)
from .coeffpoly import (CoeffPoly, ConstraintSystem, compose_difference, compose_with_factor,
                        homogeneous_component, max_degree_set, product_coefficient_forms)
from .field import EvenCharacteristicError, FieldCtx, FieldElement, FieldError, make_field, trace
from .polarize import MultiTensor, delta, diagonal, polarization, polarization_by_symmetrization
from .ranks import (RankValue, analytic_rank, matrix_rank, measure_c, partition_rank,
                    schmidt_rank, tuple_rank)
from .report import BoundReport, full_report
from .upoly import (UPoly, count_irreducible, enumerate_irreducible, enumerate_monic,
                    is_irreducible, von_mangoldt)

__all__ = [
    "BoundEngine", "BoundReport", "CharTuple", "Character", "CoeffPoly", "ConstraintSystem",
    "CycInt", "EvenCharacteristicError", "FieldCtx", "FieldElement", "FieldError",
    "InvariantViolation", "MultiTensor", "RankValue", "UPoly", "VaughanParams",
    "analytic_rank", "char_sum_from_values", "character", "compose_difference",
    "compose_with_factor", "count_constrained", "count_irreducible", "delta", "deviation",
    "diagonal", "enumerate_char_tuples", "enumerate_irreducible", "enumerate_monic",
    "expected_count", "full_report", "homogeneous_component", "is_irreducible",
    "lambda_char_sum", "make_field", "matrix_rank", "max_degree_set", "measure_c",
    "orthogonality_aggregate", "partition_rank", "polarization",
    "polarization_by_symmetrization", "prime_char_sum", "product_coefficient_forms", "psi0",
    "s1_theorem", "s2_theorem", "schmidt_rank", "sigma1", "sigma2", "theorem_rhs", "trace",
    "tuple_rank", "valid_params", "vaughan_lhs", "von_mangoldt", "weighted_char_sum",
]
