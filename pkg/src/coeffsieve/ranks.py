"""Analytic rank, partition rank and the rank of polynomials and of tuples.

Partition rank and polynomial rank are found by exhaustive search over sums
of products.  Candidate vectors (tensors, or homogeneous forms in a monomial
basis) are encoded as base-q integers; ``L_h`` is the set of sums of at most
``h`` products, and ``x`` has rank at most ``a + b`` iff ``x - L_b`` meets
``L_a``.  An explicit slice decomposition gives an upper bound, so a failed
search up to ``ub - 1`` proves the rank is ``ub``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .charsum import CycInt
from .coeffpoly import CoeffPoly, all_monomials, linear_combination
from .field import FieldCtx
from .polarize import MultiTensor

DEFAULT_CAP = 10_000_000
INF = math.inf


class AnalyticRankError(ArithmeticError):
    """The exponential sum of a tensor was not a positive rational integer."""


@dataclass(frozen=True)
class RankValue:
    """A rank, possibly infinite.

    ``exact=False`` means the search hit its cap and ``value`` is only a lower
    bound.  ``degenerate`` marks the rank 0 of an identically zero polynomial
    reached through a nontrivial combination.
    """

    value: float
    exact: bool = True
    degenerate: bool = False
    upper: float | None = None

    @property
    def infinite(self) -> bool:
        return self.value == INF

    @property
    def exceeds_cap(self) -> bool:
        return not self.exact

    def __int__(self) -> int:
        if self.infinite:
            raise OverflowError("infinite rank")
        return int(self.value)

    def __str__(self) -> str:
        if self.infinite:
            return "inf"
        s = str(int(self.value))
        if not self.exact:
            s = ">=" + s
        return s + ("*" if self.degenerate else "")


# -- linear algebra ---------------------------------------------------------------

def matrix_rank(ctx: FieldCtx, M) -> int:
    """Rank over F_q by Gaussian elimination."""
    rows = [[ctx.coerce(int(x)) for x in row] for row in np.asarray(M).tolist()]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = ctx.inv(rows[rank][col])
        rows[rank] = [ctx.mul(inv, x) for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [ctx.sub(x, ctx.mul(f, y)) for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def quadratic_form_matrix(R: CoeffPoly) -> list[list[int]]:
    """Symmetric Gram matrix of the degree-2 part of ``R`` (needs p odd)."""
    ctx, n = R.ctx, R.nvars
    if not ctx.odd:
        raise ValueError("Gram matrices need odd characteristic")
    half = ctx.inv(2 % ctx.p)
    M = [[0] * n for _ in range(n)]
    for mono, c in R.homogeneous_component(2).terms.items():
        idx = [i for i, e in enumerate(mono) for _ in range(e)]
        i, j = idx
        if i == j:
            M[i][i] = c
        else:
            M[i][j] = M[j][i] = ctx.mul(c, half)
    return M


def diagonalize_symmetric(ctx: FieldCtx, M: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero diagonal entries of a congruent diagonal form (p odd)."""
    A = [list(row) for row in M]
    n = len(A)
    active = list(range(n))
    diag = []
    while active:
        piv = next((i for i in active if A[i][i]), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i != j and A[i][j]), None)
            if pair is None:
                break
            i, j = pair
            # e_i <- e_i + e_j; makes A[i][i] = 2 A[i][j] != 0
            for l in range(n):
                A[i][l] = ctx.add(A[i][l], A[j][l])
            for l in range(n):
                A[l][i] = ctx.add(A[l][i], A[l][j])
            piv = i
        d = A[piv][piv]
        dinv = ctx.inv(d)
        diag.append(d)
        active.remove(piv)
        for l in active:
            f = ctx.mul(A[l][piv], dinv)
            if f:
                for s in range(n):
                    A[l][s] = ctx.sub(A[l][s], ctx.mul(f, A[piv][s]))
                for s in range(n):
                    A[s][l] = ctx.sub(A[s][l], ctx.mul(f, A[s][piv]))
    return diag


def quadratic_rank_closed_form(R: CoeffPoly) -> int:
    """Least number of products of two linear forms summing to the quadratic
    part of ``R``, for odd q.

    With Gram rank r and Witt index w of the nondegenerate part the answer is
    ``r - w``: ``(r + 1) // 2`` for odd r, ``r // 2`` when the form is
    hyperbolic, ``r // 2 + 1`` otherwise.
    """
    ctx = R.ctx
    diag = diagonalize_symmetric(ctx, quadratic_form_matrix(R))
    r = len(diag)
    if r % 2:
        return (r + 1) // 2
    disc = ctx.pow(ctx.coerce(-1), r // 2)
    for d in diag:
        disc = ctx.mul(disc, d)
    return r // 2 if ctx.is_square(disc) else r // 2 + 1


# -- encoded vector spaces ----------------------------------------------------------

class CapExceeded(RuntimeError):
    pass


class _Space:
    """F_q^D with vectors encoded as int64 base-q codes."""

    def __init__(self, ctx: FieldCtx, D: int):
        if D * math.log2(ctx.q) >= 62:
            raise CapExceeded(f"vectors of length {D} over F_{ctx.q} do not fit in 64-bit codes")
        self.ctx, self.D = ctx, D
        self.weights = np.array([ctx.q ** i for i in range(D)], dtype=np.int64)

    def encode(self, digits: np.ndarray) -> np.ndarray:
        return np.asarray(digits, dtype=np.int64) @ self.weights

    def decode(self, codes: np.ndarray) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        return ((codes[..., None] // self.weights) % self.ctx.q).astype(np.intp)

    def sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Codes of ``a - b`` (broadcasting)."""
        return self.encode(self.ctx.sub_table[self.decode(a), self.decode(b)])

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.encode(self.ctx.add_table[self.decode(a), self.decode(b)])


def _projective_vectors(q: int, D: int) -> np.ndarray:
    """Nonzero vectors of F_q^D whose first nonzero coordinate is 1."""
    rows = []
    for lead in range(D):
        for tail in itertools.product(range(q), repeat=D - lead - 1):
            rows.append((0,) * lead + (1,) + tail)
    return np.array(rows, dtype=np.intp).reshape(len(rows), D)


def _nonzero_vectors(q: int, D: int) -> np.ndarray:
    return np.array(list(itertools.product(range(q), repeat=D))[1:], dtype=np.intp).reshape(-1, D)


class SumsetSearch:
    """Decides ``x in P + ... + P`` (r summands) for a fixed product set P."""

    def __init__(self, space: _Space, products: np.ndarray, cap: int):
        self.space = space
        self.cap = cap
        prods = np.unique(np.concatenate([[0], np.asarray(products, dtype=np.int64)]))
        self.levels = [np.array([0], dtype=np.int64), prods]

    def level(self, h: int) -> np.ndarray:
        while len(self.levels) <= h:
            prev, P = self.levels[-1], self.levels[1]
            if len(prev) * len(P) > self.cap:
                raise CapExceeded(f"level {len(self.levels)} needs {len(prev) * len(P)} sums")
            sums = np.concatenate([self.space.add(prev, P[i:i + 1]) for i in range(len(P))])
            self.levels.append(np.unique(sums))
        return self.levels[h]

    def within(self, x: int, r: int) -> bool:
        a = (r + 1) // 2
        La, Lb = self.level(a), self.level(r - a)
        if len(Lb) > self.cap:
            raise CapExceeded("meet-in-the-middle set too large")
        diff = self.space.sub(np.array([x], dtype=np.int64), Lb)
        idx = np.searchsorted(La, diff)
        idx[idx == len(La)] = 0
        return bool(np.any(La[idx] == diff))

    def rank(self, x: int, upper: int, r_max: int | None = None) -> RankValue:
        top = upper - 1 if r_max is None else min(upper - 1, r_max)
        r = 0
        try:
            for r in range(0, top + 1):
                if self.within(x, r):
                    return RankValue(r, upper=upper)
        except CapExceeded:
            return RankValue(r, exact=False, upper=upper)
        if top < upper - 1:
            return RankValue(top + 1, exact=False, upper=upper)
        return RankValue(upper, upper=upper)


# -- partition rank ------------------------------------------------------------

def _slot_bipartitions(j: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    out = []
    rest = list(range(1, j))
    for size in range(0, j - 1):
        for extra in itertools.combinations(rest, size):
            A = (0,) + extra
            B = tuple(s for s in range(j) if s not in A)
            out.append((A, B))
    return out


_PR_CACHE: dict = {}


def _pr_search(ctx: FieldCtx, j: int, k: int, cap: int) -> SumsetSearch:
    key = (ctx, j, k, cap)
    if key in _PR_CACHE:
        return _PR_CACHE[key]
    space = _Space(ctx, k ** j)
    mul = ctx.mul_table
    flat = list(itertools.product(range(k), repeat=j))
    chunks = []
    for A, B in _slot_bipartitions(j):
        nA, nB = k ** len(A), k ** len(B)
        U = _projective_vectors(ctx.q, nA)
        V = _nonzero_vectors(ctx.q, nB)
        if len(U) * len(V) > cap:
            raise CapExceeded(f"{len(U) * len(V)} products for slot split {A}|{B}")
        ia = np.array([np.ravel_multi_index([idx[s] for s in A], (k,) * len(A)) for idx in flat])
        ib = np.array([np.ravel_multi_index([idx[s] for s in B], (k,) * len(B)) for idx in flat])
        for start in range(0, len(U), max(1, 2_000_000 // max(1, len(V) * len(flat)))):
            Ub = U[start:start + max(1, 2_000_000 // max(1, len(V) * len(flat)))]
            ent = mul[Ub[:, None, ia], V[None, :, ib]]
            chunks.append(np.unique(space.encode(ent.reshape(-1, len(flat)))))
    search = SumsetSearch(space, np.concatenate(chunks), cap)
    _PR_CACHE[key] = search
    return search


def slice_upper_bound(T: MultiTensor) -> int:
    """Fewest nonzero slices along any slot; a decomposition of that length exists."""
    if T.is_zero:
        return 0
    return min(len({idx[t] for idx in T.entries}) for t in range(T.order))


def partition_rank(T: MultiTensor, r_max: int | None = None, cap: int = DEFAULT_CAP) -> RankValue:
    """Least r with T a sum of r products of multilinear forms on complementary
    nonempty slot sets.  Returns an inexact :class:`RankValue` if the search
    cannot finish within ``cap``."""
    if T.order < 2:
        raise ValueError("partition rank needs order >= 2")
    ub = slice_upper_bound(T)
    if ub == 0:
        return RankValue(0)
    if ub == 1:
        return RankValue(1, upper=1)
    try:
        search = _pr_search(T.ctx, T.order, T.dim, cap)
    except CapExceeded:
        return RankValue(1, exact=False, upper=ub)
    code = int(search.space.encode(T.dense().reshape(-1)))
    return search.rank(code, ub, r_max)


# -- rank of polynomials -----------------------------------------------------------

_SCHMIDT_CACHE: dict = {}


def _form_products(ctx: FieldCtx, nvars: int, j: int, cap: int) -> tuple[SumsetSearch, dict]:
    key = (ctx, nvars, j, cap)
    if key in _SCHMIDT_CACHE:
        return _SCHMIDT_CACHE[key]
    basis = all_monomials(nvars, j)
    pos = {m: i for i, m in enumerate(basis)}
    space = _Space(ctx, len(basis))
    add, mul = ctx.add_table, ctx.mul_table
    chunks = []
    for a in range(1, j // 2 + 1):
        ba, bb = all_monomials(nvars, a), all_monomials(nvars, j - a)
        U = _projective_vectors(ctx.q, len(ba))
        V = _nonzero_vectors(ctx.q, len(bb))
        if len(U) * len(V) > cap:
            raise CapExceeded(f"{len(U) * len(V)} products of degree {a} x {j - a} forms")
        step = max(1, 2_000_000 // max(1, len(V) * len(basis)))
        for start in range(0, len(U), step):
            Ub = U[start:start + step]
            out = np.zeros((len(Ub), len(V), len(basis)), dtype=np.intp)
            for s, m1 in enumerate(ba):
                for t, m2 in enumerate(bb):
                    o = pos[tuple(x + y for x, y in zip(m1, m2))]
                    out[:, :, o] = add[out[:, :, o], mul[Ub[:, None, s], V[None, :, t]]]
            chunks.append(np.unique(space.encode(out.reshape(-1, len(basis)))))
    search = SumsetSearch(space, np.concatenate(chunks), cap)
    _SCHMIDT_CACHE[key] = (search, pos)
    return _SCHMIDT_CACHE[key]


def schmidt_upper_bound(top: CoeffPoly) -> int:
    """Grouping monomials by their first variable writes a form of degree >= 2
    as a sum of that many products."""
    return len({next(i for i, e in enumerate(m) if e) for m in top.terms})


def schmidt_rank_search(R: CoeffPoly, r_max: int | None = None, cap: int = DEFAULT_CAP) -> RankValue:
    """Polynomial rank by exhaustive search (any characteristic)."""
    if R.is_zero:
        return RankValue(0, degenerate=True)
    j = R.degree
    if j < 2:
        return RankValue(INF)
    top = R.homogeneous_component(j)
    ub = schmidt_upper_bound(top)
    if ub == 1:
        return RankValue(1, upper=1)
    try:
        search, pos = _form_products(R.ctx, R.nvars, j, cap)
    except CapExceeded:
        return RankValue(1, exact=False, upper=ub)
    digits = np.zeros(len(pos), dtype=np.intp)
    for m, c in top.terms.items():
        digits[pos[m]] = c
    return search.rank(int(search.space.encode(digits)), ub, r_max)


@lru_cache(maxsize=200_000)
def schmidt_rank(R: CoeffPoly, r_max: int | None = None, cap: int = DEFAULT_CAP) -> RankValue:
    """Least r such that the top homogeneous component of ``R`` is a sum of r
    reducible homogeneous polynomials.

    Linear and nonzero constant polynomials have infinite rank; the zero
    polynomial gets rank 0 flagged as degenerate.  Quadratics over odd q use
    the closed form; everything else is searched.
    """
    if R.is_zero:
        return RankValue(0, degenerate=True)
    j = R.degree
    if j < 2:
        return RankValue(INF)
    if j == 2 and R.ctx.odd:
        return RankValue(quadratic_rank_closed_form(R))
    return schmidt_rank_search(R, r_max, cap)


def tuple_rank(polys: Sequence[CoeffPoly], S: Sequence[int] | None = None,
               r_max: int | None = None, cap: int = DEFAULT_CAP) -> RankValue:
    """Minimum rank over nontrivial linear combinations of ``polys[i-1]``, i in S.

    Only combinations whose first nonzero scalar is 1 are visited; rank is
    invariant under scaling so the minimum is unchanged.
    """
    S = sorted(S) if S is not None else list(range(1, len(polys) + 1))
    if not S:
        raise ValueError("S must be nonempty")
    chosen = [polys[i - 1] for i in S]
    ctx = chosen[0].ctx
    if any(P.nvars != chosen[0].nvars for P in chosen):
        raise ValueError("polynomials must share their variables")
    exact_min, bound_min, degenerate = INF, INF, False
    for scal in _projective_vectors(ctx.q, len(chosen)):
        rv = schmidt_rank(linear_combination(chosen, [int(s) for s in scal]), r_max, cap)
        if rv.degenerate:
            degenerate = True
        if rv.exact:
            exact_min = min(exact_min, rv.value)
        else:
            bound_min = min(bound_min, rv.value)
    if bound_min < exact_min:
        return RankValue(bound_min, exact=False, degenerate=degenerate)
    return RankValue(exact_min, degenerate=degenerate and exact_min == 0)


# -- analytic rank ------------------------------------------------------------------

def analytic_rank_sum(T: MultiTensor) -> int:
    """``sum_x psi_0(T(x))`` over ``(F_q^k)^j`` as an exact integer."""
    ctx = T.ctx
    z = CycInt.from_phases(ctx.p, ctx.trace_table[T.all_values()])
    val = z.as_integer()
    if val is None or val <= 0:
        raise AnalyticRankError(f"exponential sum {z.counts} is not a positive integer")
    return val


def analytic_rank(T: MultiTensor) -> float:
    """``-log_q(q^{-jk} sum_x psi_0(T(x)))``; exact when the sum is a power of q."""
    q = T.ctx.q
    N = T.order * T.dim
    s = analytic_rank_sum(T)
    a, rest = 0, s
    while rest % q == 0:
        rest //= q
        a += 1
    if rest == 1:
        return float(N - a)
    return N - math.log(s, q)


def analytic_rank_by_slices(T: MultiTensor) -> int:
    """Independent route to the exponential sum: summing over the last slot
    gives ``q^k`` times the number of ``(x_1..x_{j-1})`` annihilating T."""
    ctx, j, k = T.ctx, T.order, T.dim
    if j == 1:
        return ctx.q ** k if T.is_zero else 0
    zero = None
    for c in range(k):
        part = MultiTensor(ctx, j - 1, k, {idx[:-1]: v for idx, v in T.entries.items() if idx[-1] == c})
        vals = part.all_values() == 0
        zero = vals if zero is None else zero & vals
    return int(zero.sum()) * ctx.q ** k


@dataclass
class CMeasurement:
    c: float
    points: list[tuple[float, int]] = field(default_factory=list)


def measure_c(samples: Sequence[MultiTensor], r_max: int | None = None,
              cap: int = DEFAULT_CAP) -> CMeasurement:
    """Smallest AR/PR over a battery of tensors with finite, nonzero PR."""
    if not samples:
        raise ValueError("empty sample set")
    pts = []
    for T in samples:
        pr = partition_rank(T, r_max, cap)
        if not pr.exact:
            raise ValueError(f"partition rank of {T!r} exceeds the search cap")
        if pr.value < 1:
            raise ValueError("measure_c needs PR >= 1 for every sample")
        pts.append((analytic_rank(T), int(pr.value)))
    return CMeasurement(min(a / r for a, r in pts), pts)
