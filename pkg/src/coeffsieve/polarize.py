"""Difference operators and polarization into multilinear forms."""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .coeffpoly import CoeffPoly
from .field import FieldCtx


class PolarizationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class MultiTensor:
    """A j-linear form on ``(F_q^k)^j``.

    ``entries[(i_1, .., i_j)]`` is the coefficient of
    ``x1[i_1] * x2[i_2] * ... * xj[i_j]``.
    """

    ctx: FieldCtx
    order: int
    dim: int
    entries: Mapping[tuple[int, ...], int]

    def __post_init__(self):
        clean = {}
        for idx, c in self.entries.items():
            idx = tuple(int(i) for i in idx)
            if len(idx) != self.order or any(not 0 <= i < self.dim for i in idx):
                raise ValueError(f"bad index {idx} for order {self.order}, dim {self.dim}")
            c = self.ctx.coerce(c)
            if c:
                clean[idx] = c
        object.__setattr__(self, "entries", clean)

    @classmethod
    def zero(cls, ctx: FieldCtx, order: int, dim: int) -> "MultiTensor":
        return cls(ctx, order, dim, {})

    @classmethod
    def from_dense(cls, ctx: FieldCtx, arr: np.ndarray) -> "MultiTensor":
        arr = np.asarray(arr)
        if len(set(arr.shape)) > 1:
            raise ValueError("all slots must have the same dimension")
        return cls(ctx, arr.ndim, arr.shape[0] if arr.ndim else 0,
                   {idx: int(arr[idx]) for idx in zip(*np.nonzero(arr))})

    @classmethod
    def from_matrix(cls, ctx: FieldCtx, M) -> "MultiTensor":
        return cls.from_dense(ctx, np.asarray(M, dtype=np.intp))

    def dense(self) -> np.ndarray:
        arr = np.zeros((self.dim,) * self.order, dtype=np.intp)
        for idx, c in self.entries.items():
            arr[idx] = c
        return arr

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def key(self) -> tuple:
        return (self.order, self.dim, tuple(sorted(self.entries.items())))

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiTensor):
            return NotImplemented
        return (self.ctx, self.order, self.dim, self.entries) == (other.ctx, other.order, other.dim, other.entries)

    def __hash__(self) -> int:
        return hash(self.key())

    def _check(self, other: "MultiTensor") -> None:
        if (other.ctx, other.order, other.dim) != (self.ctx, self.order, self.dim):
            raise ValueError("tensor shapes differ")

    def __add__(self, other: "MultiTensor") -> "MultiTensor":
        self._check(other)
        out = dict(self.entries)
        for idx, c in other.entries.items():
            out[idx] = self.ctx.add(out.get(idx, 0), c)
        return MultiTensor(self.ctx, self.order, self.dim, out)

    def scale(self, s) -> "MultiTensor":
        s = self.ctx.coerce(s)
        return MultiTensor(self.ctx, self.order, self.dim,
                           {i: self.ctx.mul(s, c) for i, c in self.entries.items()})

    def __sub__(self, other: "MultiTensor") -> "MultiTensor":
        return self + other.scale(self.ctx.neg(1))

    def permute(self, perm: Sequence[int]) -> "MultiTensor":
        """Slot permutation: the result evaluated at ``(x_1..x_j)`` equals this
        tensor at ``(x_perm[0], .., x_perm[j-1])``."""
        out = {}
        for idx, c in self.entries.items():
            new = [0] * self.order
            for t, s in enumerate(perm):
                new[s] = idx[t]
            out[tuple(new)] = c
        return MultiTensor(self.ctx, self.order, self.dim, out)

    def is_symmetric(self) -> bool:
        return all(self.permute(perm) == self for perm in itertools.permutations(range(self.order)))

    def __call__(self, *args) -> int:
        return tensor_eval(self, args)

    def all_values(self) -> np.ndarray:
        """Values at every point of ``(F_q^k)^j``, flattened in lexicographic order
        of ``(x1, .., xj)`` with each ``x_t`` in :func:`vectors` order."""
        return _all_values(self)

    def to_json(self) -> dict:
        return {"order": self.order, "dim": self.dim,
                "entries": [[list(idx), self.ctx.format_elem(c)] for idx, c in sorted(self.entries.items())]}

    def __repr__(self) -> str:
        return f"MultiTensor(order={self.order}, dim={self.dim}, entries={dict(sorted(self.entries.items()))})"


def tensor_from_json(ctx: FieldCtx, d: Mapping) -> MultiTensor:
    return MultiTensor(ctx, int(d["order"]), int(d["dim"]),
                       {tuple(idx): ctx.coerce(c) for idx, c in d["entries"]})


def vectors(q: int, k: int) -> np.ndarray:
    """All of F_q^k as rows, lexicographic with the first coordinate most significant."""
    if k == 0:
        return np.zeros((1, 0), dtype=np.intp)
    return np.array(list(itertools.product(range(q), repeat=k)), dtype=np.intp)


def tensor_eval(T: MultiTensor, args: Sequence[Sequence]) -> int:
    if len(args) != T.order or any(len(a) != T.dim for a in args):
        raise ValueError(f"need {T.order} vectors of length {T.dim}")
    ctx = T.ctx
    xs = [[ctx.coerce(v) for v in a] for a in args]
    acc = 0
    for idx, c in T.entries.items():
        t = c
        for slot, i in enumerate(idx):
            t = ctx.mul(t, xs[slot][i])
            if not t:
                break
        acc = ctx.add(acc, t)
    return acc


MAX_POINTS = 20_000_000


def _all_values(T: MultiTensor) -> np.ndarray:
    ctx, j, k = T.ctx, T.order, T.dim
    q = ctx.q
    if q ** (j * k) > MAX_POINTS:
        raise ValueError(f"q^(jk) = {q ** (j * k)} points exceed the enumeration guard")
    if j == 0:
        return np.array([T.entries.get((), 0)], dtype=np.intp)
    add, mul = ctx.add_table, ctx.mul_table
    X = vectors(q, k)                       # (q^k, k)
    cur = T.dense().reshape(1, k, -1)       # (batch, k, rest)
    for _ in range(j):
        # contract the leading slot of `cur` against every vector x
        B, _, rest = cur.shape
        acc = np.zeros((B, X.shape[0], rest), dtype=np.intp)
        for i in range(k):
            acc = add[acc, mul[X[None, :, i, None], cur[:, None, i, :]]]
        cur = acc.reshape(B * X.shape[0], k, -1) if rest > 1 else acc.reshape(-1, 1, 1)
    return cur.reshape(-1)


# -- difference operator and polarization -------------------------------------

def delta(R: CoeffPoly, base: int | None = None) -> CoeffPoly:
    """``R(a + h) - R(a)`` where ``a`` are the first ``base`` variables.

    The ``base`` fresh variables ``h`` are appended after all existing ones.
    """
    base = R.nvars if base is None else base
    N = R.nvars + base
    ctx = R.ctx
    forms = []
    for i in range(R.nvars):
        v = CoeffPoly.variable(ctx, N, i)
        if i < base:
            v = v + CoeffPoly.variable(ctx, N, R.nvars + i)
        forms.append(v)
    return R.substitute(forms) - R.with_extra_vars(base)


def polarization(R: CoeffPoly, k: int | None = None, order: int | None = None) -> MultiTensor:
    """The multilinear form obtained from ``order`` successive differences.

    ``order`` defaults to ``deg R``.  If ``deg R < order`` the result is the zero
    tensor.  The part depending on the base point is checked to vanish.
    """
    k = R.nvars if k is None else k
    if k != R.nvars:
        raise ValueError(f"R has {R.nvars} variables, slot dimension given as {k}")
    ctx = R.ctx
    deg = R.degree
    j = (deg if deg is not None else 0) if order is None else order
    if j < 1:
        raise PolarizationError("polarization needs at least one slot")
    if deg is not None and deg > j:
        raise PolarizationError(f"deg R = {deg} exceeds the number of slots {j}")
    if j >= ctx.p:
        warnings.warn(f"polarizing in degree {j} >= p = {ctx.p}: the diagonal identity fails here",
                      stacklevel=2)
    P = R
    for _ in range(j):
        P = delta(P, base=k)
    # layout: a (k vars), h_1 (k vars), ..., h_j (k vars)
    entries: dict[tuple[int, ...], int] = {}
    for mono, c in P.terms.items():
        if any(mono[:k]):
            raise PolarizationError(f"iterated difference still depends on the base point: {mono}")
        idx = []
        for t in range(j):
            block = mono[k * (t + 1): k * (t + 2)]
            if sum(block) != 1:
                raise PolarizationError(f"monomial {mono} is not multilinear in the slots")
            idx.append(block.index(1))
        entries[tuple(idx)] = ctx.add(entries.get(tuple(idx), 0), c)
    return MultiTensor(ctx, j, k, entries)


def polarization_by_symmetrization(R: CoeffPoly, order: int | None = None) -> MultiTensor:
    """Closed form of the polarization of the degree-``order`` part of ``R``:
    a monomial ``x_{i_1} ... x_{i_j}`` maps to the sum over all slot
    assignments of its factors."""
    ctx = R.ctx
    deg = R.degree
    j = (deg or 0) if order is None else order
    top = R.homogeneous_component(j)
    entries: dict[tuple[int, ...], int] = {}
    for mono, c in top.terms.items():
        factors = [i for i, e in enumerate(mono) for _ in range(e)]
        for perm in itertools.permutations(factors):
            entries[perm] = ctx.add(entries.get(perm, 0), c)
    return MultiTensor(ctx, j, R.nvars, entries)


def diagonal(T: MultiTensor) -> CoeffPoly:
    """``x -> T(x, .., x)`` as a homogeneous polynomial."""
    ctx, k = T.ctx, T.dim
    terms: dict[tuple[int, ...], int] = {}
    for idx, c in T.entries.items():
        mono = [0] * k
        for i in idx:
            mono[i] += 1
        terms[tuple(mono)] = ctx.add(terms.get(tuple(mono), 0), c)
    return CoeffPoly(ctx, k, terms)


def diagonal_identity_check(R: CoeffPoly, k: int | None = None, *, samples: int = 2000,
                            seed: int = 0) -> bool:
    """Check ``R°(x, .., x) == j! * R_top(x)`` pointwise, with ``j = deg R < p``.

    Exhaustive over F_q^k when ``q**k <= 10**5``, otherwise on seeded samples.
    """
    ctx = R.ctx
    k = R.nvars if k is None else k
    j = R.degree
    if j is None:
        return True
    if j >= ctx.p:
        raise PolarizationError(f"diagonal identity needs deg R = {j} < p = {ctx.p}")
    T = polarization(R, k)
    top = R.homogeneous_component(j)
    fact = ctx.coerce(math.factorial(j))
    if ctx.q ** k <= 10 ** 5:
        pts = vectors(ctx.q, k)
    else:
        pts = np.random.default_rng(seed).integers(0, ctx.q, size=(samples, k))
    lhs = diagonal(T).evaluate_many(pts)
    rhs = ctx.mul_table[fact, top.evaluate_many(pts)]
    return bool(np.array_equal(lhs, rhs))


def combine_tensors(tensors: Sequence[MultiTensor], scalars: Sequence[int]) -> MultiTensor:
    out = MultiTensor.zero(tensors[0].ctx, tensors[0].order, tensors[0].dim)
    for T, s in zip(tensors, scalars):
        if s:
            out = out + T.scale(s)
    return out
