"""Sparse multivariate polynomials in the coefficients of a monic polynomial.

A :class:`CoeffPoly` in ``n`` variables is read as a function of the lower
coefficients ``(a_0, ..., a_{n-1})`` of a monic degree-``n`` polynomial.  The
leading coefficient is always 1 and is never a variable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .field import FieldCtx, FieldElement
from .upoly import UPoly

MAX_DEGREE = 8


class DegreeCapError(ValueError):
    """A product would exceed the total degree cap of 8."""


Monomial = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class CoeffPoly:
    ctx: FieldCtx
    nvars: int
    terms: Mapping[Monomial, int]

    def __post_init__(self):
        clean = {}
        for mono, c in self.terms.items():
            mono = tuple(int(x) for x in mono)
            if len(mono) != self.nvars:
                raise ValueError(f"monomial {mono} has {len(mono)} exponents, expected {self.nvars}")
            if any(x < 0 for x in mono):
                raise ValueError(f"negative exponent in {mono}")
            if sum(mono) > MAX_DEGREE:
                raise DegreeCapError(f"total degree {sum(mono)} exceeds cap {MAX_DEGREE}")
            c = self.ctx.coerce(c)
            if c:
                clean[mono] = c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def _raw(cls, ctx: FieldCtx, nvars: int, terms: dict) -> "CoeffPoly":
        # trusted: tuple monomials, index coefficients; zeros are dropped here
        obj = object.__new__(cls)
        object.__setattr__(obj, "ctx", ctx)
        object.__setattr__(obj, "nvars", nvars)
        object.__setattr__(obj, "terms", {m: c for m, c in terms.items() if c})
        return obj

    # constructors
    @classmethod
    def zero(cls, ctx: FieldCtx, nvars: int) -> "CoeffPoly":
        return cls(ctx, nvars, {})

    @classmethod
    def constant(cls, ctx: FieldCtx, nvars: int, c) -> "CoeffPoly":
        return cls(ctx, nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, ctx: FieldCtx, nvars: int, i: int) -> "CoeffPoly":
        mono = [0] * nvars
        mono[i] = 1
        return cls(ctx, nvars, {tuple(mono): 1})

    @classmethod
    def monomial(cls, ctx: FieldCtx, exps: Sequence[int], c=1) -> "CoeffPoly":
        return cls(ctx, len(exps), {tuple(exps): c})

    @classmethod
    def from_dict(cls, ctx: FieldCtx, nvars: int, terms: Mapping) -> "CoeffPoly":
        return cls(ctx, nvars, dict(terms))

    @classmethod
    def linear(cls, ctx: FieldCtx, coeffs: Sequence, const=0) -> "CoeffPoly":
        """``const + sum coeffs[i] * x_i``."""
        n = len(coeffs)
        terms = {(0,) * n: const}
        for i, c in enumerate(coeffs):
            mono = [0] * n
            mono[i] = 1
            terms[tuple(mono)] = c
        return cls(ctx, n, terms)

    # basic properties
    @property
    def degree(self) -> int | None:
        """Total degree; ``None`` for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=None)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def key(self) -> tuple:
        """Canonical hashable form (sorted terms)."""
        return (self.nvars, tuple(sorted(self.terms.items())))

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoeffPoly):
            return NotImplemented
        return self.ctx == other.ctx and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.key())

    def _check(self, other: "CoeffPoly") -> None:
        if other.ctx != self.ctx or other.nvars != self.nvars:
            raise ValueError("polynomials live in different rings")

    # arithmetic
    def __add__(self, other: "CoeffPoly") -> "CoeffPoly":
        self._check(other)
        out = dict(self.terms)
        add = self.ctx.add
        for m, c in other.terms.items():
            out[m] = add(out.get(m, 0), c)
        return CoeffPoly._raw(self.ctx, self.nvars, out)

    def __neg__(self) -> "CoeffPoly":
        neg = self.ctx.neg
        return CoeffPoly._raw(self.ctx, self.nvars, {m: neg(c) for m, c in self.terms.items()})

    def __sub__(self, other: "CoeffPoly") -> "CoeffPoly":
        return self + (-other)

    def scale(self, s) -> "CoeffPoly":
        s = self.ctx.coerce(s)
        mul = self.ctx.mul
        return CoeffPoly._raw(self.ctx, self.nvars, {m: mul(s, c) for m, c in self.terms.items()})

    def __mul__(self, other) -> "CoeffPoly":
        if not isinstance(other, CoeffPoly):
            return self.scale(other)
        self._check(other)
        if self.terms and other.terms and self.degree + other.degree > MAX_DEGREE:
            raise DegreeCapError(f"total degree {self.degree + other.degree} exceeds cap {MAX_DEGREE}")
        add, mul = self.ctx.add, self.ctx.mul
        out: dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                out[m] = add(out.get(m, 0), mul(c1, c2))
        return CoeffPoly._raw(self.ctx, self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "CoeffPoly":
        out = CoeffPoly.constant(self.ctx, self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    # evaluation
    def evaluate(self, point: Sequence) -> FieldElement:
        if len(point) != self.nvars:
            raise ValueError(f"point has length {len(point)}, expected {self.nvars}")
        ctx = self.ctx
        xs = [ctx.coerce(x) for x in point]
        acc = 0
        for mono, c in self.terms.items():
            t = c
            for x, k in zip(xs, mono):
                if k:
                    t = ctx.mul(t, ctx.pow(x, k))
            acc = ctx.add(acc, t)
        return FieldElement(ctx, acc)

    __call__ = evaluate

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """Vectorized evaluation at each row of an integer array ``(N, nvars)``."""
        points = np.asarray(points, dtype=np.intp)
        if points.ndim != 2 or points.shape[1] != self.nvars:
            raise ValueError(f"points must have shape (N, {self.nvars})")
        N = points.shape[0]
        ctx = self.ctx
        add, mul = ctx.add_table, ctx.mul_table
        powt = ctx.power_table(MAX_DEGREE)
        acc = np.zeros(N, dtype=np.intp)
        for mono, c in self.terms.items():
            t = np.full(N, c, dtype=np.intp)
            for i, k in enumerate(mono):
                if k:
                    t = mul[t, powt[points[:, i], k]]
            acc = add[acc, t]
        return acc

    # structure
    def homogeneous_component(self, d: int) -> "CoeffPoly":
        return CoeffPoly._raw(self.ctx, self.nvars, {m: c for m, c in self.terms.items() if sum(m) == d})

    def top_component(self) -> "CoeffPoly":
        d = self.degree
        return self if d is None else self.homogeneous_component(d)

    def substitute(self, forms: Sequence["CoeffPoly"]) -> "CoeffPoly":
        """Replace variable ``i`` by ``forms[i]`` (all forms share one ring)."""
        if len(forms) != self.nvars:
            raise ValueError(f"need {self.nvars} forms, got {len(forms)}")
        if not forms:
            return self
        ring = forms[0]
        for f in forms:
            ring._check(f)
        out = CoeffPoly.zero(self.ctx, ring.nvars)
        powers: dict[tuple[int, int], CoeffPoly] = {}

        def power(i: int, k: int) -> CoeffPoly:
            if (i, k) not in powers:
                powers[(i, k)] = forms[i] if k == 1 else power(i, k - 1) * forms[i]
            return powers[(i, k)]

        for mono, c in self.terms.items():
            t = CoeffPoly.constant(self.ctx, ring.nvars, c)
            for i, k in enumerate(mono):
                if k:
                    t = t * power(i, k)
            out = out + t
        return out

    def with_extra_vars(self, extra: int) -> "CoeffPoly":
        pad = (0,) * extra
        return CoeffPoly._raw(self.ctx, self.nvars + extra, {m + pad: c for m, c in self.terms.items()})

    # presentation
    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        """Terms by descending total degree, then descending exponent vector."""
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-x for x in t[0])))

    def to_json(self) -> list[dict]:
        return [{"monomial": list(m), "coeff": self.ctx.format_elem(c)} for m, c in self.sorted_terms()]

    def pretty(self, var: str = "a") -> str:
        if self.is_zero:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            factors = []
            for i, k in enumerate(mono):
                if k == 1:
                    factors.append(f"{var}{i}")
                elif k > 1:
                    factors.append(f"{var}{i}^{k}")
            lit = str(self.ctx.format_elem(c))
            if not factors:
                parts.append(lit)
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(lit + "*" + "*".join(factors))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"CoeffPoly({self.pretty()})"


def coeffpoly_from_json(ctx: FieldCtx, nvars: int, terms: Iterable[Mapping]) -> CoeffPoly:
    """Read ``[{"monomial": [e_0, ..], "coeff": literal}, ...]``."""
    out = CoeffPoly.zero(ctx, nvars)
    for t in terms:
        out = out + CoeffPoly(ctx, nvars, {tuple(t["monomial"]): ctx.coerce(t["coeff"])})
    return out


@dataclass(frozen=True)
class ConstraintSystem:
    """Constraints ``R_1 = ... = R_m = 0`` on monic polynomials of degree ``n``."""

    ctx: FieldCtx
    n: int
    polys: tuple[CoeffPoly, ...]

    def __post_init__(self):
        object.__setattr__(self, "polys", tuple(self.polys))
        if not self.polys:
            raise ValueError("a constraint system needs at least one polynomial")
        for i, R in enumerate(self.polys):
            if R.nvars != self.n:
                raise ValueError(f"constraint {i} has {R.nvars} variables, expected n = {self.n}")
            if R.ctx != self.ctx:
                raise ValueError(f"constraint {i} is over a different field")

    @property
    def m(self) -> int:
        return len(self.polys)

    def values(self, lowers: np.ndarray) -> np.ndarray:
        """``R_i`` at each row of lower coefficients; shape ``(m, N)``."""
        return np.stack([R.evaluate_many(lowers) for R in self.polys])

    def describe(self) -> list[str]:
        return [R.pretty() for R in self.polys]


def evaluate(R: CoeffPoly, point: Sequence) -> FieldElement:
    return R.evaluate(point)


def homogeneous_component(R: CoeffPoly, d: int) -> CoeffPoly:
    if d < 0:
        raise ValueError("degree must be nonnegative")
    return R.homogeneous_component(d)


def product_coefficient_forms(ctx: FieldCtx, g: UPoly, n: int) -> list[CoeffPoly]:
    """Coefficients ``c_0 .. c_{n-1}`` of ``f * g`` as affine forms in the lower
    coefficients of a monic ``f`` of degree ``n - deg g``."""
    if g.is_zero or not g.is_monic:
        raise ValueError("g must be monic")
    d = g.degree
    if d > n:
        raise ValueError(f"deg g = {d} exceeds n = {n}")
    k = n - d
    gc = g.coeffs
    forms = []
    for t in range(n):
        lin = [0] * k
        const = 0
        for s in range(max(0, t - d), min(k, t) + 1):
            coef = gc[t - s]
            if s == k:
                const = ctx.add(const, coef)
            else:
                lin[s] = ctx.add(lin[s], coef)
        forms.append(CoeffPoly.linear(ctx, lin, const))
    return forms


def compose_with_factor(R: CoeffPoly, g: UPoly, n: int | None = None) -> CoeffPoly:
    """The polynomial ``f -> R(f * g)`` in the ``n - deg g`` lower coefficients of ``f``."""
    n = R.nvars if n is None else n
    if n != R.nvars:
        raise ValueError(f"R has {R.nvars} variables but n = {n}")
    return R.substitute(product_coefficient_forms(R.ctx, g, n))


def compose_difference(R: CoeffPoly, g1: UPoly, g2: UPoly, k: int) -> CoeffPoly:
    """``f -> R(g1 f) - R(g2 f)`` for monic ``f`` of degree ``k``."""
    n = R.nvars
    if g1.degree != g2.degree:
        raise ValueError(f"deg g1 = {g1.degree} differs from deg g2 = {g2.degree}")
    if g1.degree != n - k:
        raise ValueError(f"deg g1 must be n - k = {n - k}, got {g1.degree}")
    return compose_with_factor(R, g1, n) - compose_with_factor(R, g2, n)


def linear_combination(polys: Sequence[CoeffPoly], scalars: Sequence) -> CoeffPoly:
    if len(polys) != len(scalars):
        raise ValueError("need one scalar per polynomial")
    if not polys:
        raise ValueError("empty combination")
    out = CoeffPoly.zero(polys[0].ctx, polys[0].nvars)
    for P, s in zip(polys, scalars):
        out = out + P.scale(s)
    return out


def max_degree_set(sys: ConstraintSystem) -> tuple[int, frozenset[int]]:
    """``(j, S)``: the top degree and the 1-based indices attaining it."""
    degs = [R.degree for R in sys.polys]
    if any(d is None for d in degs):
        raise ValueError("max_degree_set needs nonzero constraints")
    j = max(degs)
    return j, frozenset(i + 1 for i, d in enumerate(degs) if d == j)


def all_monomials(nvars: int, degree: int) -> list[Monomial]:
    """Exponent vectors of total degree exactly ``degree``, lexicographically descending."""
    out = [m for m in itertools.product(range(degree + 1), repeat=nvars) if sum(m) == degree]
    return sorted(out, reverse=True)
