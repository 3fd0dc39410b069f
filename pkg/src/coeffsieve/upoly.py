"""Univariate polynomials over F_q, monic families and the von Mangoldt weight.

Monic polynomials of degree n are enumerated in lexicographic order of their
lower coefficients ``(a_0, ..., a_{n-1})``.  Bulk routines work on integer
arrays of shape ``(q**n, n)`` holding those lower coefficients; row ``i`` is
the polynomial with index ``i`` (``a_0`` is the most significant digit).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np
from sympy import divisors
from sympy.functions.combinatorial.numbers import mobius

from .field import FieldCtx, FieldElement


@dataclass(frozen=True)
class UPoly:
    """Dense polynomial, coefficients low-to-high as field indices.

    Trailing zeros are stripped, so the zero polynomial has ``coeffs == ()``
    and ``degree is None``.
    """

    ctx: FieldCtx
    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c))

    @classmethod
    def from_list(cls, ctx: FieldCtx, coeffs) -> "UPoly":
        return cls(ctx, tuple(ctx.coerce(c) for c in coeffs))

    @classmethod
    def monic(cls, ctx: FieldCtx, lower: Sequence[int]) -> "UPoly":
        return cls(ctx, tuple(lower) + (1,))

    @property
    def degree(self) -> int | None:
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    @property
    def lower(self) -> tuple[int, ...]:
        """Coefficients ``a_0 .. a_{n-1}`` of a monic polynomial."""
        return self.coeffs[:-1]

    def coefficient(self, i: int) -> FieldElement:
        return FieldElement(self.ctx, self.coeffs[i] if i < len(self.coeffs) else 0)

    def __add__(self, other: "UPoly") -> "UPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return UPoly(self.ctx, tuple(self.ctx.add(x, y) for x, y in zip(a, b)))

    def __neg__(self) -> "UPoly":
        return UPoly(self.ctx, tuple(self.ctx.neg(x) for x in self.coeffs))

    def __sub__(self, other: "UPoly") -> "UPoly":
        return self + (-other)

    def __mul__(self, other: "UPoly") -> "UPoly":
        return multiply(self, other)

    def __divmod__(self, other: "UPoly") -> tuple["UPoly", "UPoly"]:
        return divide(self, other)

    def __call__(self, x):
        ctx = self.ctx
        acc = 0
        for c in reversed(self.coeffs):
            acc = ctx.add(ctx.mul(acc, ctx.coerce(x)), c)
        return FieldElement(ctx, acc)

    def __repr__(self) -> str:
        return f"UPoly({format_upoly(self)})"

    def pretty(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if not c:
                continue
            lit = str(self.ctx.format_elem(c))
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(lit)
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{lit}*{mono}")
        return " + ".join(terms)


def multiply(a: UPoly, b: UPoly) -> UPoly:
    ctx = a.ctx
    if a.is_zero or b.is_zero:
        return UPoly(ctx, ())
    out = [0] * (len(a.coeffs) + len(b.coeffs) - 1)
    for i, x in enumerate(a.coeffs):
        if x:
            for j, y in enumerate(b.coeffs):
                out[i + j] = ctx.add(out[i + j], ctx.mul(x, y))
    return UPoly(ctx, tuple(out))


def divide(a: UPoly, b: UPoly) -> tuple[UPoly, UPoly]:
    """Quotient and remainder; ``b`` must be nonzero."""
    if b.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    ctx = a.ctx
    r = list(a.coeffs)
    db = b.degree
    inv_lead = ctx.inv(b.coeffs[-1])
    quot = [0] * max(len(r) - db, 0)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i]
        if c:
            f = ctx.mul(c, inv_lead)
            quot[i - db] = f
            for s, bc in enumerate(b.coeffs):
                r[i - db + s] = ctx.sub(r[i - db + s], ctx.mul(f, bc))
    return UPoly(ctx, tuple(quot)), UPoly(ctx, tuple(r[:db]))


def enumerate_monic(ctx: FieldCtx, n: int) -> Iterator[UPoly]:
    """All ``q**n`` monic polynomials of degree ``n`` in lexicographic order."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    for lower in itertools.product(range(ctx.q), repeat=n):
        yield UPoly(ctx, lower + (1,))


def _check_nonconstant(f: UPoly) -> None:
    if f.degree is None or f.degree < 1:
        raise ValueError(f"expected a nonconstant polynomial, got {f!r}")


def is_irreducible(f: UPoly) -> bool:
    """Trial division by every monic polynomial of degree ``1..deg f // 2``."""
    _check_nonconstant(f)
    for d in range(1, f.degree // 2 + 1):
        for g in enumerate_monic(f.ctx, d):
            if divide(f, g)[1].is_zero:
                return False
    return True


def factor(f: UPoly) -> list[tuple[UPoly, int]]:
    """Factorization of a monic polynomial into monic irreducibles by trial division."""
    _check_nonconstant(f)
    if not f.is_monic:
        raise ValueError("factor expects a monic polynomial")
    out: list[tuple[UPoly, int]] = []
    rest = f
    d = 1
    while rest.degree is not None and rest.degree >= 2 * d:
        for g in enumerate_monic(f.ctx, d):
            r = 0
            while True:
                qt, rem = divide(rest, g)
                if not rem.is_zero:
                    break
                rest, r = qt, r + 1
            if r:
                out.append((g, r))
        d += 1
    if rest.degree:
        out.append((rest, 1))
    return sorted(out, key=lambda t: (t[0].degree, t[0].coeffs[::-1]))


def von_mangoldt(f: UPoly) -> int:
    """``deg P`` if ``f = P**r`` with ``P`` irreducible, else 0."""
    if f.is_zero or not f.is_monic:
        raise ValueError("von_mangoldt is defined on monic polynomials only")
    _check_nonconstant(f)
    fac = factor(f)
    return fac[0][0].degree if len(fac) == 1 else 0


def count_irreducible(q: int, n: int) -> int:
    """``I(n) = (1/n) sum_{d | n} mu(d) q^(n/d)``, exactly."""
    if n < 1:
        raise ValueError("n must be positive")
    total = sum(int(mobius(d)) * q ** (n // d) for d in divisors(n))
    assert total % n == 0
    return total // n


# -- bulk (numpy) routines ------------------------------------------------------

def monic_lower_array(q: int, n: int) -> np.ndarray:
    """Array of shape ``(q**n, n)``; row ``i`` holds ``(a_0, .., a_{n-1})`` of index ``i``."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.intp)
    idx = np.arange(q ** n, dtype=np.int64)
    out = np.empty((q ** n, n), dtype=np.intp)
    for col in range(n - 1, -1, -1):
        out[:, col] = idx % q
        idx //= q
    return out


def monic_index(q: int, lower: np.ndarray) -> np.ndarray:
    """Inverse of :func:`monic_lower_array` along the last axis."""
    lower = np.asarray(lower, dtype=np.int64)
    out = np.zeros(lower.shape[:-1], dtype=np.int64)
    for col in range(lower.shape[-1]):
        out = out * q + lower[..., col]
    return out


def mul_by_monic(ctx: FieldCtx, g: Sequence[int], h_lower: np.ndarray) -> np.ndarray:
    """Lower coefficients of ``g * h`` for a monic ``g`` and a batch of monic ``h``.

    ``g`` is the full coefficient tuple (leading 1 included); ``h_lower`` has
    shape ``(N, k)``.  Returns shape ``(N, k + deg g)``.
    """
    g = tuple(g)
    d = len(g) - 1
    N, k = h_lower.shape
    n = k + d
    add, mul = ctx.add_table, ctx.mul_table
    h_full = np.concatenate([h_lower, np.ones((N, 1), dtype=np.intp)], axis=1)
    out = np.zeros((N, n), dtype=np.intp)
    for t in range(n):
        acc = np.zeros(N, dtype=np.intp)
        for s in range(max(0, t - d), min(k, t) + 1):
            gc = g[t - s]
            if gc:
                acc = add[acc, mul[gc, h_full[:, s]]]
        out[:, t] = acc
    return out


@lru_cache(maxsize=None)
def irreducible_mask(ctx: FieldCtx, n: int) -> np.ndarray:
    """Boolean mask over M(n): True where irreducible.

    Sieve: every reducible monic of degree n is ``g * h`` with ``g``
    irreducible of degree ``d <= n // 2``, so all such products are struck out.
    """
    if n < 1:
        raise ValueError("n must be positive")
    q = ctx.q
    mask = np.ones(q ** n, dtype=bool)
    for d in range(1, n // 2 + 1):
        h_lower = monic_lower_array(q, n - d)
        for g in _irreducible_lowers(ctx, d):
            prod = mul_by_monic(ctx, tuple(g) + (1,), h_lower)
            mask[monic_index(q, prod)] = False
    mask.setflags(write=False)
    return mask


def _irreducible_lowers(ctx: FieldCtx, d: int) -> np.ndarray:
    return monic_lower_array(ctx.q, d)[irreducible_mask(ctx, d)]


def enumerate_irreducible(ctx: FieldCtx, n: int) -> list[UPoly]:
    """Monic irreducibles of degree ``n`` in lexicographic order."""
    return [UPoly(ctx, tuple(int(c) for c in row) + (1,)) for row in _irreducible_lowers(ctx, n)]


@lru_cache(maxsize=None)
def von_mangoldt_table(ctx: FieldCtx, n: int) -> np.ndarray:
    """Lambda(f) for every f in M(n), indexed like :func:`monic_lower_array`.

    Built from the sieve: for every irreducible P of degree d | n the power
    ``P**(n/d)`` receives weight d; everything else is 0.
    """
    q = ctx.q
    lam = np.zeros(q ** n, dtype=np.int64)
    for d in divisors(n):
        r = n // d
        for row in _irreducible_lowers(ctx, d):
            P = UPoly(ctx, tuple(int(c) for c in row) + (1,))
            f = P
            for _ in range(r - 1):
                f = multiply(f, P)
            lam[int(monic_index(q, np.array(f.lower)))] = d
    lam.setflags(write=False)
    return lam


def prime_power_correction(q: int, n: int) -> int:
    """``#{f in M(n): Lambda(f) > 0, f reducible} = sum_{r | n, r > 1} I(n / r)``."""
    return sum(count_irreducible(q, n // r) for r in divisors(n) if r > 1)


# -- text format ---------------------------------------------------------------

def format_upoly(f: UPoly) -> str:
    """Comma-separated coefficients low-to-high; extension coefficients as ``(c0 c1 ..)``."""
    ctx = f.ctx
    if ctx.e == 1:
        return ",".join(str(c) for c in f.coeffs) or "0"
    return ",".join("(" + " ".join(map(str, ctx.coords(c))) + ")" for c in f.coeffs) or "0"


def parse_upoly(ctx: FieldCtx, text: str) -> UPoly:
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial literal")
    items, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            items.append(cur)
            cur = ""
        else:
            cur += ch
    items.append(cur)
    coeffs = []
    for item in items:
        item = item.strip()
        if item.startswith("("):
            coeffs.append(ctx.from_coords([int(x) for x in item.strip("()").split()]))
        else:
            coeffs.append(ctx.coerce(int(item)))
    return UPoly(ctx, tuple(coeffs))
