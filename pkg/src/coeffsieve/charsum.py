"""Additive characters of F_q and exact character sums.

The character with label ``c`` is ``psi_c(x) = exp(2 pi i Tr(c x) / p)``.  A
sum of character values is a cyclotomic integer ``sum_t counts[t] zeta_p^t``
and is carried exactly as the integer vector ``counts`` (:class:`CycInt`).
Products of character values become index additions mod p.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .coeffpoly import ConstraintSystem
from .field import FieldCtx
from .upoly import UPoly

_EPS = 2.0 ** -52


@dataclass(frozen=True)
class CycInt:
    """``sum_t counts[t] * zeta_p**t`` with exact integer counts.

    The representation is not unique: adding the same integer to every count
    leaves the value unchanged, since ``sum_t zeta_p**t = 0``.
    """

    p: int
    counts: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(x) for x in self.counts)
        if len(c) != self.p:
            raise ValueError(f"expected {self.p} counts, got {len(c)}")
        object.__setattr__(self, "counts", c)

    @classmethod
    def zero(cls, p: int) -> "CycInt":
        return cls(p, (0,) * p)

    @classmethod
    def integer(cls, p: int, n: int) -> "CycInt":
        return cls(p, (n,) + (0,) * (p - 1))

    @classmethod
    def root(cls, p: int, t: int) -> "CycInt":
        c = [0] * p
        c[t % p] = 1
        return cls(p, tuple(c))

    @classmethod
    def from_phases(cls, p: int, phases: np.ndarray, weights: np.ndarray | None = None) -> "CycInt":
        """Accumulate ``sum_k weights[k] * zeta**phases[k]``."""
        phases = np.asarray(phases).ravel()
        if weights is None:
            counts = np.bincount(phases, minlength=p)
        else:
            w = np.asarray(weights, dtype=np.int64).ravel()
            counts = np.zeros(p, dtype=np.int64)
            np.add.at(counts, phases, w)
        return cls(p, tuple(int(x) for x in counts))

    def _same(self, other: "CycInt") -> None:
        if other.p != self.p:
            raise ValueError("cyclotomic integers of different order")

    def __add__(self, other: "CycInt") -> "CycInt":
        self._same(other)
        return CycInt(self.p, tuple(a + b for a, b in zip(self.counts, other.counts)))

    def __neg__(self) -> "CycInt":
        return CycInt(self.p, tuple(-a for a in self.counts))

    def __sub__(self, other: "CycInt") -> "CycInt":
        return self + (-other)

    def __mul__(self, other) -> "CycInt":
        if isinstance(other, int):
            return CycInt(self.p, tuple(other * a for a in self.counts))
        self._same(other)
        p = self.p
        out = [0] * p
        for s, a in enumerate(self.counts):
            if a:
                for t, b in enumerate(other.counts):
                    out[(s + t) % p] += a * b
        return CycInt(p, tuple(out))

    __rmul__ = __mul__

    def conj(self) -> "CycInt":
        p = self.p
        return CycInt(p, tuple(self.counts[(-t) % p] for t in range(p)))

    def norm_sq(self) -> "CycInt":
        """``|z|^2 = z * conj(z)``, still exact."""
        return self * self.conj()

    def normalized(self) -> tuple[int, ...]:
        """Canonical counts: shifted so that the last entry is 0."""
        base = self.counts[-1]
        return tuple(a - base for a in self.counts)

    def is_zero(self) -> bool:
        return len(set(self.counts)) == 1

    def __eq__(self, other) -> bool:
        if isinstance(other, CycInt):
            return self.p == other.p and (self - other).is_zero()
        if isinstance(other, int):
            return self == CycInt.integer(self.p, other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.p, self.normalized()))

    def as_integer(self) -> int | None:
        """The rational integer this equals, or None if it is not one."""
        if len(set(self.counts[1:])) > 1:
            return None
        return self.counts[0] - (self.counts[1] if self.p > 1 else 0)

    def to_complex(self) -> complex:
        p = self.p
        re = math.fsum(a * math.cos(2 * math.pi * t / p) for t, a in enumerate(self.counts))
        im = math.fsum(a * math.sin(2 * math.pi * t / p) for t, a in enumerate(self.counts))
        return complex(re, im)

    def magnitude(self) -> float:
        """``|z|`` in floating point; exactly 0.0 when :meth:`is_zero`."""
        if self.is_zero():
            return 0.0
        k = self.as_integer()
        if k is not None:
            return float(abs(k))
        return abs(self.to_complex())

    def error_bound(self) -> float:
        """Bound on the absolute error of :meth:`magnitude`."""
        return 8 * self.p * _EPS * (1 + sum(abs(a) for a in self.counts))

    def to_json(self) -> dict:
        return {"counts": list(self.counts), "magnitude": self.magnitude()}


# -- characters ---------------------------------------------------------------

@dataclass(frozen=True)
class Character:
    ctx: FieldCtx
    c: int

    @property
    def trivial(self) -> bool:
        return self.c == 0

    def phase(self, x) -> int:
        """``Tr(c x)`` in ``range(p)``."""
        ctx = self.ctx
        return int(ctx.trace_table[ctx.mul(self.c, ctx.coerce(x))])

    def __call__(self, x) -> CycInt:
        return CycInt.root(self.ctx.p, self.phase(x))


def character(ctx: FieldCtx, c) -> Character:
    return Character(ctx, ctx.coerce(c))


def psi0(ctx: FieldCtx) -> Character:
    return Character(ctx, 1)


def char_value(chi: Character, x) -> CycInt:
    return chi(x)


@dataclass(frozen=True)
class CharTuple:
    ctx: FieldCtx
    labels: tuple[int, ...]

    @property
    def nontrivial(self) -> bool:
        return any(self.labels)

    @property
    def m(self) -> int:
        return len(self.labels)

    def restricted_trivial(self, S: Iterable[int]) -> bool:
        """True when every label with (1-based) index in ``S`` is 0."""
        return not any(self.labels[i - 1] for i in S)

    def phases(self, values: np.ndarray) -> np.ndarray:
        """``sum_i Tr(c_i * values[i]) mod p`` along the leading axis of ``values``."""
        ctx = self.ctx
        tr, mul = ctx.trace_table, ctx.mul_table
        out = np.zeros(values.shape[1:], dtype=np.intp)
        for c, v in zip(self.labels, values):
            if c:
                out = out + tr[mul[c, v]]
        return out % ctx.p

    def __str__(self) -> str:
        return "(" + ",".join(str(self.ctx.format_elem(c)).replace(" ", "") for c in self.labels) + ")"


def enumerate_char_tuples(ctx: FieldCtx, m: int, include_trivial: bool = True) -> Iterator[CharTuple]:
    """All tuples of labels, lexicographically; the trivial tuple comes first."""
    if m < 1:
        raise ValueError("m must be at least 1")
    for labels in itertools.product(range(ctx.q), repeat=m):
        if include_trivial or any(labels):
            yield CharTuple(ctx, labels)


def char_sum_from_values(ctx: FieldCtx, psis: CharTuple, values: np.ndarray,
                         weights: np.ndarray | None = None) -> CycInt:
    """``sum_k w_k prod_i psi_i(values[i, k])`` for precomputed constraint values."""
    return CycInt.from_phases(ctx.p, psis.phases(np.asarray(values)), weights)


def weighted_char_sum(sys: ConstraintSystem, psis: CharTuple, family: Sequence[UPoly],
                      weight: Callable[[UPoly], int] | None = None) -> CycInt:
    """``sum_f weight(f) prod_i psi_i(R_i(f))`` over a family of monic polynomials."""
    family = list(family)
    if not family:
        return CycInt.zero(sys.ctx.p)
    for f in family:
        if not f.is_monic or f.degree != sys.n:
            raise ValueError(f"family members must be monic of degree {sys.n}")
    lowers = np.array([f.lower for f in family], dtype=np.intp).reshape(len(family), sys.n)
    w = None if weight is None else np.array([weight(f) for f in family], dtype=np.int64)
    return char_sum_from_values(sys.ctx, psis, sys.values(lowers), w)


def magnitude(z: CycInt) -> float:
    return z.magnitude()


def cyc_to_complex_batch(counts: np.ndarray) -> np.ndarray:
    """Complex values of many count vectors at once (last axis has length p)."""
    p = counts.shape[-1]
    zeta = np.exp(2j * np.pi * np.arange(p) / p)
    return counts @ zeta


def batch_magnitudes(counts: np.ndarray) -> np.ndarray:
    """Magnitudes of many count vectors; rows with all-equal counts give exactly 0."""
    counts = np.asarray(counts, dtype=np.int64)
    mags = np.abs(cyc_to_complex_batch(counts.astype(np.float64)))
    flat = (counts == counts[..., :1]).all(axis=-1)
    mags[flat] = 0.0
    return mags


def batch_error_bound(counts: np.ndarray) -> float:
    counts = np.asarray(counts)
    p = counts.shape[-1]
    return float(np.sum(8 * p * _EPS * (1 + np.abs(counts).sum(axis=-1))))
