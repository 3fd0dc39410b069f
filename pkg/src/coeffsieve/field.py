"""Finite fields F_q = F_p[t]/(modulus) in the power basis.

Elements are encoded as integers in ``range(q)``: the element with
coordinates ``(c_0, ..., c_{e-1})`` (meaning ``c_0 + c_1 t + ...``) has index
``sum(c_i * p**i)``.  So the prime subfield occupies indices ``0..p-1`` and
``enumerate_field`` returns elements in index order.

All arithmetic goes through precomputed tables, which is cheap at the sizes
this package targets (q up to about 100) and lets numpy vectorize every
evaluation with fancy indexing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from sympy import isprime


class FieldError(ValueError):
    """Invalid field description."""


class EvenCharacteristicError(FieldError):
    """Characteristic 2 requested without ``allow_even=True``."""


# -- helpers on polynomials over F_p, lists low-to-high ---------------------

def _strip(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic polynomial ``m`` over F_p."""
    r = [x % p for x in a]
    dm = len(m) - 1
    for i in range(len(r) - 1, dm - 1, -1):
        c = r[i]
        if c:
            for s in range(dm + 1):
                r[i - dm + s] = (r[i - dm + s] - c * m[s]) % p
    return _strip(r[:dm] if len(r) > dm else r)


def _fp_is_irreducible(m: Sequence[int], p: int) -> bool:
    e = len(m) - 1
    if e <= 0:
        return False
    if e == 1:
        return True
    for d in range(1, e // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _fp_mod(m, list(low) + [1], p):
                return False
    return True


def first_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically first monic irreducible of degree ``e`` over F_p.

    Candidates ``c_0 + c_1 t + ... + t^e`` are scanned in lexicographic order
    of ``(c_0, ..., c_{e-1})``.
    """
    for low in itertools.product(range(p), repeat=e):
        m = list(low) + [1]
        if _fp_is_irreducible(m, p):
            return tuple(m)
    raise FieldError(f"no irreducible polynomial of degree {e} over F_{p}")  # pragma: no cover


# -- field context ------------------------------------------------------------

@dataclass(frozen=True)
class FieldCtx:
    """Arithmetic context for F_q with q = p**e.

    Construct through :func:`make_field`, which validates the modulus.
    """

    p: int
    e: int
    modulus: tuple[int, ...]
    allow_even: bool = field(default=False, compare=False)

    @property
    def q(self) -> int:
        return self.p ** self.e

    @property
    def odd(self) -> bool:
        return self.p != 2

    def __repr__(self) -> str:
        if self.e == 1:
            return f"FieldCtx(F_{self.p})"
        return f"FieldCtx(F_{self.q}, modulus={list(self.modulus)})"

    # coordinates <-> index
    def coords(self, x: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.e):
            x, r = divmod(x, self.p)
            out.append(r)
        return tuple(out)

    def from_coords(self, coords: Sequence[int]) -> int:
        if len(coords) > self.e:
            raise FieldError(f"expected at most {self.e} coordinates, got {len(coords)}")
        return sum((c % self.p) * self.p ** i for i, c in enumerate(coords))

    def _mul_coords(self, a: int, b: int) -> int:
        ca, cb = self.coords(a), self.coords(b)
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] += x * y
        return self.from_coords(_fp_mod(prod, self.modulus, self.p))

    # tables (numpy for vectorized use, nested lists for scalar use)
    @cached_property
    def add_table(self) -> np.ndarray:
        q, p = self.q, self.p
        coords = np.array([self.coords(x) for x in range(q)], dtype=np.int64).reshape(q, self.e)
        s = (coords[:, None, :] + coords[None, :, :]) % p
        weights = p ** np.arange(self.e, dtype=np.int64)
        return (s @ weights).astype(np.intp)

    @cached_property
    def mul_table(self) -> np.ndarray:
        q = self.q
        t = np.zeros((q, q), dtype=np.intp)
        for a in range(1, q):
            for b in range(a, q):
                t[a, b] = t[b, a] = self._mul_coords(a, b)
        return t

    @cached_property
    def neg_table(self) -> np.ndarray:
        return np.argmin(self.add_table, axis=1).astype(np.intp)

    @cached_property
    def inv_table(self) -> np.ndarray:
        """Multiplicative inverses; entry 0 is 0 and must never be used."""
        inv = np.zeros(self.q, dtype=np.intp)
        rows, cols = np.nonzero(self.mul_table == 1)
        inv[rows] = cols
        return inv

    @cached_property
    def sub_table(self) -> np.ndarray:
        return self.add_table[:, self.neg_table]

    @cached_property
    def trace_table(self) -> np.ndarray:
        """``Tr(x) = x + x^p + ... + x^(p^(e-1))`` as an integer in ``range(p)``."""
        tr = np.zeros(self.q, dtype=np.intp)
        for x in range(self.q):
            acc, y = 0, x
            for _ in range(self.e):
                acc = self.add(acc, y)
                y = self.pow(y, self.p)
            if acc >= self.p:
                raise FieldError(f"trace of {x} left the prime field")  # pragma: no cover
            tr[x] = acc
        return tr

    @cached_property
    def _lists(self):
        return (self.add_table.tolist(), self.mul_table.tolist(),
                self.neg_table.tolist(), self.inv_table.tolist())

    def power_table(self, max_exp: int) -> np.ndarray:
        """Array ``P[x, k] = x**k`` for ``0 <= k <= max_exp`` (with ``0**0 = 1``)."""
        return self._power_table(max_exp)

    def _power_table(self, max_exp: int) -> np.ndarray:
        cache = self.__dict__.setdefault("_pow_cache", {})
        if max_exp not in cache:
            t = np.ones((self.q, max_exp + 1), dtype=np.intp)
            xs = np.arange(self.q, dtype=np.intp)
            for k in range(1, max_exp + 1):
                t[:, k] = self.mul_table[t[:, k - 1], xs]
            cache[max_exp] = t
        return cache[max_exp]

    # scalar operations on indices
    def add(self, a: int, b: int) -> int:
        return self._lists[0][a][b]

    def sub(self, a: int, b: int) -> int:
        return self._lists[0][a][self._lists[2][b]]

    def mul(self, a: int, b: int) -> int:
        return self._lists[1][a][b]

    def neg(self, a: int) -> int:
        return self._lists[2][a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self._lists[3][a]

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        result, base = 1, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def is_square(self, a: int) -> bool:
        if a == 0 or not self.odd:
            return True
        return self.pow(a, (self.q - 1) // 2) == 1

    def trace(self, x: "int | FieldElement") -> int:
        return int(self.trace_table[self.coerce(x)])

    def coerce(self, x) -> int:
        """Turn an element literal into an index.

        Accepts a :class:`FieldElement`, a coordinate sequence, or an int.  An
        int in ``range(q)`` is an element index; any other int (e.g. ``-1``) is
        reduced mod p into the prime subfield.
        """
        if isinstance(x, FieldElement):
            if x.ctx != self:
                raise FieldError("element belongs to a different field")
            return x.value
        if isinstance(x, (int, np.integer)):
            x = int(x)
            return x if 0 <= x < self.q else x % self.p
        if isinstance(x, (list, tuple)):
            return self.from_coords([int(c) for c in x])
        raise TypeError(f"cannot interpret {x!r} as an element of {self}")

    def elem(self, x) -> "FieldElement":
        return FieldElement(self, self.coerce(x))

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def to_json(self) -> dict:
        return {"p": self.p, "e": self.e, "modulus": list(self.modulus)}

    def format_elem(self, x: int):
        """JSON-friendly literal: an int for prime fields, coordinates otherwise."""
        return x if self.e == 1 else list(self.coords(x))


@dataclass(frozen=True, slots=True)
class FieldElement:
    ctx: FieldCtx
    value: int

    def _other(self, other) -> int:
        return self.ctx.coerce(other)

    @property
    def coords(self) -> tuple[int, ...]:
        return self.ctx.coords(self.value)

    def __add__(self, other):
        return FieldElement(self.ctx, self.ctx.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.ctx, self.ctx.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.ctx, self.ctx.sub(self._other(other), self.value))

    def __mul__(self, other):
        return FieldElement(self.ctx, self.ctx.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.neg(self.value))

    def __truediv__(self, other):
        return FieldElement(self.ctx, self.ctx.mul(self.value, self.ctx.inv(self._other(other))))

    def __pow__(self, k: int):
        return FieldElement(self.ctx, self.ctx.pow(self.value, k))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.ctx, self.ctx.inv(self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.ctx == other.ctx and self.value == other.value
        if isinstance(other, (int, np.integer, list, tuple)):
            return self.value == self.ctx.coerce(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ctx, self.value))

    def __repr__(self) -> str:
        if self.ctx.e == 1:
            return f"{self.value}"
        return f"{self.coords}"


def make_field(p: int, e: int = 1, modulus: Iterable[int] | None = None,
               *, allow_even: bool = False) -> FieldCtx:
    """Build and validate F_{p^e}.

    ``modulus`` lists coefficients low-to-high including the leading 1, e.g.
    ``[1, 0, 1]`` for ``t^2 + 1``.  When omitted the lexicographically first
    monic irreducible is used, so the same ``(p, e)`` always gives the same
    field.

    >>> make_field(3, 2).modulus
    (1, 0, 1)
    """
    if not isinstance(p, int) or not isprime(p):
        raise FieldError(f"characteristic must be prime, got {p!r}")
    if p == 2 and not allow_even:
        raise EvenCharacteristicError(
            "characteristic 2 is only available with allow_even=True (q must be odd for bounds)")
    if not isinstance(e, int) or e < 1:
        raise FieldError(f"extension degree must be a positive integer, got {e!r}")
    if modulus is None:
        mod = first_irreducible(p, e)
    else:
        mod = tuple(int(c) % p for c in modulus)
        if len(mod) != e + 1:
            raise FieldError(f"modulus must have degree {e} (got {len(mod) - 1})")
        if mod[-1] != 1:
            raise FieldError("modulus must be monic")
        if not _fp_is_irreducible(mod, p):
            raise FieldError(f"modulus {list(mod)} is reducible over F_{p}")
    return FieldCtx(p, e, mod, allow_even=(p == 2))


def field_from_json(d: dict, *, allow_even: bool = False) -> FieldCtx:
    """Read ``{"p": int, "e": int, "modulus": [...] (optional)}``."""
    try:
        p, e = int(d["p"]), int(d.get("e", 1))
    except (KeyError, TypeError, ValueError) as exc:
        raise FieldError(f"bad field description {d!r}: {exc}") from None
    return make_field(p, e, d.get("modulus"), allow_even=allow_even)


def trace(ctx: FieldCtx, x) -> int:
    return ctx.trace(x)


def enumerate_field(ctx: FieldCtx) -> list[FieldElement]:
    return [FieldElement(ctx, x) for x in range(ctx.q)]
