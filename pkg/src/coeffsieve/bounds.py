"""Constrained irreducible counts, type I/II sums and the rank-based bound.

Everything for one constraint system hangs off a :class:`BoundEngine`, which
caches the composed polynomials ``(P_i)_g`` (``f -> R_i(f g)``), their values
on every monic cofactor, and their ranks.  Inner character sums are exact
(:class:`~coeffsieve.charsum.CycInt` counts); only magnitudes and the outer
sums of magnitudes are floats.

The admissible parameters are ``u, v >= 1`` with ``u + v <= n - 1``, which
is the only reading under which the type II range ``v <= k <= n - u`` is
nonempty and the minimum in the bound runs over ``u + v < n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .charsum import CharTuple, CycInt, batch_error_bound, char_sum_from_values, enumerate_char_tuples
from .coeffpoly import CoeffPoly, ConstraintSystem, all_monomials, compose_with_factor, max_degree_set
from .polarize import polarization
from .ranks import DEFAULT_CAP, INF, RankValue, tuple_rank
from .upoly import UPoly, count_irreducible, irreducible_mask, monic_lower_array, von_mangoldt_table

TOL = 1e-6


class InvariantViolation(AssertionError):
    """An exact identity failed."""


@dataclass(frozen=True)
class VaughanParams:
    u: int
    v: int

    def check(self, n: int) -> None:
        if not (self.u >= 1 and self.v >= 1 and self.u + self.v <= n - 1):
            raise ValueError(f"(u, v) = ({self.u}, {self.v}) needs u, v >= 1 and u + v <= n - 1 = {n - 1}")

    def k_range(self, n: int) -> range:
        return range(self.v, n - self.u + 1)


def valid_params(n: int) -> list[VaughanParams]:
    return [VaughanParams(u, v) for u in range(1, n) for v in range(1, n) if u + v <= n - 1]


# -- exact counts ------------------------------------------------------------------

def _irreducible_lowers(sys: ConstraintSystem) -> np.ndarray:
    ctx = sys.ctx
    return monic_lower_array(ctx.q, sys.n)[irreducible_mask(ctx, sys.n)]


def count_constrained(sys: ConstraintSystem) -> int:
    """``I_n(R_1..R_m)`` by filtering the enumerated irreducibles."""
    vals = sys.values(_irreducible_lowers(sys))
    return int((vals == 0).all(axis=0).sum())


def expected_count(sys: ConstraintSystem) -> Fraction:
    return Fraction(count_irreducible(sys.ctx.q, sys.n), sys.ctx.q ** sys.m)


def deviation(sys: ConstraintSystem) -> Fraction:
    """``|I_n(R_1..R_m) - I(n) / q^m|`` exactly."""
    return abs(count_constrained(sys) - expected_count(sys))


def prime_char_sum(sys: ConstraintSystem, psis: CharTuple) -> CycInt:
    """``sum_{f in P(n)} prod_i psi_i(R_i(f))``."""
    return char_sum_from_values(sys.ctx, psis, sys.values(_irreducible_lowers(sys)))


def orthogonality_aggregate(sys: ConstraintSystem) -> CycInt:
    """Sum over all ``q^m`` character tuples of :func:`prime_char_sum`; equals
    ``q^m * I_n`` exactly."""
    vals = sys.values(_irreducible_lowers(sys))
    total = CycInt.zero(sys.ctx.p)
    for psis in enumerate_char_tuples(sys.ctx, sys.m):
        total = total + char_sum_from_values(sys.ctx, psis, vals)
    return total


def lambda_char_sum(sys: ConstraintSystem, psis: CharTuple) -> CycInt:
    """``sum_{f in M(n)} Lambda(f) prod_i psi_i(R_i(f))``."""
    lam = von_mangoldt_table(sys.ctx, sys.n)
    support = np.nonzero(lam)[0]
    lowers = monic_lower_array(sys.ctx.q, sys.n)[support]
    return char_sum_from_values(sys.ctx, psis, sys.values(lowers), lam[support])


def vaughan_lhs(sys: ConstraintSystem, psis: CharTuple) -> float:
    return lambda_char_sum(sys, psis).magnitude()


def lambda_correction_observed(sys: ConstraintSystem) -> int:
    """Number of reducible f in M(n) with Lambda(f) > 0 (proper prime powers)."""
    lam = von_mangoldt_table(sys.ctx, sys.n)
    return int(((lam > 0) & ~irreducible_mask(sys.ctx, sys.n)).sum())


# -- the engine ---------------------------------------------------------------------

def _counts_rows(phases: np.ndarray, p: int) -> np.ndarray:
    """Row-wise histograms of an integer array ``(..., H)`` of phases."""
    lead = phases.shape[:-1]
    flat = phases.reshape(-1, phases.shape[-1])
    offs = (np.arange(flat.shape[0]) * p)[:, None]
    counts = np.bincount((flat + offs).ravel(), minlength=flat.shape[0] * p)
    return counts.reshape(*lead, p)


def _magnitudes(counts: np.ndarray) -> np.ndarray:
    from .charsum import batch_magnitudes
    return batch_magnitudes(counts)


@dataclass
class Estimate:
    """A float with an absolute error bound."""

    value: float
    error: float = 0.0

    def __float__(self) -> float:
        return self.value


class BoundEngine:
    """Caches shared by the type I/II sums and the rank-based quantities."""

    def __init__(self, sys: ConstraintSystem, r_max: int | None = None, cap: int = DEFAULT_CAP):
        self.sys = sys
        self.ctx = sys.ctx
        self.n = sys.n
        self.q = sys.ctx.q
        self.j, self.S = max_degree_set(sys)
        self.r_max, self.cap = r_max, cap
        self._comp: dict[int, list[tuple[CoeffPoly, ...]]] = {}
        self._values: dict[int, np.ndarray] = {}
        self._dense: dict[int, tuple[list, np.ndarray]] = {}
        self._rank_g: dict[int, list[RankValue]] = {}
        self._rank_pairs: dict[int, tuple[np.ndarray, np.ndarray, list[RankValue]]] = {}
        self._polar_sums: dict[tuple, int] = {}
        self._s2: dict[tuple, tuple] = {}

    # compositions
    def cofactors(self, d: int) -> np.ndarray:
        return monic_lower_array(self.q, d)

    def compositions(self, d: int) -> list[tuple[CoeffPoly, ...]]:
        """``((P_1)_g, .., (P_m)_g)`` for every monic g of degree d, in index order."""
        if d not in self._comp:
            out = []
            for low in self.cofactors(d):
                g = UPoly(self.ctx, tuple(int(x) for x in low) + (1,))
                out.append(tuple(compose_with_factor(R, g, self.n) for R in self.sys.polys))
            self._comp[d] = out
        return self._comp[d]

    def values(self, d: int) -> np.ndarray:
        """Array ``(m, q^d, q^(n-d))``: ``(P_i)_g(h)`` for g of degree d, h of degree n - d."""
        if d not in self._values:
            H = monic_lower_array(self.q, self.n - d)
            comps = self.compositions(d)
            arr = np.empty((self.sys.m, len(comps), H.shape[0]), dtype=np.intp)
            for gi, polys in enumerate(comps):
                for i, P in enumerate(polys):
                    arr[i, gi] = P.evaluate_many(H)
            self._values[d] = arr
        return self._values[d]

    def dense_compositions(self, d: int) -> tuple[list, np.ndarray]:
        """Coefficient vectors of the compositions over all monomials of degree <= j
        in ``n - d`` variables; shape ``(m, q^d, B)``."""
        if d not in self._dense:
            k = self.n - d
            basis = [mono for deg in range(self.j + 1) for mono in all_monomials(k, deg)]
            pos = {mono: b for b, mono in enumerate(basis)}
            comps = self.compositions(d)
            arr = np.zeros((self.sys.m, len(comps), len(basis)), dtype=np.intp)
            for gi, polys in enumerate(comps):
                for i, P in enumerate(polys):
                    for mono, c in P.terms.items():
                        arr[i, gi, pos[mono]] = c
            self._dense[d] = (basis, arr)
        return self._dense[d]

    def _poly_from_row(self, k: int, basis: list, row: np.ndarray) -> CoeffPoly:
        return CoeffPoly(self.ctx, k, {basis[b]: int(c) for b, c in enumerate(row) if c})

    # ranks
    def ranks_g(self, d: int) -> list[RankValue]:
        """``rank(((P_i)_g)_{i in S})`` for every g of degree d."""
        if d not in self._rank_g:
            S = sorted(self.S)
            self._rank_g[d] = [tuple_rank([polys[i - 1] for i in S], None, self.r_max, self.cap)
                               for polys in self.compositions(d)]
        return self._rank_g[d]

    def ranks_pairs(self, k: int):
        """Ranks of ``(((P_i)_{g1,g2})_{i in S})`` for all pairs of degree n - k.

        Returns ``(inverse, unique_rows, ranks)`` with ``inverse`` of shape
        ``(G, G)`` indexing into ``ranks``.
        """
        if k not in self._rank_pairs:
            d = self.n - k
            basis, arr = self.dense_compositions(d)
            S = [i - 1 for i in sorted(self.S)]
            sel = arr[S]                                         # (|S|, G, B)
            G = sel.shape[1]
            diff = self.ctx.sub_table[sel[:, :, None, :], sel[:, None, :, :]]   # (|S|, G, G, B)
            rows = diff.transpose(1, 2, 0, 3).reshape(G * G, -1)
            uniq, inverse = np.unique(rows, axis=0, return_inverse=True)
            B = len(basis)
            ranks = []
            for row in uniq:
                polys = [self._poly_from_row(k, basis, row[s * B:(s + 1) * B]) for s in range(len(S))]
                ranks.append(tuple_rank(polys, None, self.r_max, self.cap))
            self._rank_pairs[k] = (inverse.reshape(G, G), uniq, ranks)
        return self._rank_pairs[k]

    # type I / type II sums
    def sigma1_terms(self, psis: CharTuple, d: int) -> tuple[np.ndarray, np.ndarray]:
        """Per-g inner sums ``sum_h Psi(g h)`` as counts ``(q^d, p)`` and magnitudes."""
        counts = _counts_rows(psis.phases(self.values(d)), self.ctx.p)
        return counts, _magnitudes(counts)

    def sigma1(self, psis: CharTuple, params: VaughanParams) -> Estimate:
        params.check(self.n)
        total, err = 0.0, 0.0
        for d in range(params.u + params.v + 1):
            counts, mags = self.sigma1_terms(psis, d)
            total += math.fsum(mags)
            err += batch_error_bound(counts)
        return Estimate(total, err)

    def sigma2_at(self, psis: CharTuple, k: int) -> tuple[float, float, int]:
        """``max_{g1} sum_{g2} |sum_h Psi(h g1) conj(Psi(h g2))|`` for one k,
        with its error bound and the maximizing g1 index."""
        key = (psis.labels, k)
        if key not in self._s2:
            p = self.ctx.p
            phi = psis.phases(self.values(self.n - k))          # (G, H)
            G, H = phi.shape
            best, best_g, err = -1.0, 0, 0.0
            step = max(1, 4_000_000 // max(1, G * H))
            for start in range(0, G, step):
                block = (phi[start:start + step, None, :] - phi[None, :, :]) % p
                counts = _counts_rows(block, p)                 # (b, G, p)
                sums = np.array([math.fsum(r) for r in _magnitudes(counts)])
                err = max(err, batch_error_bound(counts) / max(1, counts.shape[0]))
                i = int(np.argmax(sums))
                if sums[i] > best + TOL:
                    best, best_g = float(sums[i]), start + i
            self._s2[key] = (best, err, best_g)
        return self._s2[key]

    def sigma2(self, psis: CharTuple, params: VaughanParams) -> Estimate:
        params.check(self.n)
        vals = [self.sigma2_at(psis, k) for k in params.k_range(self.n)]
        best = max(vals, key=lambda t: t[0])
        return Estimate(best[0], max(v[1] for v in vals))

    # bound quantities
    def _rank_exponent(self, r: RankValue, c: float) -> float:
        return -INF if r.infinite else -c * r.value

    def s1_theorem(self, params: VaughanParams, c: float) -> float:
        params.check(self.n)
        if c <= 0:
            raise ValueError("c must be positive")
        n, q, j = self.n, self.q, self.j
        terms = []
        for d in range(params.u + params.v + 1):
            base = (n - d) + (n - d) / 2 ** j
            for r in self.ranks_g(d):
                e = base + self._rank_exponent(r, c)
                terms.append(0.0 if e == -INF else q ** e)
        return math.fsum(terms)

    def s2_at(self, k: int, c: float) -> float:
        inverse, _, ranks = self.ranks_pairs(k)
        q = self.q
        per_rank = np.array([0.0 if r.infinite else q ** (k - c * r.value) for r in ranks])
        contrib = per_rank[inverse]                             # (G, G)
        return max(math.fsum(row) for row in contrib)

    def s2_theorem(self, params: VaughanParams, c: float) -> float:
        params.check(self.n)
        if c <= 0:
            raise ValueError("c must be positive")
        return max(self.s2_at(k, c) for k in params.k_range(self.n))

    def bound_at(self, params: VaughanParams, c: float) -> float:
        n, q, m = self.n, self.q, self.sys.m
        inner = n * self.s1_theorem(params, c) + n ** 2.5 * q ** (n - (params.u + params.v) / 2) \
            * math.sqrt(self.s2_theorem(params, c))
        return (q ** m - 1) / q ** m * inner

    def theorem_rhs(self, c: float, grid: Sequence[VaughanParams] | None = None
                    ) -> tuple[float, VaughanParams]:
        grid = valid_params(self.n) if grid is None else list(grid)
        if not grid:
            raise ValueError(f"no admissible (u, v) for n = {self.n}")
        vals = [(self.bound_at(pr, c), pr) for pr in grid]
        best = min(v for v, _ in vals)
        return best, next(pr for v, pr in vals if v == best)

    def cap_flags(self) -> list[str]:
        flags = []
        for d, ranks in sorted(self._rank_g.items()):
            if any(not r.exact for r in ranks):
                flags.append(f"rank_g:d={d}")
        for k, (_, _, ranks) in sorted(self._rank_pairs.items()):
            if any(not r.exact for r in ranks):
                flags.append(f"rank_pairs:k={k}")
        return flags

    def degenerate_flags(self) -> list[str]:
        flags = []
        for d, ranks in sorted(self._rank_g.items()):
            if any(r.degenerate for r in ranks):
                flags.append(f"degenerate_g:d={d}")
        for k, (_, _, ranks) in sorted(self._rank_pairs.items()):
            if any(r.degenerate for r in ranks):
                flags.append(f"degenerate_pairs:k={k}")
        return flags

    # intermediate chain: polarization sums
    def polar_sum(self, k: int, form: CoeffPoly) -> int:
        """``sum_{x in (F_q^k)^j} psi_0(form°(x))`` for a degree <= j form; only the
        degree-j part matters and the sum is invariant under scaling it."""
        top = form.homogeneous_component(self.j)
        if top.is_zero:
            return self.q ** (self.j * k)
        lead = top.sorted_terms()[0][1]
        top = top.scale(self.ctx.inv(lead))
        key = (k, top.key())
        if key not in self._polar_sums:
            T = polarization(top, k, order=self.j)
            z = CycInt.from_phases(self.ctx.p, self.ctx.trace_table[T.all_values()])
            val = z.as_integer()
            if val is None or val < 0:
                raise InvariantViolation(f"polarization sum {z.counts} is not a nonnegative integer")
            self._polar_sums[key] = val
        return self._polar_sums[key]

    def _combined(self, psis: CharTuple, polys: Sequence[CoeffPoly]) -> CoeffPoly:
        out = CoeffPoly.zero(self.ctx, polys[0].nvars)
        for i in sorted(self.S):
            c = psis.labels[i - 1]
            if c:
                out = out + polys[i - 1].scale(c)
        return out

    def chain_sigma1(self, psis: CharTuple, params: VaughanParams) -> dict:
        """Difference-step bound per g, with the observed inner sums beside it."""
        n, q, j = self.n, self.q, self.j
        total, violations, cmin_jk, cmin_n = 0.0, 0, INF, INF
        for d in range(params.u + params.v + 1):
            k = n - d
            _, mags = self.sigma1_terms(psis, d)
            ranks = self.ranks_g(d)
            for gi, polys in enumerate(self.compositions(d)):
                s = self.polar_sum(k, self._combined(psis, polys))
                rhs = (q ** k * s) ** (1 / 2 ** j)
                total += rhs
                if mags[gi] > rhs * (1 + 1e-9) + 1e-9:
                    violations += 1
                cmin_jk, cmin_n = self._rank_c(s, ranks[gi], j * k, n, cmin_jk, cmin_n)
        return {"bound": total, "violations": violations,
                "rank_max_c_jk": cmin_jk, "rank_max_c_n": cmin_n}

    def chain_sigma2(self, psis: CharTuple, params: VaughanParams) -> dict:
        n, q, j = self.n, self.q, self.j
        best, violations, cmin_jk, cmin_n = 0.0, 0, INF, INF
        p = self.ctx.p
        for k in params.k_range(n):
            d = n - k
            basis, arr = self.dense_compositions(d)
            S = [i - 1 for i in sorted(self.S)]
            comb = np.zeros(arr.shape[1:], dtype=np.intp)
            for i in S:
                c = psis.labels[i]
                if c:
                    comb = self.ctx.add_table[comb, self.ctx.mul_table[c, arr[i]]]
            diff = self.ctx.sub_table[comb[:, None, :], comb[None, :, :]]    # (G, G, B)
            G = diff.shape[0]
            uniq, inverse = np.unique(diff.reshape(G * G, -1), axis=0, return_inverse=True)
            sums = np.array([self.polar_sum(k, self._poly_from_row(k, basis, row)) for row in uniq],
                            dtype=np.float64)
            rhs = ((q ** k * sums) ** (1 / 2 ** j))[inverse.reshape(G, G)]
            best = max(best, max(math.fsum(row) for row in rhs))
            phi = psis.phases(self.values(d))
            inv_r, _, ranks = self.ranks_pairs(k)
            for g1 in range(G):
                mags = _magnitudes(_counts_rows((phi[g1][None, :] - phi) % p, p))
                violations += int(np.sum(mags > rhs[g1] * (1 + 1e-9) + 1e-9))
            combos = np.unique(np.stack([inverse.reshape(-1), inv_r.reshape(-1)], axis=1), axis=0)
            for u_idx, r_idx in combos:
                cmin_jk, cmin_n = self._rank_c(int(sums[u_idx]), ranks[r_idx], j * k, n, cmin_jk, cmin_n)
        return {"bound": best, "violations": violations,
                "rank_max_c_jk": cmin_jk, "rank_max_c_n": cmin_n}

    def _rank_c(self, s: int, r: RankValue, nvars: int, n: int, c_jk: float, c_n: float):
        """Largest c compatible with ``|sum| <= q^(N - c rank)`` for N = jk and N = n."""
        if r.infinite or r.value <= 0 or not r.exact or s == 0:
            return c_jk, c_n
        lg = math.log(s, self.q)
        return min(c_jk, (nvars - lg) / r.value), min(c_n, (n - lg) / r.value)


@lru_cache(maxsize=64)
def engine_for(sys: ConstraintSystem, r_max: int | None = None, cap: int = DEFAULT_CAP) -> BoundEngine:
    return BoundEngine(sys, r_max, cap)


def sigma1(sys: ConstraintSystem, psis: CharTuple, params: VaughanParams) -> float:
    return engine_for(sys).sigma1(psis, params).value


def sigma2(sys: ConstraintSystem, psis: CharTuple, params: VaughanParams) -> float:
    return engine_for(sys).sigma2(psis, params).value


def s1_theorem(sys: ConstraintSystem, params: VaughanParams, c: float) -> float:
    return engine_for(sys).s1_theorem(params, c)


def s2_theorem(sys: ConstraintSystem, params: VaughanParams, c: float) -> float:
    return engine_for(sys).s2_theorem(params, c)


def theorem_rhs(sys: ConstraintSystem, c: float, grid: Sequence[VaughanParams] | None = None
                ) -> tuple[float, VaughanParams]:
    return engine_for(sys).theorem_rhs(c, grid)
