"""Brute-force reference computations, deliberately independent of the
vectorized and symbolic paths in the package."""

import cmath
import itertools
import math

from coeffsieve.upoly import divide, enumerate_monic, multiply


def zeta_sum(p, phases, weights=None):
    weights = weights or [1] * len(phases)
    return sum(w * cmath.exp(2j * math.pi * t / p) for t, w in zip(phases, weights))


def psi_phase(ctx, labels, values):
    return sum(int(ctx.trace_table[ctx.mul(c, v)]) for c, v in zip(labels, values)) % ctx.p


def R_values(sys, f):
    return [R.evaluate(f.lower).value for R in sys.polys]


def sigma1_direct(sys, labels, u, v):
    ctx, total = sys.ctx, 0.0
    for d in range(u + v + 1):
        for g in enumerate_monic(ctx, d):
            phases = [psi_phase(ctx, labels, R_values(sys, multiply(g, h)))
                      for h in enumerate_monic(ctx, sys.n - d)]
            total += abs(zeta_sum(ctx.p, phases))
    return total


def sigma2_direct(sys, labels, u, v):
    ctx, best = sys.ctx, 0.0
    for k in range(v, sys.n - u + 1):
        hs = list(enumerate_monic(ctx, k))
        gs = list(enumerate_monic(ctx, sys.n - k))
        ph = {g.coeffs: [psi_phase(ctx, labels, R_values(sys, multiply(h, g))) for h in hs] for g in gs}
        for g1 in gs:
            row = 0.0
            for g2 in gs:
                phases = [(a - b) % ctx.p for a, b in zip(ph[g1.coeffs], ph[g2.coeffs])]
                row += abs(zeta_sum(ctx.p, phases))
            best = max(best, row)
    return best


def irreducible_by_roots_and_division(f):
    """Irreducibility via divisibility by every monic of degree <= n/2."""
    n = f.degree
    for d in range(1, n // 2 + 1):
        for g in enumerate_monic(f.ctx, d):
            if divide(f, g)[1].is_zero:
                return False
    return True


def exp_sum_bilinear_count(ctx, M):
    """sum_{x,y} psi_0(x^T M y) computed as q^k * #{x : x^T M = 0}."""
    k = len(M)
    count = 0
    for x in itertools.product(range(ctx.q), repeat=k):
        row = [0] * k
        for i in range(k):
            for j in range(k):
                row[j] = ctx.add(row[j], ctx.mul(x[i], M[i][j]))
        count += not any(row)
    return count * ctx.q ** k
