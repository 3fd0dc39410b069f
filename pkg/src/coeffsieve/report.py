"""Assembling bound reports and writing them as CSV and JSON.

A report holds the exact deviation, the per-tuple character sums, the type
I/II sums and the rank-weighted quantities for every admissible ``(u, v)`` and
every ``c``.  Exact identities (orthogonality, the count of prime powers,
envelopes, monotonicity in ``c``) are asserted; ``LHS <= RHS`` is recorded
only, together with the observed ratio.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .bounds import (TOL, InvariantViolation, VaughanParams, count_constrained, engine_for,
                     expected_count, lambda_char_sum, lambda_correction_observed,
                     orthogonality_aggregate, prime_char_sum, valid_params)
from .charsum import CharTuple, CycInt, enumerate_char_tuples
from .coeffpoly import ConstraintSystem
from .parallel import pmap
from .ranks import DEFAULT_CAP
from .upoly import count_irreducible, prime_power_correction

CSV_COLUMNS = ["sys_id", "q", "p", "e", "n", "m", "j", "S", "u", "v", "c", "sigma1", "sigma2",
               "s1", "s2", "lhs_deviation_exact", "rhs", "ratio", "argmin_flag", "cap_flags",
               "error_bound"]

# how each numeric field is to be read
EXACTNESS = {
    "I_n": "exact-integer", "I(n)": "exact-integer", "expected": "exact-rational",
    "deviation": "exact-rational", "prime_sum": "exact-cyclotomic", "lambda_sum": "exact-cyclotomic",
    "vaughan_lhs": "float", "sigma1": "float+error_bound", "sigma2": "float+error_bound",
    "s1": "float", "s2": "float", "rhs": "float", "ratio": "float",
}


def jsonable(x):
    """Plain JSON values; non-finite floats become strings."""
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return x


def _num(x) -> str:
    if isinstance(x, float):
        return repr(x) if math.isfinite(x) else ("inf" if x > 0 else "-inf" if x < 0 else "nan")
    return str(x)


@dataclass
class BoundReport:
    sys_id: str
    system: ConstraintSystem
    j: int
    S: tuple[int, ...]
    exact: dict
    tuples: list[dict]
    params: list[dict]
    rhs: list[dict]
    rows: list[dict]
    flags: dict
    timing: dict = field(default_factory=dict)

    def to_json(self, timing: bool = True) -> dict:
        ctx = self.system.ctx
        d = {
            "sys_id": self.sys_id,
            "field": ctx.to_json(),
            "n": self.system.n, "m": self.system.m, "j": self.j, "S": list(self.S),
            "constraints": [R.to_json() for R in self.system.polys],
            "constraints_pretty": self.system.describe(),
            "exactness": EXACTNESS,
            "exact": self.exact,
            "tuples": self.tuples,
            "params": self.params,
            "rhs": self.rhs,
            "rows": self.rows,
            "flags": self.flags,
        }
        if timing:
            d["timing"] = self.timing
        return jsonable(d)

    def csv_rows(self) -> list[list[str]]:
        return [[_num(r[c]) for c in CSV_COLUMNS] for r in self.rows]


# -- per-tuple work (runs in worker processes) ---------------------------------------

def _tuple_item(item):
    sys, labels, grid, r_max, cap = item
    eng = engine_for(sys, r_max, cap)
    psis = CharTuple(sys.ctx, labels)
    prime = prime_char_sum(sys, psis)
    lam = lambda_char_sum(sys, psis)
    lhs = lam.magnitude()
    n, q = sys.n, sys.ctx.q
    per = []
    for u, v in grid:
        pr = VaughanParams(u, v)
        s1, s2 = eng.sigma1(psis, pr), eng.sigma2(psis, pr)
        vaughan_rhs = n * s1.value + n ** 2.5 * q ** (n - (u + v) / 2) * math.sqrt(s2.value)
        per.append({"u": u, "v": v,
                    "sigma1": s1.value, "sigma1_error": s1.error,
                    "sigma2": s2.value, "sigma2_error": s2.error,
                    "vaughan_rhs": vaughan_rhs, "vaughan_ratio": lhs / vaughan_rhs if vaughan_rhs else math.inf,
                    "chain_sigma1": eng.chain_sigma1(psis, pr),
                    "chain_sigma2": eng.chain_sigma2(psis, pr)})
    return {"psi": str(psis), "labels": list(labels),
            "restricted_trivial": psis.restricted_trivial(eng.S),
            "prime_sum": prime.to_json(), "lambda_sum": lam.to_json(),
            "vaughan_lhs": lhs, "params": per}


def full_report(sys: ConstraintSystem, c_values: Sequence[float],
                grid: Sequence[VaughanParams] | None = None, *, sys_id: str = "sys",
                workers: int = 1, r_max: int | None = None, cap: int = DEFAULT_CAP) -> BoundReport:
    """Everything the bound needs for one constraint system.

    ``grid=None`` means every admissible ``(u, v)``; an empty grid gives a
    report with the exact deviation only.
    """
    start = time.perf_counter()
    ctx, n, m = sys.ctx, sys.n, sys.m
    q, p = ctx.q, ctx.p
    c_values = [float(c) for c in c_values]
    if any(not c > 0 for c in c_values):
        raise ValueError("c values must be positive")
    eng = engine_for(sys, r_max, cap)
    if grid is None:
        grid = valid_params(n)
    grid = [VaughanParams(pr.u, pr.v) for pr in grid]
    for pr in grid:
        pr.check(n)

    # exact quantities and the identities tying them together
    count = count_constrained(sys)
    expected = expected_count(sys)
    dev = abs(count - expected)
    agg = orthogonality_aggregate(sys)
    if agg != CycInt.integer(p, q ** m * count):
        raise InvariantViolation(f"{sys_id}: character aggregate {agg.counts} != q^m * I_n")
    correction = lambda_correction_observed(sys)
    if correction != prime_power_correction(q, n):
        raise InvariantViolation(f"{sys_id}: {correction} prime powers, expected "
                                 f"{prime_power_correction(q, n)}")
    exact = {"I_n": count, "I(n)": count_irreducible(q, n), "expected": expected,
             "deviation": dev, "deviation_float": float(dev),
             "orthogonality_aggregate": list(agg.normalized()),
             "prime_power_correction": correction}
    t_exact = time.perf_counter()

    # rank tables are shared by all tuples; fill them before forking
    for pr in grid:
        for d in range(pr.u + pr.v + 1):
            eng.ranks_g(d)
        for k in pr.k_range(n):
            eng.ranks_pairs(k)
    params = []
    for pr in grid:
        entry = {"u": pr.u, "v": pr.v, "per_c": []}
        for c in c_values:
            entry["per_c"].append({"c": c, "s1": eng.s1_theorem(pr, c), "s2": eng.s2_theorem(pr, c),
                                   "bound": eng.bound_at(pr, c)})
        params.append(entry)
    t_ranks = time.perf_counter()

    labels = [t.labels for t in enumerate_char_tuples(ctx, m, include_trivial=False)]
    uv = [(pr.u, pr.v) for pr in grid]
    tuples = pmap(_tuple_item, [(sys, lab, uv, r_max, cap) for lab in labels], workers)
    t_tuples = time.perf_counter()

    # envelopes on the type I/II sums
    for t in tuples:
        for row in t["params"]:
            u, v = row["u"], row["v"]
            if row["sigma1"] > (u + v + 1) * q ** n + row["sigma1_error"] + TOL:
                raise InvariantViolation(f"{sys_id}: sigma1 above its envelope at {t['psi']}")
            if row["sigma2"] > q ** n + row["sigma2_error"] + TOL:
                raise InvariantViolation(f"{sys_id}: sigma2 above its envelope at {t['psi']}")

    rhs = []
    if grid:
        prev = math.inf
        for c in sorted(set(c_values)):
            val, arg = eng.theorem_rhs(c, grid)
            if val > prev * (1 + 1e-12):
                raise InvariantViolation(f"{sys_id}: RHS increased with c at c = {c}")
            prev = val
            scan = min(e["bound"] for entry in params for e in entry["per_c"] if e["c"] == c)
            if scan != val:
                raise InvariantViolation(f"{sys_id}: argmin re-scan disagrees at c = {c}")
            rhs.append({"c": c, "rhs": val, "argmin": [arg.u, arg.v],
                        "ratio": float(dev) / val if val else math.inf,
                        "lhs_le_rhs": float(dev) <= val})

    flags = {"cap": eng.cap_flags(), "degenerate": eng.degenerate_flags(),
             "restricted_trivial_tuples": [t["psi"] for t in tuples if t["restricted_trivial"]]}
    cap_field = ";".join(flags["cap"])
    base = {"sys_id": sys_id, "q": q, "p": p, "e": ctx.e, "n": n, "m": m, "j": eng.j,
            "S": " ".join(str(i) for i in sorted(eng.S)), "lhs_deviation_exact": str(dev),
            "cap_flags": cap_field}
    rows = []
    if not grid:
        rows.append({**base, "u": "", "v": "", "c": "", "sigma1": "", "sigma2": "", "s1": "",
                     "s2": "", "rhs": "", "ratio": "", "argmin_flag": "", "error_bound": ""})
    argmins = {r["c"]: tuple(r["argmin"]) for r in rhs}
    for gi, entry in enumerate(params):
        s1max = max((t["params"][gi]["sigma1"] for t in tuples), default=0.0)
        s2max = max((t["params"][gi]["sigma2"] for t in tuples), default=0.0)
        err = max((max(t["params"][gi]["sigma1_error"], t["params"][gi]["sigma2_error"])
                   for t in tuples), default=0.0)
        for e in entry["per_c"]:
            rows.append({**base, "u": entry["u"], "v": entry["v"], "c": e["c"],
                         "sigma1": s1max, "sigma2": s2max, "s1": e["s1"], "s2": e["s2"],
                         "rhs": e["bound"],
                         "ratio": float(dev) / e["bound"] if e["bound"] else math.inf,
                         "argmin_flag": int(argmins.get(e["c"]) == (entry["u"], entry["v"])),
                         "error_bound": err})
    end = time.perf_counter()
    timing = {"exact_s": t_exact - start, "ranks_s": t_ranks - t_exact,
              "tuples_s": t_tuples - t_ranks, "total_s": end - start}
    return BoundReport(sys_id, sys, eng.j, tuple(sorted(eng.S)), exact, tuples, params, rhs, rows,
                       flags, timing)


# -- emission ------------------------------------------------------------------------

def csv_text(reports: Sequence[BoundReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        w.writerows(r.csv_rows())
    return buf.getvalue()


def dump_json(obj) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=True) + "\n"


def write_bound_outputs(reports: Sequence[BoundReport], out_dir: str | Path, header: dict
                        ) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path, json_path = out / "bound.csv", out / "bound.json"
    csv_path.write_text(csv_text(reports))
    doc = {"header": header, "reports": [r.to_json(timing=False) for r in reports],
           "timing": {r.sys_id: r.timing for r in reports}}
    json_path.write_text(dump_json(doc))
    return [csv_path, json_path]


def strip_timing(doc):
    """Drop every ``timing`` key, for comparing runs."""
    if isinstance(doc, dict):
        return {k: strip_timing(v) for k, v in doc.items() if k != "timing"}
    if isinstance(doc, list):
        return [strip_timing(v) for v in doc]
    return doc
