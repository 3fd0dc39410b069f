"""Command line front end: ``coeffsieve count|verify|bound|rank``.

Exit status is 0 on success, 1 when an exact assertion fails and 2 for
configuration errors.  ``COEFFSIEVE_OUT`` overrides ``--out``.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import math
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import InvariantViolation, count_constrained, expected_count
from .coeffpoly import CoeffPoly, all_monomials
from .config import NOTICES, ConfigError, ExperimentConfig
from .parallel import pmap, shard_ranges
from .polarize import MultiTensor, polarization, tensor_from_json
from .ranks import analytic_rank, analytic_rank_sum, partition_rank, schmidt_rank
from .report import dump_json, full_report, jsonable, write_bound_outputs
from .upoly import count_irreducible
from .verify import resolve_batteries, run_suites

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _header(cfg: ExperimentConfig, command: str, extra: dict | None = None) -> dict:
    d = {"tool": "coeffsieve", "version": __version__, "command": command,
         "config_hash": cfg.config_hash(),
         "config": {k: v for k, v in cfg.to_json().items() if k not in ("out", "workers")},
         "c": cfg.c_values(), "uv_grid": cfg.raw["uv_grid"], "pr_cap": cfg.pr_cap,
         "seed": cfg.seed, "notices": NOTICES}
    if "field" in cfg.raw:
        ctx = cfg.field_ctx()
        d["modulus"] = list(ctx.modulus)
    d.update(extra or {})
    return d


def _out_dir(cfg: ExperimentConfig) -> Path:
    return Path(os.environ.get("COEFFSIEVE_OUT") or cfg.out)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    path.write_text(buf.getvalue())


# -- count ----------------------------------------------------------------------------

def cmd_count(cfg: ExperimentConfig) -> int:
    specs = cfg.systems()
    rows = []
    for i, spec in enumerate(specs):
        s = spec.system
        cfg.check_theorem_preconditions(s, f"systems[{i}]" if "systems" in cfg.raw else "config")
        I_n = count_constrained(s)
        expected = expected_count(s)
        dev = abs(I_n - expected)
        print(f"{spec.sys_id}: I_n = {I_n}  I(n)/q^m = {expected}  deviation = {dev}")
        rows.append([spec.sys_id, s.ctx.q, s.ctx.p, s.ctx.e, s.n, s.m, I_n,
                     count_irreducible(s.ctx.q, s.n), str(expected), str(dev)])
    out = _out_dir(cfg)
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "count.csv", ["sys_id", "q", "p", "e", "n", "m", "I_n", "I(n)", "expected",
                                   "deviation"], rows)
    (out / "count.json").write_text(dump_json({"header": _header(cfg, "count"), "rows": rows}))
    return EXIT_OK


# -- verify ---------------------------------------------------------------------------

def cmd_verify(cfg: ExperimentConfig) -> int:
    try:
        names = resolve_batteries(cfg.raw["batteries"])
    except KeyError as exc:
        raise ConfigError(f"batteries: unknown suite or module {exc.args[0]!r}") from None
    results, timing = run_suites(names, workers=cfg.workers, seed=cfg.seed)
    width = max(len(n) for n in names)
    ok = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        if not r.exact:
            status = "DATA"
        print(f"{r.name:<{width}}  {status}  checks={r.checked}  {timing[r.name]:.1f}s")
        for f in r.failures:
            print(f"    {f}")
        ok &= r.passed
    out = _out_dir(cfg)
    out.mkdir(parents=True, exist_ok=True)
    doc = {"header": _header(cfg, "verify"), "suites": [r.to_json() for r in results],
           "timing": timing}
    (out / "verify.json").write_text(dump_json(doc))
    _write_csv(out / "verify.csv", ["suite", "exact", "passed", "checked", "failures"],
               [[r.name, int(r.exact), int(r.passed), r.checked, len(r.failures)] for r in results])
    return EXIT_OK if ok else EXIT_FAIL


# -- bound ----------------------------------------------------------------------------

def cmd_bound(cfg: ExperimentConfig) -> int:
    specs = cfg.systems()
    reports = []
    for i, spec in enumerate(specs):
        path = f"systems[{i}]" if "systems" in cfg.raw else "config"
        cfg.check_theorem_preconditions(spec.system, path, need_params=True)
    for spec in specs:
        rep = full_report(spec.system, cfg.c_values(), cfg.grid(spec.system.n), sys_id=spec.sys_id,
                          workers=cfg.workers, cap=cfg.pr_cap)
        for r in rep.rhs:
            print(f"{spec.sys_id}: c = {r['c']}  deviation = {rep.exact['deviation']}  "
                  f"RHS = {r['rhs']:.6g} at (u, v) = {tuple(r['argmin'])}  ratio = {r['ratio']:.3g}")
        if rep.flags["cap"]:
            print(f"{spec.sys_id}: rank search cap reached in {', '.join(rep.flags['cap'])}")
        reports.append(rep)
    paths = write_bound_outputs(reports, _out_dir(cfg), _header(cfg, "bound"))
    for p in paths:
        print(f"wrote {p}")
    return EXIT_OK


# -- rank -----------------------------------------------------------------------------

def _rank_battery(cfg: ExperimentConfig) -> list[tuple[str, MultiTensor, CoeffPoly | None]]:
    spec = cfg.raw.get("rank_battery")
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("rank_battery: expected an object with 'kind'")
    ctx = cfg.field_ctx()
    q = ctx.q
    kind = spec["kind"]
    ks = spec.get("k", [2])
    ks = [ks] if isinstance(ks, int) else ks
    if not isinstance(ks, list) or not all(isinstance(k, int) and k >= 1 for k in ks):
        raise ConfigError("rank_battery.k: expected a positive integer or a list of them")
    samples = spec.get("samples", 200)
    rng = np.random.default_rng(cfg.seed)
    out = []
    if kind in ("bilinear", "trilinear"):
        j = 2 if kind == "bilinear" else 3
        for k in ks:
            size = k ** j
            if q ** size <= max(samples, 25_000):
                cells = itertools.product(range(q), repeat=size)
            else:
                cells = (rng.integers(0, q, size=size).tolist() for _ in range(samples))
            for i, flat in enumerate(cells):
                T = MultiTensor.from_dense(ctx, np.array(flat, dtype=np.intp).reshape((k,) * j))
                out.append((f"{kind}_k{k}_{i}", T, None))
    elif kind == "quadratic":
        for k in ks:
            basis = all_monomials(k, 2)
            for i, coeffs in enumerate(itertools.product(range(q), repeat=len(basis))):
                R = CoeffPoly(ctx, k, dict(zip(basis, coeffs)))
                T = polarization(R, order=2) if not R.is_zero else MultiTensor.zero(ctx, 2, k)
                out.append((f"quadratic_k{k}_{i}", T, R))
    elif kind == "explicit":
        tensors = spec.get("tensors")
        if not isinstance(tensors, list) or not tensors:
            raise ConfigError("rank_battery.tensors: expected a nonempty list")
        for i, d in enumerate(tensors):
            try:
                out.append((str(d.get("id", f"tensor_{i}")), tensor_from_json(ctx, d), None))
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"rank_battery.tensors[{i}]: {exc}") from None
    else:
        raise ConfigError(f"rank_battery.kind: unknown kind {kind!r}")
    return out


def _rank_rows(item):
    entries, cap = item
    rows = []
    for name, T, R in entries:
        pr = partition_rank(T, cap=cap)
        s = analytic_rank_sum(T)
        ar = analytic_rank(T)
        sr = "" if R is None else str(schmidt_rank(R, cap=cap))
        ratio = ar / pr.value if pr.exact and pr.value >= 1 else None
        rows.append({"id": name, "order": T.order, "dim": T.dim, "AR": ar, "AR_sum": s,
                     "PR": str(pr), "PR_exact": pr.exact, "schmidt": sr, "ratio": ratio})
    return rows


def cmd_rank(cfg: ExperimentConfig) -> int:
    battery = _rank_battery(cfg)
    if all(T.is_zero for _, T, _ in battery):
        raise ConfigError("rank_battery: only zero tensors; the AR/PR ratio needs PR >= 1")
    shards = shard_ranges(len(battery), max(1, cfg.workers))
    parts = pmap(_rank_rows, [(battery[r.start:r.stop], cfg.pr_cap) for r in shards if len(r)],
                 cfg.workers)
    rows = [row for part in parts for row in part]
    ratios = [r["ratio"] for r in rows if r["ratio"] is not None]
    capped = [r["id"] for r in rows if not r["PR_exact"]]
    c = min(ratios) if ratios else math.nan
    print(f"{len(rows)} tensors, {len(ratios)} with exact PR >= 1; measured c = {c:.6g}")
    for name in capped:
        print(f"cap exceeded: {name}")
    out = _out_dir(cfg)
    out.mkdir(parents=True, exist_ok=True)
    cols = ["id", "order", "dim", "AR", "AR_sum", "PR", "PR_exact", "schmidt", "ratio"]
    _write_csv(out / "rank.csv", cols,
               [["" if r[k] is None else (repr(r[k]) if isinstance(r[k], float) else r[k])
                 for k in cols] for r in rows])
    doc = {"header": _header(cfg, "rank"), "measured_c": c, "min_ratio": c,
           "cap_exceeded": capped, "rows": rows}
    (out / "rank.json").write_text(dump_json(jsonable(doc)))
    return EXIT_OK


# -- entry point ----------------------------------------------------------------------

COMMANDS = {"count": cmd_count, "verify": cmd_verify, "bound": cmd_bound, "rank": cmd_rank}


def _parse_c(text: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"--c: cannot parse {text!r} as comma-separated numbers") from None
    if not vals:
        raise ConfigError("--c: no values given")
    return vals


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="coeffsieve",
                                 description="Irreducible polynomials with prescribed coefficients.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, help_ in [("count", "exact constrained counts"),
                        ("verify", "run the exact verification suites"),
                        ("bound", "bound reports for each constraint system"),
                        ("rank", "analytic vs partition rank table")]:
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", metavar="PATH", help="experiment config (JSON)")
        p.add_argument("--workers", type=int, metavar="N")
        p.add_argument("--seed", type=int, metavar="S")
        p.add_argument("--out", metavar="DIR")
        p.add_argument("--c", metavar="VALUES", help="comma-separated positive constants")
        p.add_argument("--pr-cap", type=int, metavar="N")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config:
            cfg = ExperimentConfig.load(args.config)
        elif args.command == "verify":
            cfg = ExperimentConfig.from_dict({})
        else:
            raise ConfigError("--config: required for this command")
        cfg = cfg.override(workers=args.workers, seed=args.seed, out=args.out,
                           c=_parse_c(args.c) if args.c is not None else None,
                           pr_cap=args.pr_cap)
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InvariantViolation as exc:
        print(f"assertion failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
