"""Experiment configuration: a versioned JSON document.

Example::

    {
      "schema_version": 1,
      "field": {"p": 5, "e": 1},
      "n": 3,
      "constraints": [[{"monomial": [1, 1, 0], "coeff": 1}]],
      "c": [0.25, 0.5, 1.0],
      "uv_grid": "all",
      "batteries": "all",
      "out": "coeffsieve_out",
      "workers": 1,
      "pr_cap": 10000000,
      "seed": 0
    }

``constraints`` is a list of polynomials, each a list of terms.  Several
systems can be given at once under ``"systems"``, each with its own ``id``,
``constraints`` and optionally ``field`` and ``n``.
"""

from __future__ import annotations

import copy
import hashlib
import json
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .bounds import VaughanParams, valid_params
from .coeffpoly import CoeffPoly, ConstraintSystem
from .field import FieldCtx, FieldError, make_field
from .ranks import DEFAULT_CAP

SCHEMA_VERSION = 1

KNOWN_KEYS = {"schema_version", "field", "n", "constraints", "systems", "c", "uv_grid", "batteries",
              "rank_battery", "mode", "out", "workers", "pr_cap", "seed"}
# fields that change where or how fast a run happens, never what it computes
VOLATILE_KEYS = {"out", "workers"}

DEFAULTS: dict[str, Any] = {
    "schema_version": SCHEMA_VERSION,
    "c": [0.25, 0.5, 1.0],
    "uv_grid": "all",
    "batteries": "all",
    "mode": "theorem",
    "out": "coeffsieve_out",
    "workers": 1,
    "pr_cap": DEFAULT_CAP,
    "seed": 0,
}

NOTICES = [
    "parameter range: u, v >= 1 with u + v <= n - 1; a stated condition u + v > n would leave "
    "the type II range v <= k <= n - u empty, while the bound minimizes over u + v < n",
    "diagonal normalization: T(x, ..., x) = j! * R_top(x) for the polarization T of a "
    "degree-j polynomial R, valid for j < p",
    "character convention: psi_c(x) = exp(2 pi i Tr(c x) / p)",
]


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field path."""


@dataclass(frozen=True)
class SystemSpec:
    sys_id: str
    system: ConstraintSystem


@dataclass
class ExperimentConfig:
    raw: dict

    # -- construction --------------------------------------------------------
    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        if not isinstance(d, dict):
            raise ConfigError("config: expected a JSON object")
        unknown = sorted(set(d) - KNOWN_KEYS)
        if unknown:
            raise ConfigError(f"config: unknown keys {unknown}")
        raw = copy.deepcopy(DEFAULTS)
        raw.update(copy.deepcopy(d))
        cfg = cls(raw)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentConfig":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"config: cannot read {path}: {exc.strerror}") from None
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: invalid JSON at line {exc.lineno}: {exc.msg}") from None
        return cls.from_dict(d)

    def override(self, **kw) -> "ExperimentConfig":
        d = copy.deepcopy(self.raw)
        d.update({k: v for k, v in kw.items() if v is not None})
        return ExperimentConfig.from_dict(d)

    # -- accessors -----------------------------------------------------------
    @property
    def workers(self) -> int:
        return self.raw["workers"]

    @property
    def seed(self) -> int:
        return self.raw["seed"]

    @property
    def pr_cap(self) -> int:
        return self.raw["pr_cap"]

    @property
    def out(self) -> str:
        return self.raw["out"]

    @property
    def theorem_mode(self) -> bool:
        return self.raw["mode"] == "theorem"

    def c_values(self) -> list[float]:
        return [float(c) for c in self.raw["c"]]

    def grid(self, n: int) -> list[VaughanParams]:
        g = self.raw["uv_grid"]
        if g == "all":
            return valid_params(n)
        return [VaughanParams(int(u), int(v)) for u, v in g]

    def to_json(self) -> dict:
        return copy.deepcopy(self.raw)

    def config_hash(self) -> str:
        """SHA-256 of the canonical JSON, ignoring output location and worker count."""
        d = {k: v for k, v in self.raw.items() if k not in VOLATILE_KEYS}
        blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    # -- validation ------------------------------------------------------------
    def validate(self) -> None:
        r = self.raw
        if r["schema_version"] != SCHEMA_VERSION:
            raise ConfigError(f"schema_version: expected {SCHEMA_VERSION}, got {r['schema_version']!r}")
        if r["mode"] not in ("theorem", "rank"):
            raise ConfigError(f"mode: expected 'theorem' or 'rank', got {r['mode']!r}")
        for key in ("workers", "pr_cap", "seed"):
            if not isinstance(r[key], int) or isinstance(r[key], bool) or r[key] < (0 if key == "seed" else 1):
                raise ConfigError(f"{key}: expected a positive integer, got {r[key]!r}")
        c = r["c"]
        if not isinstance(c, list) or not c:
            raise ConfigError("c: expected a nonempty list of numbers")
        for i, v in enumerate(c):
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise ConfigError(f"c[{i}]: expected a number, got {v!r}")
            if not v > 0:
                raise ConfigError(f"c[{i}]: must be positive, got {v!r}")
        g = r["uv_grid"]
        if g != "all":
            if not isinstance(g, list) or not all(isinstance(p, list) and len(p) == 2 for p in g):
                raise ConfigError("uv_grid: expected 'all' or a list of [u, v] pairs")
        if not isinstance(r["out"], str):
            raise ConfigError("out: expected a path string")
        b = r["batteries"]
        if b != "all" and not (isinstance(b, list) and all(isinstance(x, str) for x in b)):
            raise ConfigError("batteries: expected 'all' or a list of suite/module names")
        if "field" in r:
            self._field(r["field"], "field")

    def _field(self, d, path: str) -> FieldCtx:
        if not isinstance(d, dict) or "p" not in d:
            raise ConfigError(f"{path}: expected an object with at least 'p'")
        if self.theorem_mode and d["p"] == 2:
            raise ConfigError(f"{path}: theorem mode needs odd q, got p = 2")
        try:
            return make_field(int(d["p"]), int(d.get("e", 1)), d.get("modulus"),
                              allow_even=not self.theorem_mode)
        except FieldError as exc:
            raise ConfigError(f"{path}: {exc}") from None

    def field_ctx(self) -> FieldCtx:
        if "field" not in self.raw:
            raise ConfigError("field: missing")
        return self._field(self.raw["field"], "field")

    def systems(self) -> list[SystemSpec]:
        """Constraint systems described by the config, validated."""
        r = self.raw
        if "systems" in r:
            if not isinstance(r["systems"], list) or not r["systems"]:
                raise ConfigError("systems: expected a nonempty list")
            entries = [(f"systems[{i}]", s) for i, s in enumerate(r["systems"])]
        elif "constraints" in r:
            entries = [("", {"constraints": r["constraints"]})]
        else:
            raise ConfigError("constraints: missing (give 'constraints' or 'systems')")
        out = []
        for path, s in entries:
            pre = f"{path}." if path else ""
            if not isinstance(s, dict):
                raise ConfigError(f"{path}: expected an object")
            ctx = self._field(s["field"], pre + "field") if "field" in s else self.field_ctx()
            n = s.get("n", r.get("n"))
            if not isinstance(n, int) or isinstance(n, bool) or n < 1:
                raise ConfigError(f"{pre}n: expected a positive integer, got {n!r}")
            polys = parse_constraints(ctx, n, s.get("constraints"), pre + "constraints")
            sys_id = str(s.get("id", f"q{ctx.q}_n{n}_{len(out)}"))
            out.append(SystemSpec(sys_id, ConstraintSystem(ctx, n, tuple(polys))))
        ids = [s.sys_id for s in out]
        if len(set(ids)) != len(ids):
            raise ConfigError("systems: ids must be unique")
        return out

    def check_theorem_preconditions(self, system: ConstraintSystem, path: str, *,
                                    need_params: bool = False) -> None:
        ctx = system.ctx
        if not self.theorem_mode:
            if system.n >= ctx.p:
                warnings.warn(f"{path}: n = {system.n} >= p = {ctx.p}; allowed outside theorem mode",
                              stacklevel=2)
            return
        if ctx.p == 2:
            raise ConfigError(f"{path}.field: theorem mode needs odd q")
        if system.n >= ctx.p:
            raise ConfigError(f"{path}.n: theorem mode needs n < p, got n = {system.n}, p = {ctx.p}")
        if need_params:
            if system.n < 3:
                raise ConfigError(f"{path}.n: no valid (u, v) for n = {system.n}; need n >= 3")
            for u, v in ([] if self.raw["uv_grid"] == "all" else self.raw["uv_grid"]):
                try:
                    VaughanParams(int(u), int(v)).check(system.n)
                except ValueError as exc:
                    raise ConfigError(f"uv_grid: {exc}") from None


def parse_constraints(ctx: FieldCtx, n: int, spec, path: str = "constraints") -> list[CoeffPoly]:
    if not isinstance(spec, list) or not spec:
        raise ConfigError(f"{path}: expected a nonempty list of polynomials")
    polys = []
    for i, poly in enumerate(spec):
        if not isinstance(poly, list):
            raise ConfigError(f"{path}[{i}]: expected a list of terms")
        terms: dict[tuple[int, ...], int] = {}
        for t, term in enumerate(poly):
            where = f"{path}[{i}][{t}]"
            if not isinstance(term, dict) or "monomial" not in term:
                raise ConfigError(f"{where}: expected an object with 'monomial' and 'coeff'")
            mono = term["monomial"]
            if not isinstance(mono, list) or not all(isinstance(e, int) and e >= 0 for e in mono):
                raise ConfigError(f"{where}.monomial: expected a list of nonnegative integers")
            if len(mono) != n:
                raise ConfigError(f"{where}.monomial: constraint {i} has a monomial of length "
                                  f"{len(mono)}, expected n = {n}")
            try:
                c = ctx.coerce(term.get("coeff", 1))
            except (TypeError, ValueError, FieldError) as exc:
                raise ConfigError(f"{where}.coeff: {exc}") from None
            key = tuple(mono)
            terms[key] = ctx.add(terms.get(key, 0), c)
        try:
            polys.append(CoeffPoly(ctx, n, terms))
        except ValueError as exc:
            raise ConfigError(f"{path}[{i}]: {exc}") from None
    return polys
