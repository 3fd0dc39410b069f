import json

import pytest

from coeffsieve.config import ConfigError, ExperimentConfig, parse_constraints
from coeffsieve.field import make_field

BASE = {"field": {"p": 5}, "n": 3, "constraints": [[{"monomial": [1, 1, 0], "coeff": 1}]]}


def test_defaults_and_single_system():
    cfg = ExperimentConfig.from_dict(BASE)
    assert cfg.c_values() == [0.25, 0.5, 1.0]
    assert cfg.workers == 1 and cfg.theorem_mode
    (spec,) = cfg.systems()
    assert spec.system.n == 3 and spec.sys_id == "q5_n3_0"
    assert [(pr.u, pr.v) for pr in cfg.grid(4)] == [(1, 1), (1, 2), (2, 1)]


def test_hash_ignores_out_and_workers():
    cfg = ExperimentConfig.from_dict(BASE)
    assert cfg.override(workers=8, out="/tmp/x").config_hash() == cfg.config_hash()
    assert cfg.override(seed=3).config_hash() != cfg.config_hash()
    assert cfg.override(c=[1.0]).config_hash() != cfg.config_hash()


@pytest.mark.parametrize("patch,fragment", [
    ({"bogus": 1}, "unknown keys"),
    ({"schema_version": 2}, "schema_version"),
    ({"c": [0.5, 0]}, "c[1]"),
    ({"c": [-1]}, "c[0]"),
    ({"workers": 0}, "workers"),
    ({"field": {"p": 2}}, "odd q"),
    ({"field": {"p": 6}}, "field"),
    ({"uv_grid": [[1]]}, "uv_grid"),
    ({"mode": "fast"}, "mode"),
])
def test_validation_messages(patch, fragment):
    with pytest.raises(ConfigError, match=None) as err:
        ExperimentConfig.from_dict({**BASE, **patch})
    assert fragment in str(err.value)


def test_constraint_errors_name_the_constraint():
    F = make_field(3)
    bad = [[{"monomial": [1, 0], "coeff": 1}], [{"monomial": [1], "coeff": 1}]]
    with pytest.raises(ConfigError) as err:
        parse_constraints(F, 2, bad)
    assert "constraint 1" in str(err.value) and "constraints[1][0]" in str(err.value)
    with pytest.raises(ConfigError):
        parse_constraints(F, 2, [[{"coeff": 1}]])
    (R,) = parse_constraints(F, 2, [[{"monomial": [1, 0], "coeff": 1},
                                     {"monomial": [1, 0], "coeff": 2}]])
    assert R.is_zero


def test_theorem_preconditions():
    cfg = ExperimentConfig.from_dict({**BASE, "n": 5, "constraints": [[{"monomial": [1, 0, 0, 0, 0]}]]})
    (spec,) = cfg.systems()
    with pytest.raises(ConfigError, match="n < p"):
        cfg.check_theorem_preconditions(spec.system, "config")
    cfg2 = ExperimentConfig.from_dict({**BASE, "n": 2, "constraints": [[{"monomial": [1, 0]}]]})
    with pytest.raises(ConfigError, match="no valid"):
        cfg2.check_theorem_preconditions(cfg2.systems()[0].system, "config", need_params=True)
    cfg3 = ExperimentConfig.from_dict({**BASE, "uv_grid": [[1, 2]]})
    with pytest.raises(ConfigError, match="uv_grid"):
        cfg3.check_theorem_preconditions(cfg3.systems()[0].system, "config", need_params=True)


def test_rank_mode_allows_even_characteristic():
    cfg = ExperimentConfig.from_dict({"mode": "rank", "field": {"p": 2}})
    assert cfg.field_ctx().q == 2


def test_load_reports_json_errors(tmp_path):
    p = tmp_path / "c.json"
    p.write_text("{not json")
    with pytest.raises(ConfigError, match="invalid JSON"):
        ExperimentConfig.load(p)
    p.write_text(json.dumps(BASE))
    assert ExperimentConfig.load(p).config_hash() == ExperimentConfig.from_dict(BASE).config_hash()
    with pytest.raises(ConfigError, match="cannot read"):
        ExperimentConfig.load(tmp_path / "missing.json")


def test_duplicate_ids_rejected():
    s = {"id": "x", "n": 3, "constraints": BASE["constraints"]}
    with pytest.raises(ConfigError, match="unique"):
        ExperimentConfig.from_dict({"field": {"p": 5}, "systems": [s, s]}).systems()
