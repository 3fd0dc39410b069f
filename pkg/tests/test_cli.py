import csv
import json
import subprocess
import sys
from pathlib import Path


from coeffsieve.cli import EXIT_CONFIG, EXIT_OK, main

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def _write(tmp_path, d):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(d))
    return str(p)


def test_count_examples(tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["count", "--config", str(CONFIGS / "count_q3.json"), "--out", str(out)]) == EXIT_OK
    text = capsys.readouterr().out
    assert "n2_a0: I_n = 0  I(n)/q^m = 1  deviation = 1" in text
    assert "n1_a0: I_n = 1" in text
    rows = list(csv.DictReader((out / "count.csv").open()))
    assert [r["I_n"] for r in rows] == ["0", "1", "1"]


def test_malformed_monomial_exit_code(tmp_path, capsys):
    cfg = {"field": {"p": 3}, "n": 2,
           "constraints": [[{"monomial": [1, 0]}], [{"monomial": [1, 0, 0]}]]}
    assert main(["count", "--config", _write(tmp_path, cfg)]) == EXIT_CONFIG
    assert "constraint 1" in capsys.readouterr().err


def test_missing_config(capsys):
    assert main(["bound"]) == EXIT_CONFIG
    assert "--config" in capsys.readouterr().err


def test_bound_preconditions(tmp_path, capsys):
    base = {"field": {"p": 5}, "n": 2, "constraints": [[{"monomial": [1, 1]}]]}
    assert main(["bound", "--config", _write(tmp_path, base)]) == EXIT_CONFIG
    assert "no valid" in capsys.readouterr().err
    base["n"] = 3
    base["constraints"] = [[{"monomial": [1, 1, 0]}]]
    assert main(["bound", "--config", _write(tmp_path, base), "--c", "0"]) == EXIT_CONFIG
    assert main(["bound", "--config", _write(tmp_path, base), "--c", "x"]) == EXIT_CONFIG


def test_bound_writes_reports(tmp_path, capsys, monkeypatch):
    cfg = {"field": {"p": 5}, "n": 3, "constraints": [[{"monomial": [1, 1, 0]}]], "c": [1.0]}
    monkeypatch.setenv("COEFFSIEVE_OUT", str(tmp_path / "env_out"))
    assert main(["bound", "--config", _write(tmp_path, cfg), "--out", str(tmp_path / "ignored")]) == EXIT_OK
    assert "(u, v) = (1, 1)" in capsys.readouterr().out
    doc = json.loads((tmp_path / "env_out" / "bound.json").read_text())
    h = doc["header"]
    assert len(h["config_hash"]) == 64 and h["modulus"] == [0, 1]
    assert len(h["notices"]) == 3 and h["pr_cap"] > 0 and h["c"] == [1.0]
    assert not (tmp_path / "ignored").exists()


def test_verify_restricted_and_p2_refused(tmp_path, capsys):
    cfg = {"batteries": ["field_core"], "out": str(tmp_path)}
    assert main(["verify", "--config", _write(tmp_path, cfg)]) == EXIT_OK
    assert "field_axioms" in capsys.readouterr().out
    assert main(["verify", "--config", _write(tmp_path, {"field": {"p": 2}})]) == EXIT_CONFIG
    assert main(["verify", "--config", _write(tmp_path, {"batteries": ["nope"]})]) == EXIT_CONFIG


def test_rank_bilinear(tmp_path, capsys):
    assert main(["rank", "--config", str(CONFIGS / "rank_bilinear_f3.json"), "--out", str(tmp_path)]) == EXIT_OK
    doc = json.loads((tmp_path / "rank.json").read_text())
    assert doc["measured_c"] == 1.0 and doc["cap_exceeded"] == []


def test_rank_zero_battery_rejected(tmp_path):
    cfg = {"mode": "rank", "field": {"p": 3},
           "rank_battery": {"kind": "explicit", "tensors": [{"order": 2, "dim": 2, "entries": []}]}}
    assert main(["rank", "--config", _write(tmp_path, cfg), "--out", str(tmp_path)]) == EXIT_CONFIG


def test_module_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "coeffsieve", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and "coeffsieve" in r.stdout
