import csv
import io
import json
import math

import pytest

from coeffsieve.bounds import VaughanParams
from coeffsieve.coeffpoly import CoeffPoly, ConstraintSystem
from coeffsieve.field import make_field
from coeffsieve.report import (CSV_COLUMNS, csv_text, full_report, jsonable, strip_timing,
                               write_bound_outputs)


def _sys(q, n, terms):
    F = make_field(q)
    return ConstraintSystem(F, n, (CoeffPoly(F, n, terms),))


@pytest.fixture(scope="module")
def q5_a0a1():
    return full_report(_sys(5, 3, {(1, 1, 0): 1}), [0.25, 0.5, 1.0], sys_id="q5_n3_a0a1")


def test_report_shape(q5_a0a1):
    rep = q5_a0a1
    assert rep.j == 2 and rep.S == (1,)
    assert len(rep.rows) == 3                      # one (u, v) times three c
    assert len(rep.tuples) == 4                    # nontrivial characters of F_5
    assert sum(r["argmin_flag"] for r in rep.rows) == 3
    for r in rep.rows:
        assert set(CSV_COLUMNS) <= set(r)
        assert math.isfinite(r["rhs"]) and r["rhs"] > 0
        assert r["ratio"] == pytest.approx(float(rep.exact["deviation"]) / r["rhs"])
    assert [x["c"] for x in rep.rhs] == [0.25, 0.5, 1.0]


def test_deviation_only_report():
    rep = full_report(_sys(3, 2, {(1, 0): 1, (0, 0): 2}), [1.0], grid=[], sys_id="n2")
    assert rep.exact["deviation"] == 0
    assert len(rep.rows) == 1 and rep.rows[0]["rhs"] == ""
    assert rep.rhs == []


def test_rejects_nonpositive_c():
    with pytest.raises(ValueError):
        full_report(_sys(5, 3, {(1, 1, 0): 1}), [0.0])


def test_invalid_grid_rejected():
    with pytest.raises(ValueError):
        full_report(_sys(5, 3, {(1, 1, 0): 1}), [1.0], grid=[VaughanParams(2, 1)])


def test_outputs_round_trip(tmp_path, q5_a0a1):
    write_bound_outputs([q5_a0a1], tmp_path, {"note": "x"})
    rows = list(csv.reader(io.StringIO((tmp_path / "bound.csv").read_text())))
    assert rows[0] == CSV_COLUMNS and len(rows) == 4
    doc = json.loads((tmp_path / "bound.json").read_text())
    assert "timing" in doc and "timing" not in doc["reports"][0]
    assert doc["reports"][0]["exact"]["deviation"] == str(q5_a0a1.exact["deviation"])
    assert csv_text([q5_a0a1]) == (tmp_path / "bound.csv").read_text()


def test_parallel_report_identical():
    sys = _sys(5, 3, {(2, 0, 0): 1, (0, 1, 1): 1})
    a = full_report(sys, [0.5, 1.0], sys_id="s", workers=1)
    b = full_report(sys, [0.5, 1.0], sys_id="s", workers=2)
    assert strip_timing(a.to_json()) == strip_timing(b.to_json())
    assert csv_text([a]) == csv_text([b])


def test_jsonable():
    from fractions import Fraction
    assert jsonable({1: [math.inf, Fraction(1, 3), 2.5]}) == {"1": ["inf", "1/3", 2.5]}
