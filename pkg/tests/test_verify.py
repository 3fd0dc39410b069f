import pytest

from coeffsieve.verify import MODULE_SUITES, SUITES, resolve_batteries, run_suites

FAST = ["field_axioms", "irreducible_count", "prime_polynomial", "lambda_correction",
        "orthogonality", "composition", "difference_identity", "bound_envelopes"]


def test_resolve():
    assert resolve_batteries("all") == list(SUITES)
    assert resolve_batteries(["field_core"]) == ["field_axioms"]
    assert resolve_batteries(["upoly", "field_axioms"]) == ["field_axioms", "irreducible_count",
                                                            "prime_polynomial"]
    with pytest.raises(KeyError):
        resolve_batteries(["nope"])
    assert set(s for v in MODULE_SUITES.values() for s in v) == set(SUITES)


def test_fast_suites_pass():
    results, timing = run_suites(FAST)
    for r in results:
        assert r.passed, (r.name, r.failures[:5])
        assert r.checked > 0
        assert r.to_json()["name"] == r.name
    assert set(timing) >= set(FAST)


def test_orthogonality_battery_size():
    (r,), _ = run_suites(["orthogonality"])
    systems = r.data["systems"]
    assert len(systems) >= 20
    assert {s["system"].split("_")[0] for s in systems} == {"q3", "q5"}
