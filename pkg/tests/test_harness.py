import json
import random

import pytest

from curank.cucore import is_full
from curank.errors import UnknownPropertyName
from curank.harness import (
    REGISTRY,
    Property,
    generate,
    manifest_names,
    parse_model_spec,
    run_property,
    run_suite,
)
from curank.models import PerforatedModel
from curank.scalar import ExtScalar


def test_manifest_matches_registry():
    assert manifest_names() == list(REGISTRY)
    assert len(REGISTRY) == len(set(REGISTRY))


def test_generate_is_deterministic():
    for kind in ("perforated:3", "pointfn:p,q", "spectral", "directsum:perforated:2|idempotent"):
        for what in ("element", "profile", "chain") if kind == "spectral" else ("element", "chain"):
            assert repr(generate(kind, 8, 5, what)) == repr(generate(kind, 8, 5, what))


def test_full_generation_is_full():
    for seed in range(40):
        S = parse_model_spec("directsum:perforated:3|pointfn:p,q")
        assert is_full(S, generate(S, 6, seed, full=True))


def test_parse_model_spec_rejects_garbage():
    with pytest.raises(Exception):
        parse_model_spec("banach:3")


def test_homogeneity_passes_everywhere():
    report = run_suite(["rho.homogeneity"], cases=1000, seed=42)
    res = report.results[0]
    assert res.failed == 0 and res.passed == 1000 and report.ok


def test_zero_ratio_property_is_not_vacuous():
    res = run_suite(["rho.zero_iff_empty_family"], cases=500, seed=1).results[0]
    assert res.failed == 0
    assert res.non_vacuous >= 100


def test_unknown_property_name():
    with pytest.raises(UnknownPropertyName):
        run_suite(["rho.no_such_law"])


def _perforated_case(rng):
    return {"S": PerforatedModel(3), "x": ExtScalar(rng.randint(0, 40))}


def test_floor_violation_is_reported():
    prop = Property("test.always_vacuous", "", _perforated_case, lambda c: None)
    res = run_property(prop, 20, 0, floor=5)
    assert res.vacuous == 20 and not res.floor_met and not res.ok


def test_failures_are_shrunk():
    prop = Property("test.small_only", "", _perforated_case, lambda c: c["x"] < ExtScalar(7))
    res = run_property(prop, 200, 3)
    assert res.failed > 0 and not res.ok
    assert res.counterexample == "S=Perforated(3), x=7"


def test_errors_count_as_failures():
    def boom(c):
        raise RuntimeError("broken check")

    res = run_property(Property("test.raises", "", _perforated_case, boom), 5, 0)
    assert res.failed == 5
    assert "broken check" in res.error


def test_report_serializes():
    names = ["rc.homogeneity", "osc.trace_chain"]
    report = run_suite(names, cases=30, seed=7)
    data = json.loads(report.to_json())
    assert [r["name"] for r in data["properties"]] == names
    assert data["ok"] is False  # 30 cases cannot meet the default floor of 50
    assert report.to_json() == run_suite(names, 30, 7).to_json()
    assert "FLOOR" in report.to_text()


def test_seeds_are_per_property():
    a = run_property(REGISTRY["rc.antitone"], 50, 9)
    b = run_suite(["rho.homogeneity", "rc.antitone"], 50, 9).results[1]
    assert (a.passed, a.vacuous) == (b.passed, b.vacuous)
    rng1, rng2 = random.Random("9:rc.antitone"), random.Random("9:rc.antitone")
    assert repr(REGISTRY["rc.antitone"].generate(rng1)) == repr(REGISTRY["rc.antitone"].generate(rng2))


@pytest.mark.slow
def test_full_suite_is_green():
    report = run_suite(cases=200, seed=0)
    bad = [(r.name, r.failed, r.non_vacuous, r.counterexample) for r in report.results if not r.ok]
    assert not bad
