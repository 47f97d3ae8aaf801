import math
import os
from pathlib import Path

import pytest

import svfkit

FIXTURES = Path(os.environ.get("SVFKIT_FIXTURE_DIR", Path(__file__).resolve().parents[2] / "fixtures"))


def test_hausdorff_matches_pairs():
    a = svfkit.CompactSet.points([[0.0], [3.0]])
    b = svfkit.CompactSet.points([[1.0], [2.0], [7.0]])
    value, err = svfkit.hausdorff(a, b)
    assert err == 0.0
    assert value == pytest.approx(4.0)
    assert svfkit.hausdorff_via_pairs(a, b) == value


def test_metric_pairs_and_combination():
    a = svfkit.CompactSet.points([[-1.0], [1.0]])
    b = svfkit.CompactSet.points([[0.0]])
    pairs = svfkit.metric_pairs(a, b)
    assert [(p[0], p[1]) for p in pairs] == [([-1.0], [0.0]), ([1.0], [0.0])]
    avg = svfkit.metric_linear_combination([0.5, 0.5], [a, b])
    assert avg.finite_points() == [[-0.5], [0.5]]


def test_order_of_sets_matters():
    sets = [[[0.0]], [[-1.0], [1.0]], [[-2.0], [2.0]]]
    lam = [1 / 3, 1 / 3, 1 / 3]
    fwd = svfkit.metric_linear_combination(lam, [svfkit.CompactSet.points(s) for s in sets])
    swp = svfkit.metric_linear_combination(lam, [svfkit.CompactSet.points(s) for s in (sets[1], sets[0], sets[2])])
    assert len(fwd.finite_points()) == 2
    assert len(swp.finite_points()) == 4


def test_jump_analysis_of_tilde_example():
    r = svfkit.jump_analysis(FIXTURES / "finite_G_tilde.json", 0.5)
    assert r["property1"]["pass"] and r["property2"]["pass"]
    pts = sorted(p[0] for p in r["A_F"]["set"]["points"])
    assert pts == pytest.approx([-0.625, -0.5, 0.5, 0.625], abs=1e-9)
    assert r["representation"]["gap"] <= 1e-9


def test_disc_defect():
    r = svfkit.jump_analysis(FIXTURES / "discs_F.json", 0.5, overrides={"sample_eps": 0.05})
    assert not r["property1"]["pass"]
    assert r["property1"]["defect"] == pytest.approx(2 * math.sqrt(2) - 1, abs=1e-6)


def test_variation_profile():
    r = svfkit.variation_profile(FIXTURES / "finite_G.json")
    assert r["total"] == pytest.approx(2.25, abs=1e-6)


def test_svf_evaluate_and_errors():
    F = svfkit.load_svf(str(FIXTURES / "tent_singleton.json"))
    assert F.evaluate(0.25).finite_points() == [[0.5]]
    with pytest.raises(svfkit.SvfkitError) as info:
        F.evaluate(2.0)
    assert info.value.code == "out_of_domain"
    with pytest.raises(svfkit.SvfkitError) as info:
        svfkit.parse_svf("{ not json")
    assert info.value.code == "parse_error"


def test_run_experiment_writes_files(tmp_path):
    code, report, files = svfkit.run_experiment("variation_profile", FIXTURES / "constant.json", tmp_path)
    assert code == 0
    assert report["status"] == "ok"
    assert any(f.endswith("variation.csv") for f in files)
