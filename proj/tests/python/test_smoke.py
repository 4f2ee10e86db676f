import json
import math

import pytest

import epcgh


def test_constants():
    assert epcgh.delta_k(1) == pytest.approx(2 * math.pi / 3, abs=1e-15)
    assert epcgh.zeta_m(2) == pytest.approx(math.acos(-1 / 3), abs=1e-15)


def test_curve_is_unit_and_h_agrees():
    for k in range(1, 5):
        g = epcgh.gamma_odd(k, 0.7)
        assert len(g) == 2 * k + 2
        assert math.fsum(x * x for x in g) == pytest.approx(1.0, abs=1e-12)
        for t in (-3.0, -1e-9, 0.4, 3.1):
            assert epcgh.h_closed(k, t) == pytest.approx(epcgh.h_sum(k, t), abs=1e-12)


def test_table_rows():
    rows = epcgh.table_dis_gamma(6)
    tabled = [r for r in rows if r["metric"] == "dis_gamma"]
    assert len(tabled) == 6
    assert all(r["passed"] for r in tabled)
    assert tabled[0]["value"] == pytest.approx(0.8128, abs=1e-3)


def test_psi_on_curve_returns_parameter():
    y = epcgh.gamma_odd(1, 0.9)
    a, _ = epcgh.psi("tmc-odd:1", y)
    assert a == pytest.approx(0.9, abs=1e-9)


def test_small_budget_distortion_is_bounded():
    v = epcgh.estimate_distortion("tmc-odd:1", 2000, seed=42, threads=1)
    assert 0.0 < v <= 2 * math.pi / 3 + 1e-6
    assert v == epcgh.estimate_distortion("tmc-odd:1", 2000, seed=42, threads=2)


def test_bad_spec_raises():
    with pytest.raises(ValueError):
        epcgh.estimate_distortion("torus", 1000)


def test_fiber_and_maxima():
    e = epcgh.rho3_extrema(20000)
    assert e["max"] == pytest.approx(0.9232, abs=1e-3)
    assert e["min"] == pytest.approx(0.6476, abs=1e-3)
    count, locs = epcgh.classify_maxima(1.2, math.pi)
    assert count == 2 and len(locs) == 2


def test_verifier_transcript():
    t = json.loads(epcgh.verify_bstar(1e-6, 50))
    assert [r["certified"] for r in t["reports"]] == [True, True]


def test_duality():
    assert epcgh.edge_predicate(2, 0.0, 1.5)
    assert epcgh.duality_witness(1, [0.0, 1.5])["found"]
    assert not epcgh.duality_witness(1, [0.0, 2.5])["found"]


def test_cli_in_process(tmp_path):
    code, out, _ = epcgh.cli(["table-dis-gamma", "--kmax", "3", "--out-dir", str(tmp_path)])
    assert code == 0
    assert (tmp_path / "table_dis_gamma.csv").exists()
    assert "dis_gamma" in out
    assert epcgh.cli(["dis-rn", "--k", "9", "--out-dir", str(tmp_path)])[0] == 2


def test_acceptance_criterion_one():
    ok, line = epcgh.run_criterion(1)
    assert ok and line.startswith("[PASS] criterion 1:")
