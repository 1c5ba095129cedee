import json

import numpy as np
import pytest

from cobletheta import arith, coble, periods, theta, verify


def test_report_aggregation():
    rep = verify.Report("demo")
    with rep.check("ok", 1e-3) as r:
        r["residual"] = 1e-6
    with rep.check("ignored", 1e-3, gated=False) as r:
        r["residual"] = 1.0
    assert rep.passed
    with rep.check("bad", 0, exact=True) as r:
        r["residual"] = 2
    assert not rep.passed and rep.failures() == ["bad"]
    with rep.check("missing", 1.0) as r:
        pass
    assert "missing" in rep.failures()
    body = rep.to_json(timing=False)
    assert json.loads(json.dumps(body)) == body
    assert all("tol" in c for c in body["checks"])


def test_lower_bound_checks():
    rep = verify.Report("demo")
    with rep.check("big enough", 0.5, above=True) as r:
        r["residual"] = 0.7
    with rep.check("too small", 0.5, above=True) as r:
        r["residual"] = 0.1
    assert rep.failures() == ["too small"]


def test_proportionality_passes(pd_main):
    rep = verify.verify_proportionality((1, 2, 3, 4, 5), pd_main)
    assert rep.passed, rep.failures()


def test_proportionality_fails_with_mismatched_parameters(pd_main):
    # theta from one curve against invariants of another must not match
    rep = verify.verify_proportionality((1, 1.5, 2.2, 3.1, 4.7), pd_main)
    assert not rep.passed


def test_proportionality_fails_with_row_convention(pd_main):
    rep = verify.verify_proportionality((1, 2, 3, 4, 5), pd_main, convention="rows")
    assert not rep.passed


def test_cubic_relations_fail_off_the_locus():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(5, 5)) * 0.1
    tau = 0.3 * (X + X.T) + 1j * (np.eye(5) + 0.1 * (X @ X.T))
    rep = verify.verify_cubic_theta(tau)
    assert rep.find("every isotropic span sums to zero").residual > 1e-3


def test_plucker_exact_and_float():
    cfg = coble.random_rational_config(np.random.default_rng(5))
    assert verify.verify_plucker(cfg).passed
    assert verify.verify_plucker(cfg.as_complex()).passed


def test_degree9_exact():
    cfg = coble.random_rational_config(np.random.default_rng(6))
    assert verify.verify_degree9(cfg).passed


def test_vanishing_tables(pd_main):
    rep = verify.verify_vanishing_tables(pd_main)
    assert rep.passed, rep.failures()
    pts = verify.marked_points(pd_main)
    assert [p.name for p in pts][:6] == ["p1", "p2", "p3", "p4", "p5", "p0"]
    assert pts[0].torsion == (1, 0, 0, 0, 0)
    assert pts[6].torsion == (2, 0, 0, 0, 0)
    assert pts[-1].torsion == (0, 0, 0, 0, 0)


def test_conventions():
    rep = verify.verify_conventions()
    assert rep.passed, rep.failures()
    assert not rep.find("Cremona ratio with denominator Z_(0,1,0,1,-1)").passed


def test_stage_attribution():
    def broken(a):
        raise periods.CalibrationError("no admissible sheet labels")
    with pytest.raises(verify.StageError) as e:
        verify.run_suites(["periods"], get_periods=broken)
    assert e.value.stage == "periods"


def test_parse_suites():
    assert "optional" not in verify.parse_suites("all")
    assert verify.parse_suites("main,tables") == ["main", "tables"]
    with pytest.raises(ValueError):
        verify.parse_suites("nope")


def test_reports_are_deterministic(pd_main):
    get = lambda a: pd_main
    a = verify.run_suites("main,cubic,plucker", get_periods=get, second_a=None, seed=3).to_json(timing=False)
    b = verify.run_suites("main,cubic,plucker", get_periods=get, second_a=None, seed=3).to_json(timing=False)
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
