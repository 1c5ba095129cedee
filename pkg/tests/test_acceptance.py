"""Acceptance criteria 1-11, one test each.

Every test records a one-line PASS/FAIL summary; pytest prints the lines at
the end of the run, and ``python3 tests/test_acceptance.py`` prints them
directly.
"""
import time

import numpy as np
import pytest

from cobletheta import arith, coble, gf3, periods, theta, verify

MAIN_A = (1, 2, 3, 4, 5)
SECOND_A = (1, 1.5, 2.2, 3.1, 4.7)
RESULTS: dict[int, str] = {}


def record(n: int, title: str, ok: bool, detail: str, gated: bool = True) -> None:
    tag = "PASS" if ok else "FAIL"
    suffix = "" if gated else " (reported, not gated)"
    RESULTS[n] = f"criterion {n:2d} {tag}: {title}: {detail}{suffix}"
    print(RESULTS[n])


def gate(n: int, title: str, rep: verify.Report, seconds: float, budget: float) -> None:
    worst = max((c for c in rep.checks if c.gated and c.compare == "<"), key=lambda c: c.residual / c.tol,
                default=None)
    detail = f"{sum(c.passed for c in rep.checks if c.gated)}/{sum(c.gated for c in rep.checks)} checks"
    if worst is not None:
        detail += f", worst {worst.name} {worst.residual:.2e} < {worst.tol:g}"
    detail += f", {seconds:.2f}s (budget {budget:g}s)"
    if rep.failures():
        detail += f", failed: {rep.failures()}"
    ok = rep.passed and seconds < budget
    record(n, title, ok, detail)
    assert rep.passed, rep.failures()
    assert seconds < budget


def test_criterion_01_finite_geometry_counts():
    t0 = time.perf_counter()
    rep = verify.verify_finite_geometry(check_group=False)
    gate(1, "finite geometry counts", rep, time.perf_counter() - t0, 1.0)


def test_criterion_02_group_closure():
    t0 = time.perf_counter()
    n = len(gf3.group_closure(gf3.weyl_generators(), mod_center=True))
    dt = time.perf_counter() - t0
    record(2, "reflection group mod +-I", n == 51840 and dt < 5, f"order {n}, {dt:.2f}s (budget 5s)")
    assert n == 51840
    assert dt < 5


def test_criterion_03_coble_relations_exact():
    rng = np.random.default_rng(3)
    t0 = time.perf_counter()
    rep = verify.Report("coble exact")
    for _ in range(10):
        rep.extend(verify.verify_coble_exact(coble.random_rational_config(rng), rng, n_q=20))
    gate(3, "Coble relations exact on 10 rational configs", rep, time.perf_counter() - t0, 30.0)


def test_criterion_04_normal_form_ratio():
    rng = np.random.default_rng(4)
    t0 = time.perf_counter()
    rep = verify.Report("ratio")
    avs = [tuple(np.sort(rng.uniform(0.2, 6.0, 5))) for _ in range(5)]
    qs = [verify.quotient_ratio(a) for a in avs]
    with rep.check("modulus", 1e-10, avs) as r:
        r["residual"] = max(q["modulus_residual"] for q in qs)
    with rep.check("sixth power positive real", 1e-9, avs) as r:
        r["residual"] = max(q["sixth_power_imag"] for q in qs)
        r["passed"] = all(q["sixth_power_positive"] for q in qs)
    gate(4, "normal-form ratio on 5 random a", rep, time.perf_counter() - t0, 60.0)


def test_criterion_05_period_structure():
    t0 = time.perf_counter()
    pd = periods.compute_periods(MAIN_A)
    rep = verify.verify_periods(pd)
    rep.checks = [c for c in rep.checks if "Abel-Jacobi" not in c.name]
    gate(5, "period structure for a=(1,2,3,4,5)", rep, time.perf_counter() - t0, 60.0)


def test_criterion_06_abel_jacobi(pd_main):
    res = periods.aj_congruence(pd_main)
    ok = max(res) < 1e-6
    record(6, "Abel-Jacobi congruence", ok, f"max lattice residual {max(res):.2e} < 1e-06 over p1..p5")
    assert ok


def test_criterion_07_theta_identities(pd_main):
    t0 = time.perf_counter()
    spec = theta.TruncationSpec(tol=1e-10)
    rep = verify.verify_theta_identities(pd_main.tau, "computed tau", spec=spec)
    rep.extend(verify.verify_theta_identities(arith.tau0(), "tau0", spec=spec))
    gate(7, "theta engine identities at computed tau and tau0", rep, time.perf_counter() - t0, 120.0)


def test_criterion_08_theta_cubes_proportional_to_coble():
    t0 = time.perf_counter()
    rep = verify.Report("main")
    for a in (MAIN_A, SECOND_A):
        pd = periods.compute_periods(a)
        rep.extend(verify.verify_proportionality(a, pd, tol=1e-5))
    gate(8, "theta cubes proportional to Coble invariants", rep, time.perf_counter() - t0, 300.0)


def test_criterion_09_cubic_relations(tau_main, cubes_main):
    t0 = time.perf_counter()
    rep = verify.verify_cubic_theta(tau_main, 1e-5, cubes=cubes_main)
    gate(9, "cubic theta relations with negative controls", rep, time.perf_counter() - t0, 60.0)


def test_criterion_10_vanishing_tables(pd_main):
    t0 = time.perf_counter()
    rep = verify.verify_vanishing_tables(pd_main)
    gate(10, "vanishing tables at the 12 marked points", rep, time.perf_counter() - t0, 120.0)


def test_criterion_11_optional(pd_main):
    rep = verify.verify_optional(pd_main)
    ok = all(c.residual is not None and c.residual < c.tol for c in rep.checks)
    detail = ", ".join(f"{c.name} {c.residual:.1e}" for c in rep.checks)
    record(11, "non-isotropic vanishing and equivariance", ok, detail, gated=False)


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
