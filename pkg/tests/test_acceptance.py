"""Acceptance criteria: each test prints one PASS/FAIL line and enforces its runtime budget."""

import json
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from gsrbound import suites
from gsrbound.bounds import szego_sum
from gsrbound.cli import main
from gsrbound.eigensolve import eig_extreme
from gsrbound.operator import JacobiCoefficients, Perturbation, apply_perturbation, free_operator


def _report(number, title, ok, detail, elapsed, budget):
    within = elapsed <= budget
    status = "PASS" if ok and within else "FAIL"
    line = f"[{status}] criterion {number:2d} {title}: {detail} ({elapsed:.2f}s / {budget:.0f}s)"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line
    assert within, line


def _timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0


def test_01_gsr_identity():
    res, dt = _timed(suites.gsr_suite, trials=200, n_sites=400, tol=1e-10)
    assert len(res.records) == 200
    worst = res.summary["max_relative_residual"]
    _report(1, "GSR identity", res.passed and worst <= 1e-10, f"max residual/scale {worst:.2e}", dt, 10)


def test_02_commutators():
    res, dt = _timed(suites.commutator_suite, trials=50, n_sites=40, tol=1e-13)
    _report(2, "commutator identities", res.passed, f"max entry error {res.summary['max_error']:.2e}", dt, 2)


def test_03_w_conjugation():
    res, dt = _timed(suites.w_conjugation_suite, trials=50)
    exact = res.summary["exact"]
    _report(3, "W-conjugation", res.passed and exact == 50, f"{exact}/50 exact", dt, 2)


def test_04_top_edge_certificates():
    res, dt = _timed(suites.thm41_suite, trials=100)
    s = res.summary
    ok = res.passed and s["failures"] == 0 and s["suspect"] == 0 and s["max_boundary_mass"] <= 1e-8
    detail = f"{s['failures']} failures, {s['suspect']} suspect, max boundary mass {s['max_boundary_mass']:.1e}"
    _report(4, "comparison certificates (top edge)", ok, detail, dt, 60)


def test_05_bottom_edge_duality():
    res, dt = _timed(suites.thm43_suite, trials=50, tol=1e-12)
    s = res.summary
    detail = f"{s['failures']} failures, max deviation {s['max_dev_conjugated']:.1e}"
    _report(5, "bottom-edge certificates via W-duality", res.passed, detail, dt, 30)


def test_06_sturm_vs_dense():
    res, dt = _timed(suites.sturm_suite, trials=50, n_sites=200, tol=1e-10)
    err = res.summary["max_abs_diff"]
    _report(6, "Sturm bisection vs dense", res.passed and err <= 1e-10, f"max |dlambda| {err:.1e}", dt, 10)


def test_07_single_site_bound_state():
    s = 1.5
    exact = np.sqrt(s * s + 4) - 2

    def run():
        J = apply_perturbation(free_operator(600, b=-2.0), Perturbation(db={0: s}))
        top = eig_extreme(J, 1, "top").eigenvalues[0]
        dense = np.linalg.eigvalsh(J.dense())[-1]
        return top, dense

    (top, dense), dt = _timed(run)
    err = abs(top - exact)
    ok = err <= 1e-6 and abs(dense - exact) <= 1e-6
    _report(7, "single-site bound state", ok, f"top {top:.12f}, |err| {err:.1e}", dt, 5)


def test_08_lieb_thirring_sandwich():
    res, dt = _timed(suites.lt_suite, meshes=(0.01, 0.005))
    assert len(res.records) == 6
    ok = res.passed and all(r["upper_gap"] >= 0 and r["lower_gap"] >= 0 for r in res.records)
    _report(8, "Lieb-Thirring sandwich", ok, f"min slack-free gap {res.summary['min_gap']:.3e}", dt, 60)


def test_09_szego_sum():
    def run():
        free = szego_sum(JacobiCoefficients.constant(1.0, 0.0), Perturbation(db={0: 1.5}), n_sites=2000)
        sweep = suites.szego_suite(trials=20)
        return free, sweep

    (free, sweep), dt = _timed(run)
    ok = abs(free.lhs - np.sqrt(0.5)) <= 1e-5 and abs(free.c_emp - 0.4714) <= 1e-4
    cemp = [r["c_emp"] for r in sweep.records]
    ok = ok and len(cemp) == 20 and all(np.isfinite(cemp))
    detail = f"lhs {free.lhs:.6f}, C_emp {free.c_emp:.5f}, period-2 max C_emp {max(cemp):.4f} (reported)"
    _report(9, "Szego sum", ok, detail, dt, 30)


SPEC = {
    "seed": 11,
    "scenarios": [
        {"kind": "gsr-check", "background": {"type": "periodic", "a": [1.0, 1.5], "b": [0.2, -0.4]}, "trials": 5},
        {"kind": "theorem41", "background": {"type": "periodic", "a": [1.0, 1.0], "b": [0.0, -1.0]},
         "perturbation": {"db": [[0, 2.0]]}, "k": 3},
        {"kind": "szego-sweep", "background": {"type": "periodic", "a": [1.0, 1.0], "b": [0.0, -1.0]},
         "trials": 5, "sites": 400},
        {"kind": "commutator", "trials": 5},
    ],
}


def test_10_determinism(tmp_path, monkeypatch):
    monkeypatch.setenv("GSR_FIXED_CLOCK", "1")
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps(SPEC))

    def run():
        codes = [main(["run", "--spec", str(spec), "--out", str(tmp_path / d), "--seed", "5"]) for d in ("a", "b")]
        return codes, [(tmp_path / d / "report.json").read_bytes() for d in ("a", "b")]

    (codes, blobs), dt = _timed(run)
    ok = codes == [0, 0] and blobs[0] == blobs[1]
    _report(10, "deterministic reports", ok, f"{len(blobs[0])} bytes, identical={blobs[0] == blobs[1]}", dt, 5)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
