"""Seeded randomized verification suites.

Each suite returns a :class:`SuiteResult` with one record per trial; the
acceptance tests and the ``verify`` command share these generators so the
numbers they report are the same.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .bounds import (
    bottom_levels,
    lt_sandwich_check,
    normalized_background,
    szego_sum,
    theorem41_certificate,
    theorem43_certificate,
)
from .eigensolve import eig_extreme
from .groundstate import periodic_edge_state
from .lattice import LatticeBox
from .operator import (
    JacobiCoefficients,
    JacobiOperator,
    Perturbation,
    apply_perturbation,
    build_operator,
    conjugate_W,
    shift,
)
from .potentials import cosine, square_well, zero
from .quadform import commutator_check, gsr_both_sides, random_interior_f

MAX_SITES = 1 << 15


@dataclass
class SuiteResult:
    name: str
    records: list[dict] = field(default_factory=list)
    passed: bool = True
    summary: dict = field(default_factory=dict)
    elapsed: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = ", ".join(f"{k}={_fmt(v)}" for k, v in self.summary.items())
        return f"[{status}] {self.name}: {len(self.records)} trials, {extra} ({self.elapsed:.2f}s)"


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.3e}"
    return str(v)


def random_periodic(rng: np.random.Generator, max_period: int = 4) -> JacobiCoefficients:
    p = int(rng.integers(1, max_period + 1))
    return JacobiCoefficients.periodic(rng.uniform(0.5, 2.0, p), rng.uniform(-1.0, 1.0, p))


def random_perturbation(
    rng: np.random.Generator,
    min_a: float,
    max_sites: int = 8,
    db_max: float = 3.0,
    offset: int = 0,
) -> Perturbation:
    """Random ``(da, db)`` on at most ``max_sites`` consecutive sites.

    ``|db| <= db_max``, ``|da| <= min_a / 2`` so ``a + da`` stays positive.
    """
    m = int(rng.integers(1, max_sites + 1))
    start = offset + int(rng.integers(-10, 11))
    sites = list(range(start, start + m))
    db = {s: float(rng.uniform(-db_max, db_max)) for s in sites}
    da = {}
    for s in sites[:-1]:
        if rng.random() < 0.5:
            da[(s, s + 1)] = float(rng.uniform(-0.5, 0.5) * min_a)
    return Perturbation(db=db, da=da)


def _certificate_with_growth(build, n0: int):
    """Rerun ``build(n)`` with doubled boxes until no eigenpair is truncation-suspect."""
    n = n0
    while True:
        cert = build(n)
        if not cert.truncation_suspect or 2 * n > MAX_SITES:
            return cert, n
        n *= 2


def thm41_suite(trials: int = 100, seed: int = 0, n_sites: int = 400, k: int = 5) -> SuiteResult:
    t0 = time.perf_counter()
    res = SuiteResult("theorem41")
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        c0 = random_periodic(rng)
        c1 = JacobiCoefficients.constant(1.0, 0.0) if rng.random() < 0.3 else random_periodic(rng)
        delta = random_perturbation(rng, float(c0.a_cell.min()))

        def build(n):
            box = LatticeBox.centered(n)
            b0 = normalized_background(c0, box)
            b1 = normalized_background(c1, box)
            return theorem41_certificate(b0.op, b0.gs, b1.op, b1.gs, delta, k)

        cert, n = _certificate_with_growth(build, n_sites)
        margin = float(np.min(cert.margins + cert.slack))
        rec = {
            "trial": trial,
            "sites": n,
            "holds": cert.holds,
            "suspect": cert.truncation_suspect,
            "min_margin_over_slack": margin,
            "max_boundary_mass": cert.max_boundary_mass,
            **cert.constants.to_dict(),
        }
        res.records.append(rec)
        res.passed &= cert.holds and not cert.truncation_suspect
    res.summary = {
        "failures": sum(not r["holds"] for r in res.records),
        "suspect": sum(r["suspect"] for r in res.records),
        "max_sites": max(r["sites"] for r in res.records),
        "max_boundary_mass": max(r["max_boundary_mass"] for r in res.records),
    }
    res.elapsed = time.perf_counter() - t0
    return res


def thm43_suite(trials: int = 50, seed: int = 0, n_sites: int = 400, k: int = 5, tol: float = 1e-12) -> SuiteResult:
    """Bottom-edge certificates checked three ways.

    The certificate is compared row by row against (a) the top-edge
    certificate of the explicitly W-conjugated inputs and (b) ``|E_j^-|``
    computed from the bottom of the original spectrum.
    """
    t0 = time.perf_counter()
    res = SuiteResult("theorem43")
    for trial in range(trials):
        rng = np.random.default_rng([seed, 43, trial])
        c0 = random_periodic(rng)
        c1 = JacobiCoefficients.constant(1.0, 0.0) if rng.random() < 0.3 else random_periodic(rng)
        delta = random_perturbation(rng, float(c0.a_cell.min()))

        def build(n):
            box = LatticeBox.centered(n)
            b0 = normalized_background(c0, box, "bottom")
            b1 = normalized_background(c1, box, "bottom")
            cert = theorem43_certificate(b0.op, b1.op, delta, k, b0.gs, b1.gs)
            cert.meta["_ops"] = (b0, b1)
            return cert

        cert, n = _certificate_with_growth(build, n_sites)
        b0, b1 = cert.meta.pop("_ops")
        box = b0.op.box
        # independent route: top-edge machinery on hand-conjugated inputs
        w0 = normalized_background(c0.with_b(np.negative), box)
        w1 = normalized_background(c1.with_b(np.negative), box)
        ref = theorem41_certificate(w0.op, w0.gs, w1.op, w1.gs, delta.conjugated(), k)
        direct = bottom_levels(apply_perturbation(b0.op, delta), k)
        scale = 1.0 + np.abs(cert.lhs).max() + np.abs(cert.rhs).max()
        dev_ref = float(max(np.abs(cert.lhs - ref.lhs).max(), np.abs(cert.rhs - ref.rhs).max()))
        dev_direct = float(np.abs(cert.lhs - direct).max())
        ok = cert.holds and not cert.truncation_suspect and dev_ref <= tol * scale and dev_direct <= tol * scale
        res.records.append(
            {
                "trial": trial,
                "sites": n,
                "holds": cert.holds,
                "suspect": cert.truncation_suspect,
                "dev_conjugated": dev_ref,
                "dev_direct": dev_direct,
            }
        )
        res.passed &= bool(ok)
    res.summary = {
        "failures": sum(not r["holds"] for r in res.records),
        "max_dev_conjugated": max(r["dev_conjugated"] for r in res.records),
        "max_dev_direct": max(r["dev_direct"] for r in res.records),
    }
    res.elapsed = time.perf_counter() - t0
    return res


def gsr_suite(trials: int = 200, seed: int = 0, n_sites: int = 400, tol: float = 1e-10) -> SuiteResult:
    t0 = time.perf_counter()
    res = SuiteResult("gsr")
    box = LatticeBox.centered(n_sites)
    worst = 0.0
    for trial in range(trials):
        rng = np.random.default_rng([seed, 35, trial])
        c = random_periodic(rng)
        edge = "top" if rng.random() < 0.5 else "bottom"
        s, gs, _ = periodic_edge_state(c, edge, box)
        J = shift(build_operator(c, box), s)
        f = random_interior_f(J, rng)
        chk = gsr_both_sides(J, gs, f)
        rel = chk.residual / chk.scale
        worst = max(worst, rel)
        res.records.append({"trial": trial, "edge": edge, **chk.to_dict(), "relative": rel})
        res.passed &= chk.passes(tol)
    res.summary = {"max_relative_residual": worst}
    res.elapsed = time.perf_counter() - t0
    return res


def random_operator(rng: np.random.Generator, n: int, dim: int = 1) -> JacobiOperator:
    box = LatticeBox.centered(n, dim)
    return JacobiOperator(box, rng.uniform(0.1, 2.0, box.n_edges), rng.uniform(-3.0, 3.0, box.size), tag="random")


def commutator_suite(trials: int = 50, seed: int = 0, n_sites: int = 40, tol: float = 1e-13) -> SuiteResult:
    t0 = time.perf_counter()
    res = SuiteResult("commutator")
    for trial in range(trials):
        rng = np.random.default_rng([seed, 32, trial])
        J = random_operator(rng, n_sites)
        chk = commutator_check(J, rng.uniform(-1.0, 1.0, J.size), tol)
        res.records.append({"trial": trial, "max_error": chk.max_error, "exact": chk.exact})
        res.passed &= chk.exact
    res.summary = {"max_error": max(r["max_error"] for r in res.records)}
    res.elapsed = time.perf_counter() - t0
    return res


def w_conjugation_suite(trials: int = 50, seed: int = 0, n_sites: int = 30) -> SuiteResult:
    t0 = time.perf_counter()
    res = SuiteResult("w-conjugation")
    for trial in range(trials):
        rng = np.random.default_rng([seed, 49, trial])
        dim = 1 if trial % 2 == 0 else 2
        n = n_sites if dim == 1 else 6
        J = random_operator(rng, n, dim)
        W = np.diag(J.box.parity)
        lhs = W @ J.dense() @ W
        rhs = -conjugate_W(J).dense()
        exact = bool(np.array_equal(lhs, rhs))
        res.records.append({"trial": trial, "dim": dim, "exact": exact})
        res.passed &= exact
    res.summary = {"exact": sum(r["exact"] for r in res.records)}
    res.elapsed = time.perf_counter() - t0
    return res


def sturm_suite(trials: int = 50, seed: int = 0, n_sites: int = 200, tol: float = 1e-10) -> SuiteResult:
    t0 = time.perf_counter()
    res = SuiteResult("sturm-vs-dense")
    for trial in range(trials):
        rng = np.random.default_rng([seed, 6, trial])
        J = random_operator(rng, n_sites)
        ours = np.sort(eig_extreme(J, J.size, "top").eigenvalues)
        dense = np.linalg.eigvalsh(J.dense())
        err = float(np.abs(ours - dense).max())
        res.records.append({"trial": trial, "max_abs_diff": err})
        res.passed &= err <= tol
    res.summary = {"max_abs_diff": max(r["max_abs_diff"] for r in res.records)}
    res.elapsed = time.perf_counter() - t0
    return res


LT_SCENARIOS = {
    "square-well": (zero(), square_well(1.0, 0.0, 1.0)),
    "cosine+square-well": (cosine(1.0, 1.0, 1.0), square_well(1.0, 0.0, 1.0)),
    "degenerate": (zero(), zero()),
}


def lt_suite(meshes=(0.01, 0.005), interval=(-40.0, 40.0)) -> SuiteResult:
    t0 = time.perf_counter()
    res = SuiteResult("lt-sandwich")
    for name, (V0, V) in LT_SCENARIOS.items():
        for h in meshes:
            upper, lower = lt_sandwich_check(V0, V, h, interval)
            ok = upper.holds and lower.holds and upper.gap >= 0 and lower.gap >= 0
            res.records.append(
                {
                    "scenario": name,
                    "h": h,
                    "S": upper.lhs,
                    "upper": upper.rhs,
                    "lower": lower.rhs,
                    "slack": upper.slack,
                    "beta": upper.beta,
                    "upper_gap": upper.gap,
                    "lower_gap": lower.gap,
                    "holds": ok,
                }
            )
            res.passed &= ok
    res.summary = {"min_gap": min(min(r["upper_gap"], r["lower_gap"]) for r in res.records)}
    res.elapsed = time.perf_counter() - t0
    return res


def szego_suite(trials: int = 20, seed: int = 0, n_sites: int = 2000, half_line: bool = False) -> SuiteResult:
    """Free single-site check against the closed form, then a period-2 sweep with unit-norm perturbations."""
    t0 = time.perf_counter()
    res = SuiteResult("szego")
    s = 1.5
    free = szego_sum(JacobiCoefficients.constant(1.0, 0.0), Perturbation(db={0: s}), n_sites=n_sites)
    lhs_exact = np.sqrt(np.sqrt(s * s + 4) - 2)
    free_ok = abs(free.lhs - lhs_exact) <= 1e-5 and abs(free.c_emp - lhs_exact / s) <= 1e-4
    coeffs = JacobiCoefficients.periodic([1.0, 1.0], [0.0, -1.0])
    offset = 2 if half_line else 0
    for trial in range(trials):
        rng = np.random.default_rng([seed, 11, trial])
        delta = random_perturbation(rng, 1.0, offset=offset + (12 if half_line else 0))
        delta = delta.scaled(1.0 / delta.l1_norm)
        rep = szego_sum(coeffs, delta, half_line=half_line, n_sites=n_sites)
        res.records.append({"trial": trial, "lhs": rep.lhs, "norm": rep.norm, "c_emp": rep.c_emp})
    res.passed = bool(free_ok)
    res.summary = {
        "free_lhs": free.lhs,
        "free_c_emp": free.c_emp,
        "max_c_emp": max(r["c_emp"] for r in res.records),
    }
    res.elapsed = time.perf_counter() - t0
    return res


SUITES = {
    "gsr": gsr_suite,
    "thm41": thm41_suite,
    "thm43": thm43_suite,
    "lt": lt_suite,
    "szego": szego_suite,
    "commutator": commutator_suite,
    "wconj": w_conjugation_suite,
    "sturm": sturm_suite,
}
