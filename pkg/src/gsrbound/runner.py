"""Execute validated experiment specs and assemble reports."""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .bounds import lt_sandwich_check, normalized_background, szego_sum, theorem41_certificate, theorem43_certificate
from .config import ExperimentSpec, load_spec
from .errors import ComputeError, GsrError
from .groundstate import periodic_edge_state
from .lattice import LatticeBox
from .operator import JacobiCoefficients, Perturbation, build_operator, shift
from .potentials import from_dict
from .quadform import commutator_check, gsr_both_sides, random_interior_f
from .suites import MAX_SITES, random_operator, random_perturbation

FIXED_CLOCK_ENV = "GSR_FIXED_CLOCK"


def fixed_clock() -> bool:
    return os.environ.get(FIXED_CLOCK_ENV, "") not in ("", "0")


@dataclass
class Report:
    spec: dict
    results: list[dict] = field(default_factory=list)
    verdicts: list[dict] = field(default_factory=list)
    seed: int = 0
    elapsed_ms: int = 0
    version: str = __version__

    @property
    def passed(self) -> bool:
        return all(v["pass"] for v in self.verdicts)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def to_dict(self) -> dict:
        return {
            "spec": self.spec,
            "results": self.results,
            "verdicts": self.verdicts,
            "meta": {"version": self.version, "seed": self.seed, "elapsed_ms": self.elapsed_ms},
        }


def coefficients(desc: dict) -> JacobiCoefficients:
    if desc["type"] == "free":
        return JacobiCoefficients.constant(desc["a"], desc["b"])
    p = desc["period"]
    a = desc["a"] * p if len(desc["a"]) == 1 else desc["a"]
    b = desc["b"] * p if len(desc["b"]) == 1 else desc["b"]
    return JacobiCoefficients.periodic(a, b)


def perturbation(desc: dict) -> Perturbation:
    return Perturbation(
        db={s: v for s, v in desc["db"]},
        da={(s, t): v for s, t, v in desc["da"]},
    )


def _run_gsr(sc: dict, rng: np.random.Generator) -> tuple[dict, bool]:
    box = LatticeBox.centered(sc["sites"])
    c = coefficients(sc["background"])
    s, gs, _ = periodic_edge_state(c, sc["edge"], box)
    J = shift(build_operator(c, box), s)
    trials, ok, worst = [], True, 0.0
    for t in range(sc["trials"]):
        chk = gsr_both_sides(J, gs, random_interior_f(J, rng))
        rel = chk.residual / chk.scale
        worst = max(worst, rel)
        ok &= chk.passes(sc["tol"])
        trials.append({"trial": t, **chk.to_dict(), "relative": rel})
    payload = {"edge_energy": s, "ground_state_residual": gs.residual, "trials": trials, "max_relative_residual": worst}
    return payload, bool(ok)


def _run_comparison(sc: dict, rng: np.random.Generator) -> tuple[dict, bool]:
    c0 = coefficients(sc["background"])
    c1 = coefficients(sc["comparison"])
    delta = perturbation(sc["perturbation"])
    edge = "top" if sc["kind"] == "theorem41" else "bottom"
    n = sc["sites"]
    while True:
        box = LatticeBox.centered(n)
        b0 = normalized_background(c0, box, edge)
        b1 = normalized_background(c1, box, edge)
        if edge == "top":
            cert = theorem41_certificate(b0.op, b0.gs, b1.op, b1.gs, delta, sc["k"])
        else:
            cert = theorem43_certificate(b0.op, b1.op, delta, sc["k"], b0.gs, b1.gs)
        if not cert.truncation_suspect or 2 * n > MAX_SITES:
            break
        n *= 2
    payload = {"edges": [b0.edge, b1.edge], "certificate": cert.to_dict()}
    return payload, cert.holds and not cert.truncation_suspect


def _run_lt(sc: dict, rng: np.random.Generator) -> tuple[dict, bool]:
    V0 = from_dict(sc["background"]["potential"])
    V = from_dict(sc["potential"])
    rows, ok = [], True
    for h in sc["meshes"]:
        upper, lower = lt_sandwich_check(V0, V, h, tuple(sc["interval"]), sc["gamma"], sc["c_mesh"])
        row = {"h": h, "upper": upper.to_dict(), "lower": lower.to_dict() if lower is not None else None}
        ok &= upper.holds and (lower is None or lower.holds)
        rows.append(row)
    return {"meshes": rows}, bool(ok)


def _run_szego(sc: dict, rng: np.random.Generator) -> tuple[dict, bool]:
    c = coefficients(sc["background"])
    half = sc["half_line"]
    offset = 14 if half else 0
    deltas = []
    if "perturbation" in sc:
        deltas.append(perturbation(sc["perturbation"]))
    for _ in range(sc["trials"]):
        d = random_perturbation(rng, float(c.a_cell.min()), offset=offset)
        deltas.append(d.scaled(1.0 / d.l1_norm))
    trials, bands = [], None
    for t, d in enumerate(deltas):
        rep = szego_sum(c, d, half_line=half, n_sites=sc["sites"])
        bands = [list(b) for b in rep.bands]
        row = rep.to_dict()
        del row["bands"]
        trials.append({"trial": t, **row})
    finite = [r["c_emp"] for r in trials if r["c_emp"] is not None]
    ok = all(np.isfinite(r["lhs"]) for r in trials)
    payload = {"bands": bands, "trials": trials, "max_c_emp": max(finite) if finite else None}
    return payload, bool(ok)


def _run_commutator(sc: dict, rng: np.random.Generator) -> tuple[dict, bool]:
    trials, ok = [], True
    for t in range(sc["trials"]):
        J = random_operator(rng, sc["sites"], sc["dim"])
        chk = commutator_check(J, rng.uniform(-1.0, 1.0, J.size), sc["tol"])
        trials.append({"trial": t, "max_error": chk.max_error, "exact": chk.exact})
        ok &= chk.exact
    return {"trials": trials, "max_error": max(r["max_error"] for r in trials)}, bool(ok)


RUNNERS = {
    "gsr-check": _run_gsr,
    "theorem41": _run_comparison,
    "theorem43": _run_comparison,
    "lt-sandwich": _run_lt,
    "szego-sweep": _run_szego,
    "commutator": _run_commutator,
}


def run_scenario(sc: dict, seed: int, index: int) -> tuple[dict, bool]:
    rng = np.random.default_rng([seed, index])
    try:
        return RUNNERS[sc["kind"]](sc, rng)
    except (GsrError, ValueError, np.linalg.LinAlgError) as exc:
        raise ComputeError(f"scenario {index} ({sc['name']}): {type(exc).__name__}: {exc}") from exc


def run_experiment(spec: ExperimentSpec, seed: int | None = None) -> Report:
    seed = spec.seed if seed is None else int(seed)
    t0 = time.perf_counter()
    report = Report(spec={**spec.to_dict(), "seed": seed}, seed=seed)
    for i, sc in enumerate(spec.scenarios):
        payload, ok = run_scenario(sc, seed, i)
        report.results.append({"index": i, "kind": sc["kind"], "name": sc["name"], **payload})
        report.verdicts.append({"index": i, "kind": sc["kind"], "name": sc["name"], "pass": ok})
    report.elapsed_ms = 0 if fixed_clock() else int(round(1000 * (time.perf_counter() - t0)))
    return report


def run_spec(path, seed: int | None = None) -> Report:
    """Load, validate and run the spec at ``path``; ``seed`` overrides the file's seed."""
    return run_experiment(load_spec(path), seed)
