"""Experiment spec files: parsing and strict validation.

A spec is a JSON document::

    {"seed": 0,
     "scenarios": [
        {"kind": "theorem41",
         "background": {"type": "periodic", "a": [1, 1], "b": [0, -1]},
         "comparison": {"type": "free"},
         "perturbation": {"db": [[0, 2.0]]},
         "sites": 800, "k": 5}]}

Every object is checked against a fixed key set before anything is
computed; errors name the offending field.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import ParseError, ValidationError
from .potentials import FORMS, PARAMS, REQUIRED

KINDS = ("gsr-check", "theorem41", "theorem43", "lt-sandwich", "szego-sweep", "commutator")

_COMMON = {"kind", "name"}
_KEYS = {
    "gsr-check": {"background", "sites", "trials", "edge", "tol"},
    "theorem41": {"background", "comparison", "perturbation", "sites", "k"},
    "theorem43": {"background", "comparison", "perturbation", "sites", "k"},
    "lt-sandwich": {"background", "potential", "meshes", "interval", "gamma", "c_mesh"},
    "szego-sweep": {"background", "perturbation", "trials", "sites", "half_line"},
    "commutator": {"sites", "trials", "dim", "tol"},
}
_DEFAULTS = {
    "gsr-check": {"sites": 400, "trials": 10, "edge": "top", "tol": 1e-10},
    "theorem41": {"comparison": {"type": "free"}, "sites": 400, "k": 5},
    "theorem43": {"comparison": {"type": "free"}, "sites": 400, "k": 5},
    "lt-sandwich": {"meshes": [0.01, 0.005], "interval": [-40.0, 40.0], "gamma": 0.5, "c_mesh": 10.0},
    "szego-sweep": {"trials": 20, "sites": 2000, "half_line": False},
    "commutator": {"sites": 40, "trials": 50, "dim": 1, "tol": 1e-13},
}


@dataclass
class ExperimentSpec:
    scenarios: list[dict]
    seed: int = 0
    raw: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"seed": self.seed, "scenarios": self.scenarios}


def _fail(path: str, msg: str):
    raise ValidationError(f"{path}: {msg}")


def _check_keys(obj: Any, allowed: set, path: str) -> dict:
    if not isinstance(obj, dict):
        _fail(path, "expected an object")
    extra = sorted(set(obj) - allowed)
    if extra:
        _fail(f"{path}.{extra[0]}", "unknown key")
    return obj


def _number(v, path, lo=None, hi=None, strict_lo=False) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        _fail(path, f"expected a finite number, got {v!r}")
    v = float(v)
    if lo is not None and (v < lo or (strict_lo and v == lo)):
        _fail(path, f"must be {'>' if strict_lo else '>='} {lo}, got {v}")
    if hi is not None and v > hi:
        _fail(path, f"must be <= {hi}, got {v}")
    return v


def _integer(v, path, lo=None) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        _fail(path, f"expected an integer, got {v!r}")
    if lo is not None and v < lo:
        _fail(path, f"must be >= {lo}, got {v}")
    return int(v)


def _number_list(v, path, positive=False) -> list[float]:
    if not isinstance(v, list) or not v:
        _fail(path, "expected a non-empty list of numbers")
    return [_number(x, f"{path}[{i}]", 0.0 if positive else None, strict_lo=positive) for i, x in enumerate(v)]


def _potential(obj, path) -> dict:
    if not isinstance(obj, dict) or "form" not in obj:
        _fail(path, "expected an object with a 'form'")
    form = obj["form"]
    if form not in FORMS:
        _fail(f"{path}.form", f"unknown form {form!r}; expected one of {list(FORMS)}")
    _check_keys(obj, {"form", *PARAMS[form]}, path)
    for key in REQUIRED[form]:
        if key not in obj:
            _fail(f"{path}.{key}", "missing")
    out = {"form": form}
    for key in PARAMS[form]:
        if key in obj:
            positive = key in ("period", "width")
            out[key] = _number(obj[key], f"{path}.{key}", 0.0 if positive else None, strict_lo=positive)
    return out


def _background(obj, path, continuum=False) -> dict:
    if not isinstance(obj, dict) or "type" not in obj:
        _fail(path, "expected an object with a 'type'")
    kind = obj["type"]
    if continuum:
        if kind != "continuum":
            _fail(f"{path}.type", "lt-sandwich needs a 'continuum' background")
        _check_keys(obj, {"type", "potential"}, path)
        if "potential" not in obj:
            _fail(f"{path}.potential", "missing")
        pot = _potential(obj["potential"], f"{path}.potential")
        if pot["form"] not in ("zero", "constant", "cosine"):
            _fail(f"{path}.potential.form", "background potential must be periodic")
        return {"type": "continuum", "potential": pot}
    if kind == "free":
        _check_keys(obj, {"type", "a", "b"}, path)
        a = _number(obj.get("a", 1.0), f"{path}.a", 0.0, strict_lo=True)
        b = _number(obj.get("b", 0.0), f"{path}.b")
        return {"type": "free", "a": a, "b": b}
    if kind == "periodic":
        _check_keys(obj, {"type", "period", "a", "b"}, path)
        for key in ("a", "b"):
            if key not in obj:
                _fail(f"{path}.{key}", "missing")
        a = _number_list(obj["a"], f"{path}.a", positive=True)
        b = _number_list(obj["b"], f"{path}.b")
        p = max(len(a), len(b))
        for key, lst in (("a", a), ("b", b)):
            if len(lst) not in (1, p):
                _fail(f"{path}.{key}", f"length {len(lst)} does not match period {p}")
        if "period" in obj and _integer(obj["period"], f"{path}.period", 1) != p:
            _fail(f"{path}.period", f"declared period {obj['period']} but coefficient lists have period {p}")
        return {"type": "periodic", "period": p, "a": a, "b": b}
    _fail(f"{path}.type", f"unknown background type {kind!r}")


def _site(v, path) -> int:
    return _integer(v, path)


def _perturbation(obj, path) -> dict:
    _check_keys(obj, {"db", "da"}, path)
    db, da = [], []
    raw_db = obj.get("db", [])
    if isinstance(raw_db, dict):
        raw_db = [[int(k), v] for k, v in raw_db.items()] if all(
            isinstance(k, str) and k.lstrip("-").isdigit() for k in raw_db
        ) else _fail(f"{path}.db", "object keys must be integer sites")
    if not isinstance(raw_db, list):
        _fail(f"{path}.db", "expected a list of [site, value] pairs")
    for i, item in enumerate(raw_db):
        if not isinstance(item, list) or len(item) != 2:
            _fail(f"{path}.db[{i}]", "expected [site, value]")
        db.append([_site(item[0], f"{path}.db[{i}][0]"), _number(item[1], f"{path}.db[{i}][1]")])
    raw_da = obj.get("da", [])
    if not isinstance(raw_da, list):
        _fail(f"{path}.da", "expected a list of [site, site, value] triples")
    for i, item in enumerate(raw_da):
        if not isinstance(item, list) or len(item) != 3:
            _fail(f"{path}.da[{i}]", "expected [site, site, value]")
        s = _site(item[0], f"{path}.da[{i}][0]")
        t = _site(item[1], f"{path}.da[{i}][1]")
        if abs(s - t) != 1:
            _fail(f"{path}.da[{i}]", "sites must be nearest neighbors")
        da.append([s, t, _number(item[2], f"{path}.da[{i}][2]")])
    return {"db": db, "da": da}


def validate_scenario(obj, path: str) -> dict:
    if not isinstance(obj, dict):
        _fail(path, "expected an object")
    kind = obj.get("kind")
    if kind not in KINDS:
        _fail(f"{path}.kind", f"unknown scenario kind {kind!r}; expected one of {list(KINDS)}")
    _check_keys(obj, _COMMON | _KEYS[kind], path)
    out = {"kind": kind, "name": str(obj.get("name", kind))}
    merged = {**_DEFAULTS[kind], **{k: v for k, v in obj.items() if k not in _COMMON}}
    p = path
    if kind in ("theorem41", "theorem43", "gsr-check", "szego-sweep"):
        if "background" not in merged:
            _fail(f"{p}.background", "missing")
        out["background"] = _background(merged["background"], f"{p}.background")
    if kind in ("theorem41", "theorem43"):
        out["comparison"] = _background(merged["comparison"], f"{p}.comparison")
        if "perturbation" not in merged:
            _fail(f"{p}.perturbation", "missing")
        out["perturbation"] = _perturbation(merged["perturbation"], f"{p}.perturbation")
        out["sites"] = _integer(merged["sites"], f"{p}.sites", 16)
        out["k"] = _integer(merged["k"], f"{p}.k", 1)
    elif kind == "gsr-check":
        out["sites"] = _integer(merged["sites"], f"{p}.sites", 16)
        out["trials"] = _integer(merged["trials"], f"{p}.trials", 1)
        if merged["edge"] not in ("top", "bottom"):
            _fail(f"{p}.edge", "must be 'top' or 'bottom'")
        out["edge"] = merged["edge"]
        out["tol"] = _number(merged["tol"], f"{p}.tol", 0.0, strict_lo=True)
    elif kind == "lt-sandwich":
        if "background" not in merged:
            _fail(f"{p}.background", "missing")
        out["background"] = _background(merged["background"], f"{p}.background", continuum=True)
        if "potential" not in merged:
            _fail(f"{p}.potential", "missing")
        out["potential"] = _potential(merged["potential"], f"{p}.potential")
        if out["potential"]["form"] in ("cosine",) or (
            out["potential"]["form"] == "constant" and out["potential"]["value"] != 0
        ):
            _fail(f"{p}.potential", "the perturbing potential must be a nonpositive well")
        for key in ("depth",):
            if key in out["potential"] and out["potential"][key] < 0:
                _fail(f"{p}.potential.{key}", "must be >= 0 (V <= 0)")
        out["meshes"] = _number_list(merged["meshes"], f"{p}.meshes", positive=True)
        iv = merged["interval"]
        if not isinstance(iv, list) or len(iv) != 2:
            _fail(f"{p}.interval", "expected [x_lo, x_hi]")
        lo, hi = _number(iv[0], f"{p}.interval[0]"), _number(iv[1], f"{p}.interval[1]")
        if hi <= lo:
            _fail(f"{p}.interval", "x_hi must exceed x_lo")
        out["interval"] = [lo, hi]
        gamma = _number(merged["gamma"], f"{p}.gamma", 0.0)
        if gamma < 0.5:
            _fail(f"{p}.gamma", f"must be >= 0.5 in one dimension, got {gamma}")
        out["gamma"] = gamma
        out["c_mesh"] = _number(merged["c_mesh"], f"{p}.c_mesh", 0.0)
    elif kind == "szego-sweep":
        if out["background"]["type"] not in ("free", "periodic"):
            _fail(f"{p}.background.type", "Szego sums need a periodic background")
        if "perturbation" in merged:
            out["perturbation"] = _perturbation(merged["perturbation"], f"{p}.perturbation")
        out["trials"] = _integer(merged["trials"], f"{p}.trials", 0)
        out["sites"] = _integer(merged["sites"], f"{p}.sites", 64)
        if not isinstance(merged["half_line"], bool):
            _fail(f"{p}.half_line", "expected true or false")
        out["half_line"] = merged["half_line"]
    elif kind == "commutator":
        out["sites"] = _integer(merged["sites"], f"{p}.sites", 2)
        out["trials"] = _integer(merged["trials"], f"{p}.trials", 1)
        out["dim"] = _integer(merged["dim"], f"{p}.dim", 1)
        if out["dim"] not in (1, 2):
            _fail(f"{p}.dim", "must be 1 or 2")
        out["tol"] = _number(merged["tol"], f"{p}.tol", 0.0, strict_lo=True)
    return out


def validate_spec(doc) -> ExperimentSpec:
    _check_keys(doc, {"seed", "scenarios"}, "spec")
    seed = _integer(doc.get("seed", 0), "spec.seed", 0)
    scenarios = doc.get("scenarios")
    if not isinstance(scenarios, list) or not scenarios:
        _fail("spec.scenarios", "expected a non-empty list")
    out = [validate_scenario(s, f"scenarios[{i}]") for i, s in enumerate(scenarios)]
    return ExperimentSpec(out, seed, doc)


def load_spec(path) -> ExperimentSpec:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    return validate_spec(doc)
