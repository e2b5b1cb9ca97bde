"""Report serialization: JSON, per-table CSV and plain-text plot series."""

from __future__ import annotations

import csv
import json
from pathlib import Path

REPORT_NAME = "report.json"


def to_json(report) -> str:
    data = report.to_dict() if hasattr(report, "to_dict") else report
    return json.dumps(data, indent=2, sort_keys=False, allow_nan=True) + "\n"


def _stem(result: dict) -> str:
    return f"{result['index']:02d}_{result['kind']}"


def _tables(result: dict) -> dict[str, tuple[list[str], list[list]]]:
    """Named tables of a scenario result, each ``(header, rows)``."""
    kind = result["kind"]
    if kind in ("theorem41", "theorem43"):
        rows = result["certificate"]["rows"]
        return {"certificate": (["j", "lhs", "rhs", "margin"], [[r["j"], r["lhs"], r["rhs"], r["margin"]] for r in rows])}
    if kind == "lt-sandwich":
        header = ["h", "kind", "gamma", "S", "bound", "gap", "slack", "holds", "beta"]
        rows = []
        for m in result["meshes"]:
            for side in (m["upper"], m["lower"]):
                if side is not None:
                    rows.append([m["h"], *(side[c] for c in header[1:])])
        return {"moments": (header, rows)}
    if kind == "szego-sweep":
        trials = sorted(result["trials"], key=lambda r: r["trial"])
        header = ["trial", "lhs", "norm", "c_emp", "n_top", "n_bottom"]
        rows = [
            [r["trial"], r["lhs"], r["norm"], r["c_emp"], len(r["outside_top"]), len(r["outside_bottom"])]
            for r in trials
        ]
        return {"szego": (header, rows)}
    if kind == "gsr-check":
        header = ["trial", "lhs", "rhs", "residual", "scale"]
        return {"gsr": (header, [[r[c] for c in header] for r in result["trials"]])}
    if kind == "commutator":
        header = ["trial", "max_error", "exact"]
        return {"commutator": (header, [[r[c] for c in header] for r in result["trials"]])}
    return {}


def _write_csv(path: Path, header, rows) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def emit_report(report, out_dir, fmt: str = "json") -> list[Path]:
    """Write ``report`` under ``out_dir`` and return the paths written.

    ``json`` writes one nested document; ``csv`` writes one file per table
    plus ``verdicts.csv``.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    data = report.to_dict() if hasattr(report, "to_dict") else report
    if fmt == "json":
        path = out / REPORT_NAME
        path.write_text(to_json(data))
        return [path]
    if fmt != "csv":
        raise ValueError(f"unknown report format {fmt!r}")
    paths = []
    for result in data["results"]:
        for name, (header, rows) in _tables(result).items():
            path = out / f"{_stem(result)}_{name}.csv"
            _write_csv(path, header, rows)
            paths.append(path)
    path = out / "verdicts.csv"
    _write_csv(path, ["index", "kind", "name", "pass"], [[v["index"], v["kind"], v["name"], v["pass"]] for v in data["verdicts"]])
    paths.append(path)
    return paths


def _write_dat(path: Path, rows) -> None:
    path.write_text("".join(" ".join(repr(float(x)) for x in row) + "\n" for row in rows))


def plot_series(result: dict) -> dict[str, list[list[float]]]:
    """Plottable series of one scenario result, keyed by file name."""
    kind = result["kind"]
    if kind in ("theorem41", "theorem43"):
        return {"margins.dat": [[r["j"], r["margin"]] for r in result["certificate"]["rows"]]}
    if kind == "lt-sandwich":
        rows = []
        for m in result["meshes"]:
            lower = m["lower"]["bound"] if m["lower"] is not None else float("nan")
            rows.append([m["h"], m["upper"]["S"], m["upper"]["bound"], lower])
        return {"sandwich.dat": rows}
    if kind == "szego-sweep":
        trials = sorted(result["trials"], key=lambda r: r["trial"])
        series = {"cemp.dat": [[r["trial"], r["c_emp"]] for r in trials if r["c_emp"] is not None]}
        if result["bands"]:
            series["bands.dat"] = result["bands"]
        return series
    return {}


def emit_plotdata(report, out_dir) -> list[Path]:
    """Write whitespace-separated series, one directory per scenario."""
    data = report.to_dict() if hasattr(report, "to_dict") else report
    paths = []
    for result in data["results"]:
        series = plot_series(result)
        if not series:
            continue
        d = Path(out_dir) / _stem(result)
        d.mkdir(parents=True, exist_ok=True)
        for name, rows in series.items():
            _write_dat(d / name, rows)
            paths.append(d / name)
    return paths
