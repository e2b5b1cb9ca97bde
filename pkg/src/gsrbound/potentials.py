"""Named one-dimensional potentials used by the discretization and the experiment configs."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

FORMS = ("zero", "constant", "cosine", "square-well", "gaussian-well")


@dataclass(frozen=True)
class Potential:
    """Vectorized potential ``V(x)``.

    ``period`` is set for periodic forms; constant forms report
    ``is_constant`` so a discretization can use a one-site cell.
    """

    form: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.form not in FORMS:
            raise ValueError(f"unknown potential form {self.form!r}; expected one of {FORMS}")

    @property
    def is_constant(self) -> bool:
        return self.form in ("zero", "constant")

    @property
    def period(self) -> float | None:
        if self.form == "cosine":
            return float(self.params["period"])
        return None

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        p = self.params
        if self.form == "zero":
            return np.zeros_like(x)
        if self.form == "constant":
            return np.full_like(x, float(p["value"]))
        if self.form == "cosine":
            return p.get("offset", 0.0) - p["amplitude"] * np.cos(2 * np.pi * x / p["period"])
        if self.form == "square-well":
            inside = np.abs(x - p.get("center", 0.0)) <= 0.5 * p["width"] + 1e-12
            return np.where(inside, -float(p["depth"]), 0.0)
        z = (x - p.get("center", 0.0)) / p["width"]
        return -float(p["depth"]) * np.exp(-0.5 * z * z)

    def to_dict(self) -> dict:
        return {"form": self.form, **self.params}


def zero() -> Potential:
    return Potential("zero")


def constant(value: float) -> Potential:
    return Potential("constant", {"value": value})


def cosine(amplitude: float = 1.0, period: float = 1.0, offset: float = 0.0) -> Potential:
    """``offset - amplitude * cos(2 pi x / period)``."""
    return Potential("cosine", {"amplitude": amplitude, "period": period, "offset": offset})


def square_well(depth: float, center: float = 0.0, width: float = 1.0) -> Potential:
    """``-depth`` on ``[center - width/2, center + width/2]``, 0 elsewhere."""
    return Potential("square-well", {"depth": depth, "center": center, "width": width})


def gaussian_well(depth: float, center: float = 0.0, width: float = 1.0) -> Potential:
    return Potential("gaussian-well", {"depth": depth, "center": center, "width": width})


PARAMS = {
    "zero": (),
    "constant": ("value",),
    "cosine": ("amplitude", "period", "offset"),
    "square-well": ("depth", "center", "width"),
    "gaussian-well": ("depth", "center", "width"),
}
REQUIRED = {
    "zero": (),
    "constant": ("value",),
    "cosine": ("amplitude", "period"),
    "square-well": ("depth", "width"),
    "gaussian-well": ("depth", "width"),
}


def from_dict(d: dict) -> Potential:
    d = dict(d)
    form = d.pop("form")
    return Potential(form, {k: float(v) for k, v in d.items()})
