"""Positive zero-energy solutions of ``sum_m a_lm u_m + b_l u_l = 0`` and the constants built from them."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .eigensolve import DENSE_LIMIT, eig_extreme
from .errors import (
    BoxMismatchError,
    NoConvergence,
    OrientationMismatchError,
    SignFailure,
    SizeLimitError,
)
from .floquet import FloquetData, cell_matrix, floquet_data
from .lattice import LatticeBox
from .operator import JacobiCoefficients, JacobiOperator, apply, build_operator

POSITIVE = "positive"
ALTERNATING = "alternating-positive"


@dataclass(frozen=True, eq=False)
class GroundState:
    """A one-signed (or alternating one-signed) solution on a box.

    ``energy`` is the spectral parameter the solution was computed at; it is
    0 for exact edge states of shifted periodic backgrounds and equals the top
    eigenvalue of the truncation for :func:`generic_ground_state`.
    ``residual`` is the sup over non-boundary sites of ``|(J - energy) u|``.
    """

    box: LatticeBox
    u: np.ndarray
    orientation: str
    residual: float
    energy: float = 0.0
    meta: dict = field(default_factory=dict)

    @property
    def modulus(self) -> np.ndarray:
        return np.abs(self.u)

    @property
    def c1(self) -> float:
        return regularity_constants(self)[0]

    @property
    def c2(self) -> float:
        return regularity_constants(self)[1]

    @property
    def beta_reg(self) -> float:
        return regularity_constants(self)[2]

    def scaled(self, c: float) -> "GroundState":
        return replace(self, u=c * self.u, residual=abs(c) * self.residual)


def residual(J: JacobiOperator, u: np.ndarray, energy: float = 0.0) -> float:
    r = apply(J, u) - energy * u
    interior = ~J.box.boundary_mask
    if not np.any(interior):
        return 0.0
    return float(np.max(np.abs(r[interior])))


def _normalize(box: LatticeBox, u: np.ndarray) -> np.ndarray:
    return u / np.min(np.abs(u[box.core_mask]))


def _default_box(p: int) -> LatticeBox:
    return LatticeBox.interval(0, max(4 * p, 8) - 1)


def periodic_edge_state(
    coeffs: JacobiCoefficients, edge: str = "top", box: LatticeBox | None = None
) -> tuple[float, GroundState, FloquetData]:
    """Spectral edge ``s`` of a periodic background and its edge state on ``box``.

    The top edge is the largest root of ``Delta = 2``; its solution is the
    Perron vector of the periodic one-cell matrix, laid periodically on the
    box.  The bottom edge goes through W-conjugation: the top state of
    ``J(a, -b)`` multiplied by ``(-1)^n``.  ``gs`` solves the equation for the
    shifted coefficients ``b - s``.
    """
    fd = floquet_data(coeffs)
    p = fd.period
    if box is None:
        box = _default_box(p)
    if edge == "bottom":
        s_w, gs_w, _ = periodic_edge_state(coeffs.with_b(np.negative), "top", box)
        s = -s_w
        u = box.parity * gs_w.u
        J = build_operator(coeffs.with_b(lambda b: b - s), box)
        gs = GroundState(box, u, ALTERNATING, residual(J, u), 0.0, {"edge": s, "period": p})
        return s, gs, fd
    if edge != "top":
        raise ValueError("edge must be 'top' or 'bottom'")
    s = fd.top
    shifted = coeffs.with_b(lambda b: b - s)
    w, v = np.linalg.eigh(cell_matrix(shifted))
    v = v[:, -1]
    v = v if v.sum() > 0 else -v
    if np.any(v <= 0):
        raise SignFailure("periodic Perron vector is not strictly positive")
    u = _normalize(box, v[np.mod(box.coords[:, 0], p)])
    J = build_operator(shifted, box)
    gs = GroundState(box, u, POSITIVE, residual(J, u), 0.0, {"edge": s, "period": p, "cell_top": float(w[-1]) + s})
    return s, gs, fd


def generic_ground_state(J: JacobiOperator, tol: float = 1e-8) -> GroundState:
    """Top eigenvector of the truncated operator, normalized to ``min |u| = 1`` on the core.

    Positive off-diagonal weights make the top eigenvector one-signed
    (Perron-Frobenius); a vector with a nonpositive entry raises SignFailure.
    """
    if J.is_tridiagonal:
        spec = eig_extreme(J, 1, "top", vectors=True)
        lam, u = float(spec.eigenvalues[0]), spec.vectors[:, 0]
    elif J.size <= DENSE_LIMIT:
        w, v = np.linalg.eigh(J.dense())
        lam, u = float(w[-1]), v[:, -1]
    else:
        raise SizeLimitError(f"ground state of a {J.size}-site 2D box exceeds the dense limit")
    u = u if u.sum() > 0 else -u
    if np.any(u <= 0):
        raise SignFailure(f"top eigenvector has {int(np.sum(u <= 0))} nonpositive entries")
    u = _normalize(J.box, u)
    res = residual(J, u, lam)
    if res > tol * max(1.0, J.scale) * float(np.max(u)):
        raise NoConvergence(f"ground-state residual {res:.3e} exceeds tolerance")
    return GroundState(J.box, u, POSITIVE, res, lam)


def regularity_constants(gs: GroundState) -> tuple[float, float, float]:
    """``(c1, c2, (c2/c1)^2)`` from ``|u|`` over the interior core."""
    m = gs.modulus[gs.box.core_mask]
    c1, c2 = float(m.min()), float(m.max())
    return c1, c2, (c2 / c1) ** 2


@dataclass(frozen=True)
class ComparisonConstants:
    beta_plus: float
    beta_minus: float
    gamma_minus: float
    eta: float
    beta: float

    def to_dict(self) -> dict:
        return {
            "beta_plus": self.beta_plus,
            "beta_minus": self.beta_minus,
            "gamma_minus": self.gamma_minus,
            "eta": self.eta,
            "beta": self.beta,
        }


def comparison_constants(
    gs0: GroundState, J0: JacobiOperator, gs1: GroundState, J1: JacobiOperator
) -> ComparisonConstants:
    """Ground-state ratio constants over the interior core.

    ``beta_+/-`` are the sup/inf of ``(u0/u1)^2`` over core sites,
    ``gamma_-`` the inf of ``a0 |u0_l u0_m| / (a1 |u1_l u1_m|)`` over edges
    with both ends in the core; ``eta = gamma_-/beta_-``, ``beta = beta_+/beta_-``.
    """
    box = J0.box
    if not (gs0.box == box and gs1.box == box and J1.box == box):
        raise BoxMismatchError("ground states and operators must live on the same box")
    if gs0.orientation != gs1.orientation:
        raise OrientationMismatchError(f"{gs0.orientation} vs {gs1.orientation}")
    u0, u1 = gs0.modulus, gs1.modulus
    core = box.core_mask
    ratio = (u0[core] / u1[core]) ** 2
    beta_plus, beta_minus = float(ratio.max()), float(ratio.min())
    i, j, _ = box.edges
    inner = core[i] & core[j]
    if not np.any(inner):
        raise BoxMismatchError("the interior core contains no edge")
    i, j = i[inner], j[inner]
    num = J0.a[inner] * u0[i] * u0[j]
    den = J1.a[inner] * u1[i] * u1[j]
    gamma_minus = float(np.min(num / den))
    return ComparisonConstants(
        beta_plus, beta_minus, gamma_minus, gamma_minus / beta_minus, beta_plus / beta_minus
    )
