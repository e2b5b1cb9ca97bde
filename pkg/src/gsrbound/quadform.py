"""Ground-state representation of Jacobi quadratic forms and the commutator identities behind it."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import BadGroundStateError, SupportTouchesBoundaryError
from .groundstate import GroundState
from .operator import JacobiOperator, apply, shift

GSR_TOL = 1e-10
COMMUTATOR_TOL = 1e-13


@dataclass(frozen=True)
class GsrCheck:
    lhs: float
    rhs: float

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def scale(self) -> float:
        return abs(self.lhs) + abs(self.rhs) + 1.0

    def passes(self, tol: float = GSR_TOL) -> bool:
        return self.residual <= tol * self.scale

    def to_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "residual": self.residual, "scale": self.scale}


def _annihilated(J: JacobiOperator, gs: GroundState) -> JacobiOperator:
    if gs.box != J.box:
        raise BadGroundStateError("ground state lives on a different box")
    return shift(J, gs.energy)


def form(J: JacobiOperator, g: np.ndarray) -> float:
    """``<g, (-J) g>``."""
    return -float(g @ apply(J, g))


def gsr_rhs(J: JacobiOperator, u: np.ndarray, f: np.ndarray) -> float:
    """``sum over edges of a_lm u_l u_m (f_l - f_m)^2`` (each unordered edge once)."""
    i, j, _ = J.box.edges
    df = f[i] - f[j]
    return float(np.sum(J.a * u[i] * u[j] * df * df))


def gsr_both_sides(J: JacobiOperator, gs: GroundState, f, gs_tol: float = 1e-8) -> GsrCheck:
    """Evaluate ``<fu, (-J) fu>`` and its ground-state representation independently.

    ``f`` must vanish on the outermost two layers of the box so that no
    boundary-crossing edge contributes.  ``J`` is taken relative to
    ``gs.energy``.
    """
    f = np.asarray(f, dtype=float)
    if f.shape != (J.size,):
        raise ValueError("f must have one entry per site")
    if np.any(f[J.box.layer_mask(2)] != 0):
        raise SupportTouchesBoundaryError("f must vanish within two layers of the boundary")
    Js = _annihilated(J, gs)
    if gs.residual > gs_tol * max(1.0, J.scale) * float(gs.modulus.max()):
        raise BadGroundStateError(f"ground-state residual {gs.residual:.3e} is too large")
    g = f * gs.u
    return GsrCheck(form(Js, g), gsr_rhs(Js, gs.u, f))


class CommutatorCheck(NamedTuple):
    """Assembled commutators, the edge-coefficient predictions and the verdict."""

    first: np.ndarray
    second: np.ndarray
    exact: bool
    max_error: float


def edge_matrix(J: JacobiOperator, weights: np.ndarray, antisymmetric: bool = False) -> np.ndarray:
    """Dense matrix with ``weights`` on the edges ``(i, j)`` of ``J.box`` and zero diagonal."""
    i, j, _ = J.box.edges
    m = np.zeros((J.size, J.size))
    m[i, j] = weights
    m[j, i] = -weights if antisymmetric else weights
    return m


def commutator_check(J: JacobiOperator, f, tol: float = COMMUTATOR_TOL) -> CommutatorCheck:
    """Compare ``[M_f, J]`` and ``[M_f, [M_f, J]]`` with their edge-coefficient forms.

    The first commutator has entries ``a_lm (f_l - f_m)`` and is antisymmetric;
    the second has ``a_lm (f_l - f_m)^2`` off the diagonal and zero diagonal.
    """
    f = np.asarray(f, dtype=float)
    M = J.dense()
    F = np.diag(f)
    first = F @ M - M @ F
    second = F @ first - first @ F
    i, j, _ = J.box.edges
    df = f[i] - f[j]
    err1 = np.max(np.abs(first - edge_matrix(J, J.a * df, antisymmetric=True)), initial=0.0)
    err2 = np.max(np.abs(second - edge_matrix(J, J.a * df * df)), initial=0.0)
    err = float(max(err1, err2))
    return CommutatorCheck(first, second, err <= tol, err)


def random_interior_f(J: JacobiOperator, rng: np.random.Generator, depth: int = 2) -> np.ndarray:
    """i.i.d. uniform ``[-1, 1]`` values on a random sub-box at least ``depth`` sites inside."""
    ranges = []
    for lo, hi in J.box.ranges:
        a, b = lo + depth, hi - depth
        if b < a:
            raise SupportTouchesBoundaryError("box too small for an interior test function")
        x, y = sorted(int(v) for v in rng.integers(a, b + 1, size=2))
        ranges.append((x, y))
    mask = J.box.sub_box_mask(ranges)
    f = np.zeros(J.size)
    f[mask] = rng.uniform(-1.0, 1.0, size=int(mask.sum()))
    return f


def form_nonnegativity_witness(J: JacobiOperator, gs: GroundState, trials: int = 100, seed: int = 0) -> float:
    """Smallest Rayleigh quotient ``<fu,(-J)fu>/<fu,fu>`` over random interior ``f``.

    Returned without judgement: a negative value means ``u`` does not
    annihilate ``J`` on the tested supports.
    """
    Js = _annihilated(J, gs)
    rng = np.random.default_rng(seed)
    best = np.inf
    for _ in range(trials):
        g = random_interior_f(Js, rng) * gs.u
        nrm = float(g @ g)
        if nrm == 0:
            continue
        best = min(best, form(Js, g) / nrm)
    return float(best)
