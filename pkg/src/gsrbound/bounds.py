"""Eigenvalue comparison certificates, Lieb-Thirring moment checks and Szego sums."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .eigensolve import (
    BOTTOM,
    TOP,
    TOP_POSITIVE,
    bisect_eigenvalues,
    count_above,
    eig_extreme,
    extract_levels,
    sturm_count,
)
from .errors import (
    GammaOutOfRangeError,
    NegativeGammaError,
    NotPeriodicError,
    TruncationSuspectError,
    UnknownConstantError,
)
from .floquet import FloquetData, floquet_data
from .groundstate import (
    POSITIVE,
    ComparisonConstants,
    GroundState,
    comparison_constants,
    generic_ground_state,
    periodic_edge_state,
)
from .lattice import LatticeBox
from .operator import (
    JacobiCoefficients,
    JacobiOperator,
    Perturbation,
    apply_perturbation,
    build_operator,
    conjugate_W,
    discretize_schrodinger,
    dominating_potential,
    shift,
    site_array,
)

SLACK_REL = 1e-9
MASS_LIMIT = 1e-8
HULL_TOL = 1e-9
C_MESH = 10.0

# Only the constant quoted alongside the inequality is built in; every other
# L_{gamma,nu} has to be passed explicitly.
LT_CONSTANTS = {(0.5, 1): 0.5}


@dataclass(frozen=True)
class Background:
    """A background normalized so that its spectral edge sits at 0."""

    op: JacobiOperator
    gs: GroundState
    edge: float
    floquet: FloquetData | None = None


def normalized_background(coeffs: JacobiCoefficients, box: LatticeBox, edge: str = "top") -> Background:
    """Shift periodic ``coeffs`` so that the requested edge is 0 and attach its edge state."""
    s, gs, fd = periodic_edge_state(coeffs, edge, box)
    op = shift(build_operator(coeffs, box), s)
    return Background(op, gs, s, fd)


def ground_state_of(J: JacobiOperator) -> GroundState:
    """Top-edge state of a (normalized) background: exact when periodic 1D, truncated otherwise."""
    if J.coeffs is not None and J.coeffs.is_periodic and J.dim == 1:
        return periodic_edge_state(J.coeffs, "top", J.box)[1]
    return generic_ground_state(J)


@dataclass(frozen=True, eq=False)
class ComparisonCertificate:
    """Row-by-row comparison of clamped levels of two operators.

    ``lhs[j]`` are the levels of the perturbed background and ``rhs[j]``
    those of ``(eta a1, eta b1 + beta w)``.  ``masses_*`` hold the boundary
    mass of every eigenvector behind a nonzero level (0 for clamped rows).
    """

    constants: ComparisonConstants
    lhs: np.ndarray
    rhs: np.ndarray
    masses_lhs: np.ndarray
    masses_rhs: np.ndarray
    side: str = TOP
    slack_rel: float = SLACK_REL
    mass_limit: float = MASS_LIMIT
    meta: dict = field(default_factory=dict)

    @property
    def margins(self) -> np.ndarray:
        return self.rhs - self.lhs

    @property
    def slack(self) -> np.ndarray:
        return self.slack_rel * (1.0 + np.abs(self.lhs) + np.abs(self.rhs))

    @property
    def holds(self) -> bool:
        return bool(np.all(self.margins >= -self.slack))

    @property
    def max_boundary_mass(self) -> float:
        return float(max(self.masses_lhs.max(initial=0.0), self.masses_rhs.max(initial=0.0)))

    @property
    def truncation_suspect(self) -> bool:
        return self.max_boundary_mass > self.mass_limit

    def rows(self) -> list[dict]:
        return [
            {"j": j + 1, "lhs": float(l), "rhs": float(r), "margin": float(r - l)}
            for j, (l, r) in enumerate(zip(self.lhs, self.rhs))
        ]

    def verify(self) -> "ComparisonCertificate":
        if self.truncation_suspect:
            raise TruncationSuspectError(
                f"eigenvector boundary mass {self.max_boundary_mass:.2e} exceeds {self.mass_limit:.0e}"
            )
        return self

    def to_dict(self) -> dict:
        return {
            "side": self.side,
            "constants": self.constants.to_dict(),
            "rows": self.rows(),
            "holds": self.holds,
            "slack_rel": self.slack_rel,
            "max_boundary_mass": self.max_boundary_mass,
            "truncation_suspect": self.truncation_suspect,
            **self.meta,
        }


def _top_levels(J: JacobiOperator, k: int) -> tuple[np.ndarray, np.ndarray]:
    spec = eig_extreme(J, k, TOP, vectors=True)
    levels = extract_levels(spec, TOP_POSITIVE, k).values
    masses = np.where(levels > 0, spec.masses_from_edge(), 0.0)
    return levels, masses


def comparison_operator(J1: JacobiOperator, constants: ComparisonConstants, delta: Perturbation) -> JacobiOperator:
    """``J(eta a1, eta b1 + beta w)`` with ``w`` the dominating potential of ``delta``."""
    w = site_array(dominating_potential(delta), J1.box)
    return JacobiOperator(
        J1.box,
        constants.eta * J1.a,
        constants.eta * J1.b + constants.beta * w,
        None,
        "comparison",
    )


def theorem41_certificate(
    J0: JacobiOperator,
    gs0: GroundState,
    J1: JacobiOperator,
    gs1: GroundState,
    delta: Perturbation,
    k: int,
    strict: bool = False,
) -> ComparisonCertificate:
    """Check ``E_j(J0 + delta) <= E_j(eta a1, eta b1 + beta w)`` for ``j = 1..k``.

    Both backgrounds must already be shifted so that their top edge is 0 and
    ``gs0``, ``gs1`` must be positive solutions for them.  With
    ``strict=True`` a truncation-suspect certificate raises.
    """
    constants = comparison_constants(gs0, J0, gs1, J1)
    lhs_op = apply_perturbation(J0, delta)
    rhs_op = comparison_operator(J1, constants, delta)
    lhs, m_lhs = _top_levels(lhs_op, k)
    rhs, m_rhs = _top_levels(rhs_op, k)
    cert = ComparisonCertificate(constants, lhs, rhs, m_lhs, m_rhs, TOP, meta={"sites": J0.size})
    return cert.verify() if strict else cert


def theorem43_certificate(
    J0: JacobiOperator,
    J1: JacobiOperator,
    delta: Perturbation,
    k: int,
    gs0: GroundState | None = None,
    gs1: GroundState | None = None,
    strict: bool = False,
) -> ComparisonCertificate:
    """Bottom-edge comparison for backgrounds normalized so that ``inf spec = 0``.

    Everything is W-conjugated (``b -> -b``, ``db -> -db``, ``da`` kept),
    which maps the bottom edge to the top edge and ``|E_j^-|`` to ``E_j``.
    Optional ``gs0``/``gs1`` are the alternating-positive states of the
    original backgrounds.
    """
    J0w, J1w = conjugate_W(J0), conjugate_W(J1)
    g0 = _flip(gs0) if gs0 is not None else ground_state_of(J0w)
    g1 = _flip(gs1) if gs1 is not None else ground_state_of(J1w)
    cert = theorem41_certificate(J0w, g0, J1w, g1, delta.conjugated(), k, strict)
    return ComparisonCertificate(
        cert.constants, cert.lhs, cert.rhs, cert.masses_lhs, cert.masses_rhs, BOTTOM, meta=cert.meta
    )


def _flip(gs: GroundState) -> GroundState:
    return replace(gs, u=gs.box.parity * gs.u, orientation=POSITIVE)


def bottom_levels(J: JacobiOperator, k: int) -> np.ndarray:
    """``|E_j^-| = |min(0, j-th eigenvalue from the bottom)|`` computed directly."""
    spec = eig_extreme(J, k, BOTTOM)
    vals = np.minimum(np.sort(spec.eigenvalues), 0.0)
    out = np.zeros(k)
    out[: vals.size] = np.abs(vals)
    return out


def moment_sum(levels, gamma: float) -> float:
    """``sum |E_j|^gamma`` with ``0^0 = 0``."""
    if gamma < 0:
        raise NegativeGammaError(f"gamma = {gamma} < 0")
    vals = np.abs(np.asarray(getattr(levels, "values", levels), dtype=float))
    vals = vals[vals > 0]
    return float(np.sum(vals**gamma))


def _check_gamma(gamma: float, nu: int) -> None:
    ok = {1: gamma >= 0.5, 2: gamma > 0}.get(nu, gamma >= 0)
    if not ok:
        raise GammaOutOfRangeError(f"gamma = {gamma} is outside the Lieb-Thirring range for nu = {nu}")


def lt_constant(gamma: float, nu: int, L: float | None = None) -> float:
    if L is not None:
        return float(L)
    try:
        return LT_CONSTANTS[(float(gamma), int(nu))]
    except KeyError:
        raise UnknownConstantError(f"no built-in L_{{{gamma},{nu}}}; pass it explicitly") from None


def lt_bound_rhs(V, gamma: float, nu: int, beta: float, h: float, L: float | None = None) -> float:
    """``L_{gamma,nu} beta^{gamma + nu/2} sum |V|^{gamma + nu/2} h^nu``."""
    _check_gamma(gamma, nu)
    L = lt_constant(gamma, nu, L)
    v = np.asarray(V, dtype=float)
    if np.any(v > 0):
        raise ValueError("V must be nonpositive")
    p = gamma + nu / 2.0
    return float(L * beta**p * np.sum(np.abs(v) ** p) * h**nu)


@dataclass(frozen=True)
class MomentReport:
    """One side of a Lieb-Thirring check.

    ``kind`` is ``upper`` (``S <= bound``) or ``lower`` (``S >= bound``);
    ``holds`` allows ``slack``, ``gap`` is the slack-free distance to failure.
    """

    gamma: float
    lhs: float
    rhs: float
    kind: str
    beta: float
    L: float | None
    h: float
    slack: float
    n_levels: int

    @property
    def gap(self) -> float:
        return self.rhs - self.lhs if self.kind == "upper" else self.lhs - self.rhs

    @property
    def holds(self) -> bool:
        return self.gap >= -self.slack

    def to_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "kind": self.kind,
            "S": self.lhs,
            "bound": self.rhs,
            "gap": self.gap,
            "slack": self.slack,
            "holds": self.holds,
            "beta": self.beta,
            "L": self.L,
            "h": self.h,
            "n_levels": self.n_levels,
        }


def lt_sandwich_check(V0, V, h: float, interval, gamma: float = 0.5, c_mesh: float = C_MESH):
    """Upper and lower moment bounds for ``-d^2/dx^2 + V0 + V`` on a mesh of width ``h``.

    The discretized periodic background is shifted so its top edge (minus
    the bottom of ``H0``) is 0 and ``beta`` is read from its periodic ground
    state.  Returns ``(upper, lower)``; ``lower`` is None unless
    ``gamma = 1/2``.
    """
    J0, delta = discretize_schrodinger(V0, V, h, interval)
    if J0.coeffs is None:
        raise NotPeriodicError("the background potential must be periodic on the mesh")
    s, gs, _ = periodic_edge_state(J0.coeffs, "top", J0.box)
    beta = gs.beta_reg
    J = apply_perturbation(shift(J0, s), delta)
    n = count_above(J, 0.0)
    levels = extract_levels(eig_extreme(J, n, TOP), TOP_POSITIVE, n) if n else None
    S = moment_sum(levels.values if levels is not None else [], gamma)
    v = -site_array(delta.db, J0.box)
    integral = float(np.sum(np.abs(v)) * h)
    slack = c_mesh * h * integral
    L = lt_constant(gamma, 1)
    upper = MomentReport(gamma, S, lt_bound_rhs(v, gamma, 1, beta, h), "upper", beta, L, h, slack, n)
    lower = None
    if gamma == 0.5:
        lower = MomentReport(gamma, S, integral / (4.0 * beta), "lower", beta, None, h, slack, n)
    return upper, lower


def band_spectrum(coeffs: JacobiCoefficients) -> list[tuple[float, float]]:
    """Closed bands of the periodic whole-line operator; ``[0][0]``/``[-1][1]`` span the hull."""
    return list(floquet_data(coeffs).bands)


@dataclass(frozen=True)
class SzegoReport:
    bands: tuple[tuple[float, float], ...]
    outside_top: tuple[float, ...]
    outside_bottom: tuple[float, ...]
    lhs: float
    norm: float

    @property
    def c_emp(self) -> float | None:
        return self.lhs / self.norm if self.norm > 0 else None

    def to_dict(self) -> dict:
        return {
            "bands": [list(b) for b in self.bands],
            "outside_top": list(self.outside_top),
            "outside_bottom": list(self.outside_bottom),
            "lhs": self.lhs,
            "norm": self.norm,
            "c_emp": self.c_emp,
        }


def szego_sum(
    background, delta: Perturbation, half_line: bool = False, n_sites: int = 2000
) -> SzegoReport:
    """Half-power distances to the band set of the eigenvalues outside its convex hull.

    ``background`` is periodic coefficients (laid on ``[1, n_sites]`` for the
    half line, a centered box otherwise) or an operator built from them.
    """
    if isinstance(background, JacobiOperator):
        J0 = background
        coeffs = J0.coeffs
    else:
        coeffs = background
        box = LatticeBox.interval(1, n_sites) if half_line else LatticeBox.centered(n_sites)
        J0 = build_operator(coeffs, box)
    if coeffs is None or not coeffs.is_periodic or J0.dim != 1:
        raise NotPeriodicError("Szego sums need a one-dimensional periodic background")
    if half_line and J0.box.ranges[0][0] != 1:
        raise ValueError("half-line boxes start at site 1")
    fd = floquet_data(coeffs)
    J = apply_perturbation(J0, delta)
    lo, hi = fd.hull()
    n_top = count_above(J, hi + HULL_TOL)
    n_bot = sturm_count(J, lo - HULL_TOL)
    top = bisect_eigenvalues(J, np.arange(J.size - n_top, J.size))[::-1] if n_top else np.empty(0)
    bot = bisect_eigenvalues(J, np.arange(n_bot)) if n_bot else np.empty(0)
    lhs = float(sum(np.sqrt(fd.distance(e)) for e in np.concatenate([top, bot])))
    return SzegoReport(fd.bands, tuple(map(float, top)), tuple(map(float, bot)), lhs, delta.l1_norm)
