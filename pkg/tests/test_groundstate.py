import numpy as np
import pytest

from gsrbound.errors import BoxMismatchError, OrientationMismatchError
from gsrbound.groundstate import (
    ALTERNATING,
    POSITIVE,
    GroundState,
    comparison_constants,
    generic_ground_state,
    periodic_edge_state,
    regularity_constants,
    residual,
)
from gsrbound.lattice import LatticeBox
from gsrbound.operator import JacobiCoefficients, build_operator, free_operator, shift
from gsrbound.eigensolve import eig_extreme

P2 = JacobiCoefficients.periodic([1.0, 1.0], [0.0, -1.0])


def test_free_top_edge():
    box = LatticeBox.centered(40)
    s, gs, _ = periodic_edge_state(JacobiCoefficients.constant(1.0, 0.0), "top", box)
    assert s == pytest.approx(2.0, abs=1e-14)
    assert np.allclose(gs.u, 1.0)
    assert gs.beta_reg == pytest.approx(1.0)
    assert gs.orientation == POSITIVE


def test_free_bottom_edge_alternates():
    box = LatticeBox.interval(0, 19)
    s, gs, _ = periodic_edge_state(JacobiCoefficients.constant(1.0, 0.0), "bottom", box)
    assert s == pytest.approx(-2.0, abs=1e-14)
    assert np.allclose(gs.u, (-1.0) ** np.arange(20))
    assert gs.orientation == ALTERNATING
    assert gs.residual <= 1e-14


def test_period2_edge_against_dense_truncation():
    n = 4000
    box = LatticeBox.centered(n)
    s, gs, _ = periodic_edge_state(P2, "top", box)
    w, v = np.linalg.eigh(build_operator(P2, box).dense())
    assert abs(w[-1] - s) <= 1e-6
    assert gs.residual <= 1e-12
    top = np.abs(v[:, -1])
    ratio = top / gs.u
    # the truncated eigenvector is the periodic solution times a slowly varying
    # Dirichlet envelope: no period-2 pattern may survive in the ratio
    core = box.core_mask
    r = ratio[core] / ratio[core].max()
    assert np.max(np.abs(np.diff(r, 2))) <= 1e-4


def test_generic_free_dirichlet_sine_profile():
    J = free_operator(200, b=-2.0)
    gs = generic_ground_state(J)
    assert np.all(gs.u > 0)
    n = np.arange(1, 201)
    sine = np.sin(np.pi * n / 201)
    assert np.allclose(gs.u / gs.u.max(), sine / sine.max(), atol=1e-10)
    assert gs.energy == pytest.approx(2 * np.cos(np.pi / 201) - 2, abs=1e-13)
    assert gs.u[J.box.core_mask].min() == pytest.approx(1.0)


def test_generic_matches_periodic_after_envelope():
    box = LatticeBox.centered(2000)
    s, gs_p, _ = periodic_edge_state(P2, "top", box)
    gs_g = generic_ground_state(shift(build_operator(P2, box), s))
    r = (gs_g.u / gs_p.u)[box.core_mask]
    r /= r.max()
    assert np.max(np.abs(np.diff(r, 2))) <= 1e-4
    # at the center the envelope is flat, so the profiles agree directly
    c = box.index(0)
    local = gs_g.u[c - 4 : c + 4] / gs_g.u[c]
    ref = gs_p.u[c - 4 : c + 4] / gs_p.u[c]
    assert np.allclose(local, ref, rtol=1e-4)


def test_generic_with_bump_residual_and_positivity():
    J = free_operator(300, b=-2.0)
    b = J.b.copy()
    b[150] += 1.0
    J = J.replace(b=b)
    gs = generic_ground_state(J)
    assert np.all(gs.u > 0)
    assert gs.residual <= 1e-8 * J.scale * gs.u.max()
    assert residual(J, gs.u, gs.energy) == pytest.approx(gs.residual)


def test_generic_with_lowered_sites():
    J = free_operator(200, b=-2.0)
    b = J.b.copy()
    b[90:110] -= 0.3
    gs = generic_ground_state(J.replace(b=b))
    assert np.all(gs.u > 0)
    assert gs.residual <= 1e-8 * J.scale * gs.u.max()
    ev = np.linalg.eigvalsh(J.replace(b=b).dense())
    assert gs.energy == pytest.approx(ev[-1], abs=1e-12)


def test_regularity_constants_trivial():
    box = LatticeBox.interval(0, 9)
    assert regularity_constants(GroundState(box, np.ones(10), POSITIVE, 0.0)) == (1.0, 1.0, 1.0)
    alt = GroundState(box, (-1.0) ** np.arange(10), ALTERNATING, 0.0)
    assert regularity_constants(alt) == (1.0, 1.0, 1.0)


def test_regularity_constants_period2_direct_scan():
    box = LatticeBox.centered(100)
    _, gs, _ = periodic_edge_state(P2, "top", box)
    vals = [abs(gs.u[box.index(x)]) for x in range(-25, 25)]
    c1, c2, beta = regularity_constants(gs)
    assert c1 == min(vals) and c2 == max(vals)
    assert beta == pytest.approx((max(vals) / min(vals)) ** 2, rel=1e-15)


def test_comparison_constants_self_and_scaled():
    box = LatticeBox.centered(60)
    s, gs, _ = periodic_edge_state(P2, "top", box)
    J = shift(build_operator(P2, box), s)
    cc = comparison_constants(gs, J, gs, J)
    assert cc.to_dict() == pytest.approx(dict(beta_plus=1, beta_minus=1, gamma_minus=1, eta=1, beta=1))
    cc2 = comparison_constants(gs.scaled(2.0), J, gs, J)
    assert cc2.beta_plus == pytest.approx(4) and cc2.beta_minus == pytest.approx(4)
    assert cc2.gamma_minus == pytest.approx(4)
    assert cc2.eta == pytest.approx(1) and cc2.beta == pytest.approx(1)


def test_comparison_constants_period2_vs_free():
    box = LatticeBox.centered(80)
    s0, gs0, _ = periodic_edge_state(P2, "top", box)
    s1, gs1, _ = periodic_edge_state(JacobiCoefficients.constant(1.0, 0.0), "top", box)
    J0 = shift(build_operator(P2, box), s0)
    J1 = shift(build_operator(JacobiCoefficients.constant(1.0, 0.0), box), s1)
    cc = comparison_constants(gs0, J0, gs1, J1)
    assert cc.beta == pytest.approx(gs0.beta_reg, rel=1e-14)
    core = box.core_mask
    i, j, _ = box.edges
    inner = core[i] & core[j]
    assert cc.gamma_minus == pytest.approx(np.min(gs0.u[i[inner]] * gs0.u[j[inner]]), rel=1e-14)


def test_comparison_constants_mismatch_errors():
    b1, b2 = LatticeBox.centered(20), LatticeBox.centered(22)
    _, g1, _ = periodic_edge_state(P2, "top", b1)
    _, g2, _ = periodic_edge_state(P2, "top", b2)
    _, g3, _ = periodic_edge_state(P2, "bottom", b1)
    J1, J2 = build_operator(P2, b1), build_operator(P2, b2)
    with pytest.raises(BoxMismatchError):
        comparison_constants(g1, J1, g2, J2)
    with pytest.raises(OrientationMismatchError):
        comparison_constants(g1, J1, g3, J1)


def test_bottom_edge_matches_dense_bottom():
    box = LatticeBox.centered(3000)
    s, gs, _ = periodic_edge_state(P2, "bottom", box)
    bottom = eig_extreme(build_operator(P2, box), 1, "bottom").eigenvalues[0]
    assert abs(bottom - s) <= 1e-5
    assert np.all(gs.u * box.parity > 0)
