import numpy as np
import pytest

from gsrbound.errors import SupportTouchesBoundaryError
from gsrbound.groundstate import POSITIVE, GroundState, periodic_edge_state
from gsrbound.lattice import LatticeBox
from gsrbound.operator import JacobiCoefficients, JacobiOperator, build_operator, free_operator, shift
from gsrbound.quadform import (
    commutator_check,
    form,
    form_nonnegativity_witness,
    gsr_both_sides,
    gsr_rhs,
    random_interior_f,
)


def _free_shifted(n):
    J = free_operator(n, b=-2.0)
    return J, GroundState(J.box, np.ones(n), POSITIVE, 0.0)


def test_zero_f():
    J, gs = _free_shifted(30)
    chk = gsr_both_sides(J, gs, np.zeros(30))
    assert chk.lhs == 0.0 and chk.rhs == 0.0


def test_single_site_indicator():
    J, gs = _free_shifted(30)
    f = np.zeros(30)
    f[15] = 1.0
    chk = gsr_both_sides(J, gs, f)
    assert chk.lhs == 2.0 and chk.rhs == 2.0


def test_support_must_avoid_boundary_layers():
    J, gs = _free_shifted(30)
    f = np.zeros(30)
    f[1] = 1.0
    with pytest.raises(SupportTouchesBoundaryError):
        gsr_both_sides(J, gs, f)


@pytest.mark.parametrize("edge", ["top", "bottom"])
def test_period2_random_f(rng, edge):
    c = JacobiCoefficients.periodic([1.0, 1.0], [0.0, -1.0])
    box = LatticeBox.centered(400)
    s, gs, _ = periodic_edge_state(c, edge, box)
    J = shift(build_operator(c, box), s)
    for _ in range(20):
        chk = gsr_both_sides(J, gs, random_interior_f(J, rng))
        assert chk.residual <= 1e-10 * chk.scale


def test_gsr_2d_generic_ground_state(rng):
    from gsrbound.groundstate import generic_ground_state

    box = LatticeBox.centered(12, 2)
    J = JacobiOperator(box, rng.uniform(0.5, 1.5, box.n_edges), rng.uniform(-1, 1, box.size))
    gs = generic_ground_state(J)
    for _ in range(10):
        chk = gsr_both_sides(J, gs, random_interior_f(J, rng), gs_tol=1e-8)
        # the truncated eigenvector annihilates J - E up to its residual
        assert chk.residual <= 1e-8 * chk.scale


def test_rhs_invariant_under_constant_shift(rng):
    c = JacobiCoefficients.periodic([1.0, 2.0], [0.3, -0.2])
    box = LatticeBox.centered(100)
    _, gs, _ = periodic_edge_state(c, "top", box)
    J = build_operator(c, box)
    f = rng.uniform(-1, 1, box.size)
    base = gsr_rhs(J, gs.u, f)
    assert gsr_rhs(J, gs.u, f + 3.7) == pytest.approx(base, rel=1e-10)


def test_commutator_constant_f():
    J = free_operator(15)
    chk = commutator_check(J, np.full(15, 2.5))
    assert chk.exact and not chk.first.any() and not chk.second.any()


def test_commutator_linear_f():
    J = build_operator(JacobiCoefficients.constant(1.0, 0.0), LatticeBox.interval(0, 10))
    chk = commutator_check(J, np.arange(11.0))
    off = chk.second[np.arange(10), np.arange(1, 11)]
    assert np.all(off == 1.0)
    assert np.all(np.diag(chk.second) == 0)
    assert np.array_equal(chk.first, -chk.first.T)


def test_commutator_random(rng):
    for dim, n in [(1, 40), (2, 7)]:
        box = LatticeBox.centered(n, dim)
        J = JacobiOperator(box, rng.uniform(0.1, 2, box.n_edges), rng.normal(size=box.size))
        chk = commutator_check(J, rng.uniform(-1, 1, box.size))
        assert chk.exact and chk.max_error <= 1e-13


def test_witness_nonnegative_backgrounds():
    J, gs = _free_shifted(100)
    assert form_nonnegativity_witness(J, gs, 100, 1) >= -1e-10
    c = JacobiCoefficients.periodic([1.0, 1.0], [0.0, -1.0])
    box = LatticeBox.centered(100)
    s, gs2, _ = periodic_edge_state(c, "top", box)
    assert form_nonnegativity_witness(shift(build_operator(c, box), s), gs2, 100, 2) >= -1e-10


def test_witness_reports_broken_annihilation():
    J, gs = _free_shifted(60)
    b = J.b.copy()
    b[30] += 0.5
    lifted = form_nonnegativity_witness(J.replace(b=b), gs, 200, 3)
    base = form_nonnegativity_witness(J, gs, 200, 3)
    # same seed, same test functions: lifting b lowers every quotient
    assert np.isfinite(lifted) and lifted <= base


def test_lifted_site_has_explicit_negative_direction():
    J, gs = _free_shifted(60)
    b = J.b.copy()
    b[30] += 2.5
    f = np.zeros(60)
    f[30] = 1.0
    # GSR part is 2 (two unit edges), the lift subtracts 2.5
    assert form(J.replace(b=b), f * gs.u) == pytest.approx(-0.5)
