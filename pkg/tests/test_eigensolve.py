import numpy as np
import pytest

from conftest import tridiag
from gsrbound.errors import NotTridiagonalError, SizeLimitError, TooManyError
from gsrbound.eigensolve import (
    BOTTOM_NEGATIVE,
    TOP_POSITIVE,
    Spectrum,
    boundary_mass,
    count_above,
    eig_extreme,
    extract_levels,
    sturm_count,
)
from gsrbound.groundstate import periodic_edge_state
from gsrbound.lattice import LatticeBox
from gsrbound.operator import JacobiCoefficients, JacobiOperator, Perturbation, apply_perturbation, build_operator, free_operator, shift


def _random_tridiagonal(rng, n):
    return JacobiOperator(LatticeBox.interval(0, n - 1), rng.uniform(0.1, 2, n - 1), rng.uniform(-3, 3, n))


def test_sturm_scalar_and_3x3():
    J1 = JacobiOperator(LatticeBox.interval(0, 0), np.empty(0), np.array([-2.0]))
    assert sturm_count(J1, 0.0) == 1
    assert sturm_count(free_operator(3), 0.5) == 2
    assert count_above(free_operator(3), 0.5) == 1


def test_sturm_counts_match_dense(rng):
    J = _random_tridiagonal(rng, 200)
    ev = np.linalg.eigvalsh(tridiag(J.a, J.b))
    for lam in rng.uniform(-6, 6, 50):
        assert sturm_count(J, lam) == int(np.sum(ev < lam))


def test_sturm_needs_1d():
    J = build_operator(JacobiCoefficients.constant(1.0, 0.0, 2), LatticeBox.centered(4, 2))
    with pytest.raises(NotTridiagonalError):
        sturm_count(J, 0.0)


def test_top_of_3x3_shifted_free():
    J = free_operator(3, b=-2.0)
    assert eig_extreme(J, 1, "top").eigenvalues[0] == pytest.approx(np.sqrt(2) - 2, abs=1e-14)


def test_free_dirichlet_closed_form():
    n = 150
    ref = 2 * np.cos(np.arange(1, n + 1) * np.pi / (n + 1))
    spec = eig_extreme(free_operator(n), n, "top")
    assert np.allclose(spec.eigenvalues, np.sort(ref), atol=1e-13)


def test_single_site_bound_state():
    s = 1.5
    J = apply_perturbation(free_operator(600, b=-2.0), Perturbation(db={0: s}))
    spec = eig_extreme(J, 2, "top", vectors=True)
    top = spec.from_edge()
    assert top[0] == pytest.approx(np.sqrt(s * s + 4) - 2, abs=1e-6)
    assert top[1] < 0
    assert spec.masses_from_edge()[0] <= 1e-10
    # eigenvector decays like ((s - sqrt(s^2+4))/2)^|n|
    v = spec.vectors[:, -1]
    c = J.box.index(0)
    rho = (np.sqrt(s * s + 4) - s) / 2
    assert abs(v[c + 3] / v[c]) == pytest.approx(rho**3, rel=1e-8)


def test_period2_no_levels_above_band_top():
    c = JacobiCoefficients.periodic([1.0, 1.0], [0.0, -1.0])
    box = LatticeBox.centered(800)
    s, _, _ = periodic_edge_state(c, "top", box)
    assert eig_extreme(build_operator(c, box), 1, "top").eigenvalues[0] <= s + 1e-8


def test_vectors_are_eigenvectors(rng):
    J = _random_tridiagonal(rng, 120)
    spec = eig_extreme(J, 4, "bottom", vectors=True)
    M = tridiag(J.a, J.b)
    for k, lam in enumerate(spec.eigenvalues):
        v = spec.vectors[:, k]
        assert np.linalg.norm(M @ v - lam * v) <= 1e-10
    assert spec.vectors.T @ spec.vectors == pytest.approx(np.eye(4), abs=1e-10)


def test_dense_method_and_limits():
    box = LatticeBox.centered(8, 2)
    J = build_operator(JacobiCoefficients.constant(1.0, 0.0, 2), box)
    spec = eig_extreme(J, 3, "top")
    assert spec.method == "dense"
    assert np.allclose(spec.eigenvalues, np.linalg.eigvalsh(J.dense())[-3:])
    with pytest.raises(TooManyError):
        eig_extreme(free_operator(5), 6)
    big = build_operator(JacobiCoefficients.constant(1.0, 0.0, 2), LatticeBox.centered(64, 2))
    with pytest.raises(SizeLimitError):
        eig_extreme(big, 1)


def test_extract_levels_conventions():
    spec = Spectrum(np.array([-3.0, 0.1, 0.5]), "top", "test")
    assert extract_levels(spec, TOP_POSITIVE, 3).values.tolist() == [0.5, 0.1, 0.0]
    below = Spectrum(np.array([-3.0, -1.0]), "top", "test")
    assert extract_levels(below, TOP_POSITIVE, 4).values.tolist() == [0, 0, 0, 0]
    low = Spectrum(np.array([-3.0, -1.0, 0.2]), "bottom", "test")
    assert extract_levels(low, BOTTOM_NEGATIVE, 3).values.tolist() == [-3.0, -1.0, 0.0]


def test_boundary_mass():
    J = free_operator(50)
    d = np.zeros(50)
    d[25] = 1.0
    assert boundary_mass(J, d) == 0.0
    assert boundary_mass(J, np.ones(50)) == pytest.approx(2 / 50)
    box = LatticeBox.centered(10, 2)
    J2 = build_operator(JacobiCoefficients.constant(1.0, 0.0, 2), box)
    assert boundary_mass(J2, np.ones(box.size)) == pytest.approx(36 / 100)
