import numpy as np
import pytest

from conftest import bloch_matrix
from gsrbound.bounds import band_spectrum
from gsrbound.floquet import cell_matrix, discriminant, floquet_data, monodromy
from gsrbound.operator import JacobiCoefficients


def bloch_edges(a, b, n_theta=2001):
    """Band intervals from a dense quasimomentum scan of the hand-built Bloch matrix."""
    thetas = np.linspace(0, np.pi, n_theta)
    ev = np.array([np.linalg.eigvalsh(bloch_matrix(a, b, t)) for t in thetas])
    return [(ev[:, j].min(), ev[:, j].max()) for j in range(len(b))]


def test_free_band():
    assert band_spectrum(JacobiCoefficients.constant(1.0, 0.0)) == [(pytest.approx(-2.0, abs=1e-13), pytest.approx(2.0, abs=1e-13))]


def test_constant_b_shifts_band():
    bands = band_spectrum(JacobiCoefficients.periodic([1.0, 1.0], [0.3, 0.3]))
    assert len(bands) == 1
    assert bands[0][0] == pytest.approx(-1.7, abs=1e-12)
    assert bands[0][1] == pytest.approx(2.3, abs=1e-12)


def test_period2_edges_closed_form():
    # b = (0, -1): edges solve lam (lam + 1) = 4 or lam (lam + 1) = 0
    fd = floquet_data(JacobiCoefficients.periodic([1.0, 1.0], [0.0, -1.0]))
    r = np.sqrt(17.0)
    ref = [(-1 - r) / 2, -1.0, 0.0, (-1 + r) / 2]
    assert np.allclose(fd.edges, ref, atol=1e-13)
    assert fd.top == pytest.approx(ref[-1], abs=1e-13)
    assert fd.hull() == (pytest.approx(ref[0], abs=1e-13), pytest.approx(ref[-1], abs=1e-13))


@pytest.mark.parametrize("seed", range(8))
def test_random_bands_match_bloch_scan(seed):
    rng = np.random.default_rng(seed)
    p = int(rng.integers(1, 5))
    a, b = rng.uniform(0.5, 2, p), rng.uniform(-1, 1, p)
    fd = floquet_data(JacobiCoefficients.periodic(a, b))
    # band extremes sit at theta = 0 or pi
    ev = np.sort(np.concatenate([np.linalg.eigvalsh(bloch_matrix(a, b, t)) for t in (0.0, np.pi)]))
    assert np.allclose(fd.edges, ev, atol=1e-10)
    merged = bloch_edges(a, b, 401)
    assert fd.bands[0][0] == pytest.approx(merged[0][0], abs=1e-10)
    assert fd.bands[-1][1] == pytest.approx(merged[-1][1], abs=1e-10)


def test_cell_matrix_matches_bloch_matrix():
    a, b = [1.0, 1.3, 0.7], [0.2, -0.1, 0.5]
    c = JacobiCoefficients.periodic(a, b)
    for theta in (0.0, np.pi):
        assert np.allclose(cell_matrix(c, theta), bloch_matrix(a, b, theta).real, atol=1e-15)


def test_discriminant_is_trace_of_monodromy_and_det_one():
    c = JacobiCoefficients.periodic([1.0, 2.0, 0.5], [0.1, -0.3, 0.7])
    lam = np.linspace(-4, 4, 9)
    M = monodromy(c, lam)
    assert np.allclose(np.linalg.det(M), 1.0, atol=1e-12)
    assert np.allclose(discriminant(c, lam), np.trace(M, axis1=-2, axis2=-1))


def test_discriminant_pm2_at_edges():
    fd = floquet_data(JacobiCoefficients.periodic([1.0, 1.5], [0.2, -0.4]))
    d = discriminant(fd.coeffs, fd.edges)
    assert np.allclose(np.abs(d), 2.0, atol=1e-10)


def test_dense_truncation_histogram_agrees():
    c = JacobiCoefficients.periodic([1.0, 1.0], [0.0, -1.0])
    from gsrbound.lattice import LatticeBox
    from gsrbound.operator import build_operator

    ev = np.linalg.eigvalsh(build_operator(c, LatticeBox.centered(4000)).dense())
    fd = floquet_data(c)
    assert ev.min() >= fd.bottom - 1e-12 and ev.max() <= fd.top + 1e-12
    # no eigenvalue in the open gap (-1, 0), apart from none at all for the periodic truncation
    inside_gap = ev[(ev > fd.edges[1] + 1e-3) & (ev < fd.edges[2] - 1e-3)]
    assert inside_gap.size <= 2
    assert ev.max() == pytest.approx(fd.top, abs=1e-5)
