import numpy as np
import pytest

ACCEPTANCE_LINES: list[str] = []


def bloch_matrix(a, b, theta):
    """Hand-built p x p Bloch matrix of the periodic Jacobi operator at quasimomentum ``theta``."""
    p = len(b)
    m = np.diag(np.asarray(b, dtype=complex))
    for i in range(p):
        j = (i + 1) % p
        phase = np.exp(1j * theta) if i == p - 1 else 1.0
        m[i, j] += a[i] * phase
        m[j, i] += a[i] * np.conj(phase)
    return m


def tridiag(a, b):
    """Dense symmetric tridiagonal matrix from off-diagonal ``a`` and diagonal ``b``."""
    return np.diag(b) + np.diag(a, 1) + np.diag(a, -1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
