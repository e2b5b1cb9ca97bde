"""Transfer matrices, Floquet discriminant and band edges of 1D periodic Jacobi matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import EdgeSolveFailure, NotPeriodicError
from .operator import JacobiCoefficients

N_SCAN = 100


def _cells(coeffs: JacobiCoefficients) -> tuple[np.ndarray, np.ndarray]:
    if not coeffs.is_periodic or coeffs.dim != 1:
        raise NotPeriodicError("Floquet analysis needs one-dimensional periodic coefficients")
    return np.asarray(coeffs.a_cell[0], float), np.asarray(coeffs.b_cell, float)


def monodromy(coeffs: JacobiCoefficients, lam) -> np.ndarray:
    """Product ``T_{p-1} ... T_0`` of one-step transfer matrices.

    ``T_n`` maps ``(u_n, u_{n-1})`` to ``(u_{n+1}, u_n)`` for solutions of
    ``a_n u_{n+1} + a_{n-1} u_{n-1} + b_n u_n = lam u_n``.  Vectorized over
    ``lam``; returns shape ``lam.shape + (2, 2)``.
    """
    a, b = _cells(coeffs)
    lam = np.asarray(lam, dtype=float)
    p = a.size
    m11 = np.ones_like(lam)
    m12 = np.zeros_like(lam)
    m21 = np.zeros_like(lam)
    m22 = np.ones_like(lam)
    for n in range(p):
        t11 = (lam - b[n]) / a[n]
        t12 = -a[n - 1] / a[n]
        # T @ M with T = [[t11, t12], [1, 0]]
        m11, m12, m21, m22 = t11 * m11 + t12 * m21, t11 * m12 + t12 * m22, m11, m12
    return np.stack([np.stack([m11, m12], -1), np.stack([m21, m22], -1)], -2)


def discriminant(coeffs: JacobiCoefficients, lam) -> np.ndarray:
    m = monodromy(coeffs, lam)
    return m[..., 0, 0] + m[..., 1, 1]


def discriminant_derivative(coeffs: JacobiCoefficients, lam) -> np.ndarray:
    """``d Delta / d lam`` by differentiating the transfer-matrix product."""
    a, b = _cells(coeffs)
    lam = np.asarray(lam, dtype=float)
    m = [np.ones_like(lam), np.zeros_like(lam), np.zeros_like(lam), np.ones_like(lam)]
    d = [np.zeros_like(lam) for _ in range(4)]
    for n in range(a.size):
        t11 = (lam - b[n]) / a[n]
        t12 = -a[n - 1] / a[n]
        dt11 = 1.0 / a[n]
        d = [
            dt11 * m[0] + t11 * d[0] + t12 * d[2],
            dt11 * m[1] + t11 * d[1] + t12 * d[3],
            d[0],
            d[1],
        ]
        m = [t11 * m[0] + t12 * m[2], t11 * m[1] + t12 * m[3], m[0], m[1]]
    return d[0] + d[3]


def cell_matrix(coeffs: JacobiCoefficients, theta: float = 0.0) -> np.ndarray:
    """Bloch matrix of one period with boundary phase ``e^{i theta}``.

    Only ``theta = 0`` (periodic) and ``theta = pi`` (antiperiodic) are
    real-symmetric; their eigenvalues are the roots of ``Delta = 2`` and
    ``Delta = -2`` respectively.
    """
    a, b = _cells(coeffs)
    p = a.size
    phase = np.cos(theta)
    m = np.diag(b).astype(float)
    for n in range(p - 1):
        m[n, n + 1] += a[n]
        m[n + 1, n] += a[n]
    m[p - 1, 0] += phase * a[p - 1]
    m[0, p - 1] += phase * a[p - 1]
    return m


def scan_interval(coeffs: JacobiCoefficients) -> tuple[float, float]:
    a, b = _cells(coeffs)
    r = 2.0 * a.max()
    return float(b.min() - r), float(b.max() + r)


def _bisect(f, lo: np.ndarray, hi: np.ndarray, tol: float) -> np.ndarray:
    """Vectorized bisection; ``f(lo)`` and ``f(hi)`` must differ in sign."""
    flo = f(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if np.all((hi - lo <= tol) | (mid == lo) | (mid == hi)):
            break
        fm = f(mid)
        left = np.sign(fm) == np.sign(flo)
        lo = np.where(left, mid, lo)
        flo = np.where(left, fm, flo)
        hi = np.where(left, hi, mid)
    return 0.5 * (lo + hi)


def _extrema(coeffs, lo: np.ndarray, hi: np.ndarray, tol: float) -> np.ndarray:
    """Critical points of ``Delta`` inside each bracket ``[lo_i, hi_i]``."""

    def dd(x):
        return discriminant_derivative(coeffs, x)

    out = 0.5 * (lo + hi)
    ok = dd(lo) * dd(hi) < 0
    if np.any(ok):
        out[ok] = _bisect(dd, lo[ok], hi[ok], 0.0)
    for k in np.flatnonzero(~ok):
        res = minimize_scalar(
            lambda x: -abs(float(discriminant(coeffs, x))),
            bounds=(lo[k], hi[k]),
            method="bounded",
            options={"xatol": tol},
        )
        out[k] = res.x
    return out


@dataclass(frozen=True, eq=False)
class FloquetData:
    coeffs: JacobiCoefficients
    edges: np.ndarray
    bands: tuple[tuple[float, float], ...]
    touching: tuple[float, ...]

    @property
    def period(self) -> int:
        return self.coeffs.period[0]

    def discriminant(self, lam):
        return discriminant(self.coeffs, lam)

    def monodromy(self, lam):
        return monodromy(self.coeffs, lam)

    @property
    def top(self) -> float:
        return self.bands[-1][1]

    @property
    def bottom(self) -> float:
        return self.bands[0][0]

    def hull(self) -> tuple[float, float]:
        return self.bottom, self.top

    def distance(self, lam: float) -> float:
        """Distance from ``lam`` to the band set."""
        d = np.inf
        for lo, hi in self.bands:
            if lo <= lam <= hi:
                return 0.0
            d = min(d, abs(lam - lo), abs(lam - hi))
        return float(d)


def floquet_data(coeffs: JacobiCoefficients, n_scan: int = N_SCAN, rtol: float = 1e-15) -> FloquetData:
    """Locate every band edge as a root of ``|Delta(lam)| = 2``.

    Roots are bracketed on a uniform grid of ``10 p n_scan`` points over the
    Gershgorin interval and refined by bisection.  Local maxima of ``|Delta|``
    that stay at or below 2 on the grid are refined separately: they are
    either narrow gaps missed by the grid or closed gaps (double roots).
    """
    a, b = _cells(coeffs)
    p = a.size
    lo, hi = scan_interval(coeffs)
    scale = max(1.0, float(a.max() + np.abs(b).max()))
    tol = rtol * scale
    pad = 1e-6 * scale
    grid = np.linspace(lo - pad, hi + pad, 10 * p * n_scan + 1)

    def f(x):
        return np.abs(discriminant(coeffs, x)) - 2.0

    g = f(grid)
    if g[0] <= 0 or g[-1] <= 0:
        raise EdgeSolveFailure("discriminant does not exceed 2 outside the scan interval")
    s = np.sign(g)
    cross = np.flatnonzero(s[:-1] * s[1:] < 0)
    roots = list(_bisect(f, grid[cross], grid[cross + 1], tol)) if cross.size else []
    inner = np.arange(1, grid.size - 1)
    exact = inner[(g[inner] == 0) & (s[inner - 1] * s[inner + 1] < 0)]
    roots.extend(grid[exact])
    touching = []
    peaks = inner[
        (g[inner] >= g[inner - 1])
        & (g[inner] >= g[inner + 1])
        & (g[inner - 1] <= 0)
        & (g[inner] <= 0)
        & (g[inner + 1] <= 0)
    ]
    if peaks.size:
        xs = _extrema(coeffs, grid[peaks - 1], grid[peaks + 1], tol)
        height = np.abs(discriminant(coeffs, xs)) - 2.0
        gap = height > 1e-9
        if np.any(gap):
            left = _bisect(f, grid[peaks[gap] - 1], xs[gap], tol)
            right = _bisect(f, xs[gap], grid[peaks[gap] + 1], tol)
            roots.extend(left)
            roots.extend(right)
        closed = ~gap & (height > -1e-8)
        roots.extend(np.repeat(xs[closed], 2))
        touching.extend(float(x) for x in xs[closed])
    edges = np.sort(np.array(roots, dtype=float))
    if edges.size != 2 * p:
        raise EdgeSolveFailure(f"found {edges.size} band edges, expected {2 * p}")
    bands = []
    for k in range(p):
        e0, e1 = float(edges[2 * k]), float(edges[2 * k + 1])
        if bands and e0 <= bands[-1][1] + tol:
            bands[-1] = (bands[-1][0], e1)
        else:
            bands.append((e0, e1))
    return FloquetData(coeffs, edges, tuple(bands), tuple(touching))
