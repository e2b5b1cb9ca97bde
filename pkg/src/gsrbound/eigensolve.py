"""Extreme eigenvalues of truncated Jacobi operators.

One-dimensional operators are tridiagonal and go through Sturm-sequence
bisection; two-dimensional ones use a dense symmetric eigensolver capped at
``DENSE_LIMIT`` sites.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit
from scipy.linalg import solve_banded

from .errors import NotTridiagonalError, SizeLimitError, TooManyError
from .operator import JacobiOperator

DENSE_LIMIT = 4000
EPS = np.finfo(float).eps

TOP = "top"
BOTTOM = "bottom"
TOP_POSITIVE = "top-positive"
BOTTOM_NEGATIVE = "bottom-negative"


@njit(cache=True)
def _sturm(d, e2, lam, pivmin):
    count = 0
    q = d[0] - lam
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0:
        count += 1
    for i in range(1, d.size):
        q = d[i] - lam - e2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0:
            count += 1
    return count


@njit(cache=True)
def _bisect_indices(d, e2, idx, lo0, hi0, tol, pivmin):
    out = np.empty(idx.size)
    for k in range(idx.size):
        i = idx[k]
        lo = lo0
        hi = hi0
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if _sturm(d, e2, mid, pivmin) <= i:
                lo = mid
            else:
                hi = mid
        out[k] = 0.5 * (lo + hi)
    return out


def _tridiagonal(J: JacobiOperator) -> tuple[np.ndarray, np.ndarray]:
    if not J.is_tridiagonal:
        raise NotTridiagonalError("Sturm sequences need a one-dimensional operator")
    return np.ascontiguousarray(J.b, dtype=float), np.ascontiguousarray(J.a, dtype=float)


def _pivmin(d, e) -> float:
    return float(np.finfo(float).tiny) * max(1.0, float(np.max(e * e)) if e.size else 1.0)


def sturm_count(J: JacobiOperator, lam: float) -> int:
    """Number of eigenvalues of ``J`` strictly below ``lam``.

    A zero pivot is replaced by ``-pivmin``, which counts an eigenvalue
    sitting exactly at ``lam`` as lying below it only when rounding already
    put it there; exact ties are measure-zero for the callers here.
    """
    d, e = _tridiagonal(J)
    return int(_sturm(d, e * e, float(lam), _pivmin(d, e)))


def count_above(J: JacobiOperator, lam: float) -> int:
    """Number of eigenvalues strictly above ``lam`` (Sturm for 1D, dense otherwise)."""
    if J.is_tridiagonal:
        d, e = _tridiagonal(J)
        # eigenvalues <= lam are those < nextafter(lam, +inf)
        return J.size - int(_sturm(d, e * e, float(np.nextafter(lam, np.inf)), _pivmin(d, e)))
    return int(np.sum(_dense_eigenvalues(J) > lam))


def bisect_eigenvalues(J: JacobiOperator, indices, tol: float | None = None) -> np.ndarray:
    """Eigenvalues with the given ascending indices, each to bisection width ``tol``."""
    d, e = _tridiagonal(J)
    lo, hi = J.gershgorin()
    if tol is None:
        tol = 4 * EPS * max(1.0, J.scale)
    pad = 2 * EPS * max(1.0, J.scale)
    idx = np.asarray(indices, dtype=np.int64)
    return _bisect_indices(d, e * e, idx, lo - pad, hi + pad, float(tol), _pivmin(d, e))


def _dense_eigenvalues(J: JacobiOperator) -> np.ndarray:
    if J.size > DENSE_LIMIT:
        raise SizeLimitError(f"dense eigensolve limited to {DENSE_LIMIT} sites, got {J.size}")
    return np.linalg.eigvalsh(J.dense())


def boundary_mass(J: JacobiOperator, vector) -> float:
    """Fraction of the squared norm carried by the outermost layer of sites."""
    v = np.asarray(vector, dtype=float)
    total = float(v @ v)
    if total == 0:
        return 0.0
    m = J.box.boundary_mask
    return float(v[m] @ v[m]) / total


def inverse_iteration(J: JacobiOperator, lams: np.ndarray, steps: int = 3, seed: int = 0) -> np.ndarray:
    """Eigenvectors of a tridiagonal ``J`` for the (accurate) eigenvalues ``lams``.

    Nearly coincident eigenvalues are orthogonalized against each other.
    """
    d, e = _tridiagonal(J)
    n = d.size
    rng = np.random.default_rng(seed)
    scale = max(1.0, J.scale)
    vecs = np.empty((n, len(lams)))
    for k, lam in enumerate(lams):
        sigma = lam + 64 * EPS * scale
        ab = np.zeros((3, n))
        ab[0, 1:] = e
        ab[1] = d - sigma
        ab[2, :-1] = e
        v = rng.standard_normal(n)
        v /= np.linalg.norm(v)
        near = [j for j in range(k) if abs(lams[j] - lam) < 1e-8 * scale]
        for _ in range(steps):
            v = solve_banded((1, 1), ab, v, check_finite=False)
            for j in near:
                v -= (vecs[:, j] @ v) * vecs[:, j]
            v /= np.linalg.norm(v)
        vecs[:, k] = v
    return vecs


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Extreme part of a spectrum, stored ascending.

    ``orientation`` records which edge the caller counted from;
    ``boundary_masses`` is aligned with ``eigenvalues`` when vectors were
    computed.
    """

    eigenvalues: np.ndarray
    orientation: str
    method: str
    vectors: np.ndarray | None = None
    boundary_masses: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def from_edge(self) -> np.ndarray:
        """Eigenvalues ordered from the counted edge inward."""
        if self.orientation == TOP:
            return self.eigenvalues[::-1]
        return self.eigenvalues

    def masses_from_edge(self) -> np.ndarray | None:
        if self.boundary_masses is None:
            return None
        return self.boundary_masses[::-1] if self.orientation == TOP else self.boundary_masses


def eig_extreme(
    J: JacobiOperator,
    k: int,
    side: str = TOP,
    tol: float | None = None,
    vectors: bool = False,
    method: str | None = None,
) -> Spectrum:
    """The ``k`` eigenvalues of ``J`` closest to the ``side`` edge of its spectrum."""
    n = J.size
    if k > n:
        raise TooManyError(f"asked for {k} eigenvalues of a {n}-site operator")
    if side not in (TOP, BOTTOM):
        raise ValueError(f"side must be {TOP!r} or {BOTTOM!r}")
    if method is None:
        method = "sturm" if J.is_tridiagonal else "dense"
    if k == 0:
        return Spectrum(np.empty(0), side, method, np.empty((n, 0)) if vectors else None,
                        np.empty(0) if vectors else None)
    idx = np.arange(n - k, n) if side == TOP else np.arange(k)
    vecs = None
    if method == "sturm":
        vals = bisect_eigenvalues(J, idx, tol)
        if vectors:
            vecs = inverse_iteration(J, vals)
    elif method == "dense":
        if n > DENSE_LIMIT:
            raise SizeLimitError(f"dense eigensolve limited to {DENSE_LIMIT} sites, got {n}")
        if vectors:
            w, v = np.linalg.eigh(J.dense())
            vals, vecs = w[idx], v[:, idx]
        else:
            vals = np.linalg.eigvalsh(J.dense())[idx]
    else:
        raise ValueError(f"unknown method {method!r}")
    masses = None
    if vecs is not None:
        masses = np.array([boundary_mass(J, vecs[:, c]) for c in range(vecs.shape[1])])
    return Spectrum(np.asarray(vals, dtype=float), side, method, vecs, masses)


@dataclass(frozen=True, eq=False)
class ClampedLevels:
    values: np.ndarray
    convention: str

    def __len__(self):
        return self.values.size

    def __iter__(self):
        return iter(self.values)


def extract_levels(spec: Spectrum, convention: str, count: int) -> ClampedLevels:
    """First ``count`` clamped levels ``E_j``.

    ``top-positive``: ``max(0, j-th eigenvalue from the top)``;
    ``bottom-negative``: ``min(0, j-th eigenvalue from the bottom)``.
    Missing levels are padded with zeros.
    """
    if convention == TOP_POSITIVE:
        vals = np.sort(spec.eigenvalues)[::-1]
        vals = np.maximum(vals, 0.0)
    elif convention == BOTTOM_NEGATIVE:
        vals = np.sort(spec.eigenvalues)
        vals = np.minimum(vals, 0.0)
    else:
        raise ValueError(f"unknown convention {convention!r}")
    out = np.zeros(count)
    m = min(count, vals.size)
    out[:m] = vals[:m]
    return ClampedLevels(out, convention)
