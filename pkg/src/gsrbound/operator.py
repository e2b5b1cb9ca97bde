"""Jacobi operators on finite boxes, their perturbations and transformations.

A Jacobi operator acts as

    (J phi)_l = sum_{|m - l| = 1} a_{lm} phi_m + b_l phi_l

with symmetric positive edge weights ``a`` and real site weights ``b``.  On a
finite :class:`~gsrbound.lattice.LatticeBox` every out-of-box term is dropped
(Dirichlet truncation), which is the plain principal submatrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np
import scipy.sparse as sp

from .errors import (
    BadMeshError,
    LengthMismatchError,
    MissingEdgeError,
    NonpositiveAError,
    PositiveVError,
    SupportError,
)
from .lattice import LatticeBox, Site, as_site

Edge = tuple[Site, Site]


def _edge_key(s: Site, t: Site) -> Edge:
    return (s, t) if s <= t else (t, s)


def _frozen(x) -> np.ndarray:
    x = np.array(x, dtype=float)
    x.setflags(write=False)
    return x


@dataclass(frozen=True, eq=False)
class JacobiCoefficients:
    """Coefficient data before it is laid onto a box.

    Either periodic (``a_cell`` of shape ``(dim, *period)``, ``b_cell`` of
    shape ``period``; constant coefficients are period 1) or explicit maps
    keyed by site tuples and unordered edge tuples.
    """

    dim: int = 1
    period: tuple[int, ...] | None = None
    a_cell: np.ndarray | None = None
    b_cell: np.ndarray | None = None
    a_map: Mapping[Edge, float] | None = None
    b_map: Mapping[Site, float] | None = None

    def __post_init__(self):
        if self.period is not None:
            period = tuple(int(p) for p in self.period)
            if len(period) != self.dim or min(period) < 1:
                raise ValueError(f"bad period {self.period}")
            object.__setattr__(self, "period", period)
            a_cell = _frozen(self.a_cell).reshape((self.dim,) + period)
            b_cell = _frozen(self.b_cell).reshape(period)
            if not (np.all(np.isfinite(a_cell)) and np.all(np.isfinite(b_cell))):
                raise ValueError("coefficients must be finite")
            if np.any(a_cell <= 0):
                raise NonpositiveAError("periodic edge coefficients must be > 0")
            object.__setattr__(self, "a_cell", a_cell)
            object.__setattr__(self, "b_cell", b_cell)
        else:
            a_map = {
                _edge_key(as_site(s, self.dim), as_site(t, self.dim)): float(v)
                for (s, t), v in (self.a_map or {}).items()
            }
            b_map = {as_site(s, self.dim): float(v) for s, v in (self.b_map or {}).items()}
            if any(v <= 0 for v in a_map.values()):
                raise NonpositiveAError("edge coefficients must be > 0")
            vals = list(a_map.values()) + list(b_map.values())
            if not all(math.isfinite(v) for v in vals):
                raise ValueError("coefficients must be finite")
            object.__setattr__(self, "a_map", a_map)
            object.__setattr__(self, "b_map", b_map)

    @classmethod
    def constant(cls, a: float = 1.0, b: float = 0.0, dim: int = 1) -> "JacobiCoefficients":
        period = (1,) * dim
        return cls(dim=dim, period=period, a_cell=np.full((dim,) + period, a), b_cell=np.full(period, b))

    @classmethod
    def periodic(cls, a, b) -> "JacobiCoefficients":
        """One-dimensional periodic coefficients.

        ``a[r]`` is the weight of edge ``(n, n+1)`` and ``b[r]`` the weight of
        site ``n`` whenever ``n = r (mod p)``.  A shorter list is repeated when
        one of ``a``, ``b`` has length 1.
        """
        a = np.atleast_1d(np.asarray(a, dtype=float))
        b = np.atleast_1d(np.asarray(b, dtype=float))
        p = max(a.size, b.size)
        if a.size == 1:
            a = np.full(p, a[0])
        if b.size == 1:
            b = np.full(p, b[0])
        if a.size != p or b.size != p:
            raise ValueError("a and b must have the same period length")
        return cls(dim=1, period=(p,), a_cell=a.reshape(1, p), b_cell=b)

    @classmethod
    def explicit(cls, a_map, b_map, dim: int = 1) -> "JacobiCoefficients":
        return cls(dim=dim, a_map=a_map, b_map=b_map)

    @property
    def is_periodic(self) -> bool:
        return self.period is not None

    def site_values(self, box: LatticeBox) -> np.ndarray:
        if box.dim != self.dim:
            raise ValueError("box and coefficient dimensions differ")
        if self.is_periodic:
            idx = tuple(np.mod(box.coords[:, k], self.period[k]) for k in range(self.dim))
            return np.asarray(self.b_cell[idx], dtype=float)
        out = np.empty(box.size)
        for n, site in enumerate(box.sites()):
            try:
                out[n] = self.b_map[site]
            except KeyError:
                raise MissingEdgeError(f"no diagonal coefficient at site {site}") from None
        return out

    def edge_values(self, box: LatticeBox) -> np.ndarray:
        if box.dim != self.dim:
            raise ValueError("box and coefficient dimensions differ")
        i, j, axis = box.edges
        if self.is_periodic:
            c = box.coords[i]
            idx = (axis,) + tuple(np.mod(c[:, k], self.period[k]) for k in range(self.dim))
            return np.asarray(self.a_cell[idx], dtype=float)
        out = np.empty(i.size)
        for e, (s, t) in enumerate(zip(i, j)):
            key = _edge_key(box.site(s), box.site(t))
            try:
                out[e] = self.a_map[key]
            except KeyError:
                raise MissingEdgeError(f"no coefficient for edge {key}") from None
        return out

    def with_b(self, fn: Callable[[np.ndarray], np.ndarray]) -> "JacobiCoefficients":
        """Apply an elementwise map to the diagonal coefficients."""
        if self.is_periodic:
            return JacobiCoefficients(
                dim=self.dim, period=self.period, a_cell=self.a_cell, b_cell=fn(self.b_cell)
            )
        keys = list(self.b_map)
        vals = fn(np.array([self.b_map[k] for k in keys], dtype=float))
        return JacobiCoefficients(
            dim=self.dim, a_map=self.a_map, b_map=dict(zip(keys, map(float, vals)))
        )

    def to_dict(self) -> dict:
        if self.is_periodic:
            return {
                "period": list(self.period),
                "a": self.a_cell.tolist(),
                "b": self.b_cell.tolist(),
            }
        return {
            "a": [[list(s), list(t), v] for (s, t), v in self.a_map.items()],
            "b": [[list(s), v] for s, v in self.b_map.items()],
        }


@dataclass(frozen=True, eq=False)
class JacobiOperator:
    """A Jacobi operator laid out on a box.

    ``a`` is aligned with ``box.edges`` and ``b`` with the flat site order.
    ``coeffs`` keeps the generating coefficients (periodic data survives
    shifts and W-conjugation, which the ground-state solvers rely on).
    """

    box: LatticeBox
    a: np.ndarray
    b: np.ndarray
    coeffs: JacobiCoefficients | None = None
    tag: str = "free"
    meta: Mapping = field(default_factory=dict)

    def __post_init__(self):
        a = _frozen(self.a)
        b = _frozen(self.b)
        if a.shape != (self.box.n_edges,):
            raise LengthMismatchError(f"expected {self.box.n_edges} edge weights, got {a.shape}")
        if b.shape != (self.box.size,):
            raise LengthMismatchError(f"expected {self.box.size} site weights, got {b.shape}")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("coefficients must be finite")
        if np.any(a <= 0):
            raise NonpositiveAError("edge coefficients must be > 0")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def size(self) -> int:
        return self.box.size

    @property
    def dim(self) -> int:
        return self.box.dim

    @property
    def scale(self) -> float:
        """``sup a + sup |b|``, the natural magnitude for tolerances."""
        amax = float(self.a.max()) if self.a.size else 0.0
        return amax + float(np.abs(self.b).max())

    @property
    def is_tridiagonal(self) -> bool:
        return self.dim == 1

    def sparse(self) -> sp.csr_matrix:
        i, j, _ = self.box.edges
        n = self.size
        diag = np.arange(n)
        rows = np.concatenate([i, j, diag])
        cols = np.concatenate([j, i, diag])
        vals = np.concatenate([self.a, self.a, self.b])
        return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))

    def dense(self) -> np.ndarray:
        i, j, _ = self.box.edges
        m = np.zeros((self.size, self.size))
        m[i, j] = self.a
        m[j, i] = self.a
        m[np.arange(self.size), np.arange(self.size)] = self.b
        return m

    def gershgorin(self) -> tuple[float, float]:
        """Interval ``[min b - 2 nu sup a, max b + 2 nu sup a]``."""
        r = 2 * self.dim * (float(self.a.max()) if self.a.size else 0.0)
        return float(self.b.min()) - r, float(self.b.max()) + r

    def __matmul__(self, phi):
        return apply(self, phi)

    def replace(self, **changes) -> "JacobiOperator":
        kw = dict(box=self.box, a=self.a, b=self.b, coeffs=self.coeffs, tag=self.tag, meta=self.meta)
        kw.update(changes)
        return JacobiOperator(**kw)


def build_operator(coeffs: JacobiCoefficients, box: LatticeBox, tag: str | None = None) -> JacobiOperator:
    """Lay ``coeffs`` onto ``box``.

    Raises MissingEdgeError if an in-box edge (or site) has no coefficient.
    """
    if tag is None:
        tag = "periodic" if coeffs.is_periodic else "explicit"
        if coeffs.is_periodic and all(p == 1 for p in coeffs.period):
            tag = "free"
    return JacobiOperator(box, coeffs.edge_values(box), coeffs.site_values(box), coeffs, tag)


def free_operator(n: int, b: float = 0.0, a: float = 1.0, dim: int = 1, box: LatticeBox | None = None) -> JacobiOperator:
    box = box if box is not None else LatticeBox.centered(n, dim)
    return build_operator(JacobiCoefficients.constant(a, b, dim), box, tag="free")


def apply(J: JacobiOperator, phi) -> np.ndarray:
    """Matrix-free evaluation of ``J phi``."""
    phi = np.asarray(phi, dtype=float)
    if phi.shape != (J.size,):
        raise LengthMismatchError(f"vector of length {phi.shape} for operator of size {J.size}")
    i, j, _ = J.box.edges
    out = J.b * phi
    out += np.bincount(i, weights=J.a * phi[j], minlength=J.size)
    out += np.bincount(j, weights=J.a * phi[i], minlength=J.size)
    return out


def conjugate_W(J: JacobiOperator) -> JacobiOperator:
    """Return ``J(a, -b)``, so that ``W J W = -conjugate_W(J)`` with ``W = diag((-1)^{|n|})``."""
    coeffs = J.coeffs.with_b(np.negative) if J.coeffs is not None else None
    return J.replace(b=-J.b, coeffs=coeffs)


def shift(J: JacobiOperator, s: float) -> JacobiOperator:
    """Subtract ``s`` from every diagonal entry; the spectrum moves by ``-s``."""
    if s == 0:
        return J
    coeffs = J.coeffs.with_b(lambda b: b - s) if J.coeffs is not None else None
    return J.replace(b=J.b - s, coeffs=coeffs)


@dataclass(frozen=True, eq=False)
class Perturbation:
    """Finitely supported change ``(da, db)`` of Jacobi coefficients.

    ``da`` maps unordered nearest-neighbor pairs to real increments (any
    sign), ``db`` maps sites to real increments.  Integer keys are accepted
    for one-dimensional boxes.
    """

    db: Mapping = field(default_factory=dict)
    da: Mapping = field(default_factory=dict)
    dim: int = 1

    def __post_init__(self):
        db = {as_site(s, self.dim): float(v) for s, v in dict(self.db).items()}
        da = {}
        for (s, t), v in dict(self.da).items():
            s, t = as_site(s, self.dim), as_site(t, self.dim)
            if sum(abs(x - y) for x, y in zip(s, t)) != 1:
                raise ValueError(f"{s} and {t} are not nearest neighbors")
            da[_edge_key(s, t)] = float(v)
        if not all(math.isfinite(v) for v in list(db.values()) + list(da.values())):
            raise ValueError("perturbation values must be finite")
        object.__setattr__(self, "db", db)
        object.__setattr__(self, "da", da)

    @property
    def is_empty(self) -> bool:
        return not self.db and not self.da

    @property
    def support(self) -> set[Site]:
        out = set(self.db)
        for s, t in self.da:
            out.update((s, t))
        return out

    @property
    def bounding_box(self) -> tuple[tuple[int, int], ...] | None:
        sup = self.support
        if not sup:
            return None
        arr = np.array(sorted(sup))
        return tuple((int(arr[:, k].min()), int(arr[:, k].max())) for k in range(self.dim))

    @property
    def l1_norm(self) -> float:
        """``sum |da| + sum |db|`` (each unordered edge counted once)."""
        return float(sum(abs(v) for v in self.da.values()) + sum(abs(v) for v in self.db.values()))

    def scaled(self, t: float) -> "Perturbation":
        return Perturbation(
            db={s: t * v for s, v in self.db.items()},
            da={e: t * v for e, v in self.da.items()},
            dim=self.dim,
        )

    def conjugated(self) -> "Perturbation":
        """Image under W-conjugation: ``da`` unchanged, ``db`` negated."""
        return Perturbation(db={s: -v for s, v in self.db.items()}, da=dict(self.da), dim=self.dim)

    def translated(self, offset) -> "Perturbation":
        offset = as_site(offset, self.dim)

        def mv(s):
            return tuple(x + o for x, o in zip(s, offset))

        return Perturbation(
            db={mv(s): v for s, v in self.db.items()},
            da={(mv(s), mv(t)): v for (s, t), v in self.da.items()},
            dim=self.dim,
        )

    def to_dict(self) -> dict:
        return {
            "db": [[list(s), v] for s, v in sorted(self.db.items())],
            "da": [[list(s), list(t), v] for (s, t), v in sorted(self.da.items())],
        }


def site_array(values: Mapping[Site, float], box: LatticeBox) -> np.ndarray:
    """Lay a finite site map onto ``box`` (zero elsewhere)."""
    out = np.zeros(box.size)
    for s, v in values.items():
        out[box.index(s)] += v
    return out


def dominating_potential(delta: Perturbation) -> dict[Site, float]:
    """Site map ``w_l = |db_l| + sum_{|m-l|=1} |da_lm|``.

    Replacing ``delta`` by ``(0, w)`` can only raise the top eigenvalues,
    because ``[[0, a], [a, 0]] <= [[|a|, 0], [0, |a|]]`` and ``b <= |b|``.
    """
    w: dict[Site, float] = {}
    for s, v in delta.db.items():
        w[s] = w.get(s, 0.0) + abs(v)
    for (s, t), v in delta.da.items():
        w[s] = w.get(s, 0.0) + abs(v)
        w[t] = w.get(t, 0.0) + abs(v)
    return w


def check_support(J: JacobiOperator, delta: Perturbation, margin: int = 1) -> None:
    if delta.dim != J.dim:
        raise ValueError("perturbation and operator dimensions differ")
    if margin <= 0:
        for s in delta.support:
            if not J.box.contains(s):
                raise SupportError(f"perturbation site {s} is outside the box")
        return
    layer = J.box.layer_mask(margin)
    for s in delta.support:
        if not J.box.contains(s) or layer[J.box.index(s)]:
            raise SupportError(f"perturbation site {s} is not {margin} site(s) inside the box")


def apply_perturbation(J: JacobiOperator, delta: Perturbation, margin: int = 1) -> JacobiOperator:
    """Coefficientwise sum ``J + delta``; untouched entries are bit-identical."""
    if delta.is_empty:
        return J
    check_support(J, delta, margin)
    a = np.array(J.a)
    b = np.array(J.b)
    for s, v in delta.db.items():
        b[J.box.index(s)] += v
    for (s, t), v in delta.da.items():
        e = J.box.edge_index(s, t)
        a[e] += v
        if not a[e] > 0:
            raise NonpositiveAError(f"a + da = {a[e]} <= 0 on edge {(s, t)}")
    return JacobiOperator(J.box, a, b, None, "perturbed", dict(J.meta))


def mesh_points(interval: tuple[float, float], h: float) -> np.ndarray:
    """Interior nodes ``x_lo + n h``, ``n = 1 .. M - 1`` of a uniform mesh."""
    x_lo, x_hi = map(float, interval)
    if not h > 0 or not x_hi > x_lo:
        raise BadMeshError(f"bad mesh h={h} on [{x_lo}, {x_hi}]")
    m = (x_hi - x_lo) / h
    M = int(round(m))
    if abs(m - M) > 1e-9 * max(1.0, m) or M < 3:
        raise BadMeshError(f"interval length {x_hi - x_lo} is not a multiple of h={h}")
    return x_lo + h * np.arange(1, M)


def _sample(fn, x: np.ndarray) -> np.ndarray:
    try:
        out = np.asarray(fn(x), dtype=float)
        return np.broadcast_to(out, x.shape).copy()
    except (TypeError, ValueError):
        return np.array([float(fn(t)) for t in x])


def discretize_schrodinger(V0, V, h: float, interval) -> tuple[JacobiOperator, Perturbation]:
    """Central-difference discretization of ``-d^2/dx^2 + V0`` and ``V``.

    Returns ``(J0, delta)`` with ``J0 = -(H0)_h`` (``a = 1/h^2``,
    ``b_n = -2/h^2 - V0(x_n)``) and ``delta.db_n = -V(x_n) >= 0``, so that
    eigenvalues of ``J0 + delta`` above 0 are minus the negative eigenvalues
    of the discretized ``H0 + V``.  Site ``n`` sits at ``x0 + n h`` where
    ``x0 = 0`` whenever ``x_lo`` is a multiple of ``h`` (``meta["x0"]``).
    """
    x = mesh_points(interval, h)
    x_lo = float(interval[0])
    q = x_lo / h
    n_lo = int(round(q)) if abs(q - round(q)) < 1e-9 * max(1.0, abs(q)) else 0
    x0 = x_lo - n_lo * h if n_lo else x_lo
    box = LatticeBox.interval(n_lo + 1, n_lo + x.size)
    inv = 1.0 / (h * h)
    period = getattr(V0, "period", None)
    p = 1 if getattr(V0, "is_constant", False) else None
    if p is None and period is not None:
        p = period / h
        p = int(round(p)) if abs(p - round(p)) < 1e-9 * max(1.0, p) and round(p) >= 1 else None
    if p is not None:
        cell = x0 + h * np.arange(p)
        coeffs = JacobiCoefficients.periodic([inv], -2.0 * inv - _sample(V0, cell))
        J0 = build_operator(coeffs, box, tag="discretized")
    else:
        b = -2.0 * inv - _sample(V0, x)
        J0 = JacobiOperator(box, np.full(box.n_edges, inv), b, None, "discretized")
    J0 = J0.replace(meta={"orientation": "minus-H", "h": float(h), "x0": float(x0)})
    v = _sample(V, x)
    if np.any(v > 0):
        n = int(np.argmax(v > 0))
        raise PositiveVError(f"V(x) = {v[n]} > 0 at x = {x[n]}")
    db = {(n_lo + 1 + int(n),): float(-v[n]) for n in np.flatnonzero(v)}
    return J0, Perturbation(db=db)
