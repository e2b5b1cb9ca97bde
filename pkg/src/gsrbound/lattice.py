"""Finite boxes of Z^nu with a fixed flat (row-major) site ordering."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

Site = tuple[int, ...]


def as_site(site, dim: int) -> Site:
    """Normalize an int or sequence into a coordinate tuple of length ``dim``."""
    if isinstance(site, (int, np.integer)):
        site = (int(site),)
    site = tuple(int(c) for c in site)
    if len(site) != dim:
        raise ValueError(f"site {site} does not have dimension {dim}")
    return site


@dataclass(frozen=True)
class LatticeBox:
    """A rectangular box ``[lo_1, hi_1] x ... x [lo_nu, hi_nu]`` (inclusive).

    Sites are enumerated row-major over the coordinate tuple; edges are the
    pairs ``(k, k + e_j)`` with both ends inside the box, so truncation is
    Dirichlet: a boundary site simply has fewer neighbors.
    """

    ranges: tuple[tuple[int, int], ...]
    _shape: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ranges = tuple((int(lo), int(hi)) for lo, hi in self.ranges)
        if len(ranges) not in (1, 2):
            raise ValueError("only dimensions 1 and 2 are supported")
        for lo, hi in ranges:
            if hi < lo:
                raise ValueError(f"empty range [{lo}, {hi}]")
        object.__setattr__(self, "ranges", ranges)
        object.__setattr__(self, "_shape", tuple(hi - lo + 1 for lo, hi in ranges))

    @classmethod
    def interval(cls, lo: int, hi: int) -> "LatticeBox":
        return cls(((lo, hi),))

    @classmethod
    def centered(cls, n: int, dim: int = 1) -> "LatticeBox":
        """Box with ``n`` sites per axis, coordinates ``-(n//2) .. n - n//2 - 1``."""
        lo = -(n // 2)
        return cls(tuple((lo, lo + n - 1) for _ in range(dim)))

    @property
    def dim(self) -> int:
        return len(self.ranges)

    @property
    def shape(self) -> tuple[int, ...]:
        return self._shape

    @property
    def size(self) -> int:
        return int(np.prod(self._shape))

    def __len__(self) -> int:
        return self.size

    def contains(self, site: Site) -> bool:
        return all(lo <= c <= hi for c, (lo, hi) in zip(site, self.ranges))

    def index(self, site) -> int:
        site = as_site(site, self.dim)
        if not self.contains(site):
            raise KeyError(f"site {site} outside box {self.ranges}")
        offs = tuple(c - lo for c, (lo, _) in zip(site, self.ranges))
        return int(np.ravel_multi_index(offs, self._shape))

    def site(self, index: int) -> Site:
        offs = np.unravel_index(int(index), self._shape)
        return tuple(int(o) + lo for o, (lo, _) in zip(offs, self.ranges))

    def sites(self) -> Iterator[Site]:
        for i in range(self.size):
            yield self.site(i)

    @cached_property
    def coords(self) -> np.ndarray:
        """Integer array of shape ``(N, dim)`` holding every site coordinate."""
        axes = [np.arange(lo, hi + 1) for lo, hi in self.ranges]
        grid = np.meshgrid(*axes, indexing="ij")
        out = np.stack([g.ravel() for g in grid], axis=1)
        out.setflags(write=False)
        return out

    @cached_property
    def edges(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(i, j, axis)`` arrays of flat indices with ``j = i + e_axis``.

        Ordered by axis, then by ``i``; for dim 1 this is ``(0,1), (1,2), ...``
        so the edge weights double as the off-diagonal of the tridiagonal form.
        """
        idx = np.arange(self.size).reshape(self._shape)
        ii, jj, ax = [], [], []
        for axis in range(self.dim):
            lo = [slice(None)] * self.dim
            hi = [slice(None)] * self.dim
            lo[axis] = slice(0, -1)
            hi[axis] = slice(1, None)
            a = idx[tuple(lo)].ravel()
            b = idx[tuple(hi)].ravel()
            ii.append(a)
            jj.append(b)
            ax.append(np.full(a.size, axis))
        out = tuple(np.concatenate(x).astype(np.int64) for x in (ii, jj, ax))
        for x in out:
            x.setflags(write=False)
        return out

    @property
    def n_edges(self) -> int:
        return int(self.edges[0].size)

    def edge_index(self, s, t) -> int:
        """Flat edge index of the unordered nearest-neighbor pair ``{s, t}``."""
        s = as_site(s, self.dim)
        t = as_site(t, self.dim)
        diff = [y - x for x, y in zip(s, t)]
        if sorted(abs(d) for d in diff) != [0] * (self.dim - 1) + [1]:
            raise KeyError(f"{s} and {t} are not nearest neighbors")
        if sum(diff) < 0:
            s, t = t, s
        i, j = self.index(s), self.index(t)
        lookup = self._edge_lookup
        return lookup[(i, j)]

    @cached_property
    def _edge_lookup(self) -> dict:
        i, j, _ = self.edges
        return {(int(a), int(b)): k for k, (a, b) in enumerate(zip(i, j))}

    def neighbors(self, site) -> list[Site]:
        site = as_site(site, self.dim)
        out = []
        for axis in range(self.dim):
            for step in (-1, 1):
                nb = list(site)
                nb[axis] += step
                nb = tuple(nb)
                if self.contains(nb):
                    out.append(nb)
        return out

    @cached_property
    def degree(self) -> np.ndarray:
        i, j, _ = self.edges
        deg = np.bincount(i, minlength=self.size) + np.bincount(j, minlength=self.size)
        deg.setflags(write=False)
        return deg

    @cached_property
    def boundary_mask(self) -> np.ndarray:
        """Sites with at least one neighbor missing (the outermost layer)."""
        mask = self.degree < 2 * self.dim
        mask.setflags(write=False)
        return mask

    def layer_mask(self, depth: int) -> np.ndarray:
        """Sites within graph distance ``depth - 1`` of the outermost layer."""
        c = self.coords
        mask = np.zeros(self.size, dtype=bool)
        for axis, (lo, hi) in enumerate(self.ranges):
            mask |= (c[:, axis] - lo < depth) | (hi - c[:, axis] < depth)
        return mask

    @cached_property
    def core_mask(self) -> np.ndarray:
        """Central half of the box along every axis."""
        c = self.coords
        mask = np.ones(self.size, dtype=bool)
        for axis, (lo, hi) in enumerate(self.ranges):
            q = (hi - lo + 1) // 4
            mask &= (c[:, axis] >= lo + q) & (c[:, axis] <= hi - q)
        mask.setflags(write=False)
        return mask

    @cached_property
    def parity(self) -> np.ndarray:
        """``(-1)^{|n|}`` for every site, as float."""
        p = np.where(np.abs(self.coords).sum(axis=1) % 2 == 0, 1.0, -1.0)
        p.setflags(write=False)
        return p

    def sub_box_mask(self, ranges: Sequence[tuple[int, int]]) -> np.ndarray:
        c = self.coords
        mask = np.ones(self.size, dtype=bool)
        for axis, (lo, hi) in enumerate(ranges):
            mask &= (c[:, axis] >= lo) & (c[:, axis] <= hi)
        return mask
