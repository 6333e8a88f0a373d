"""Site layouts for the simulated domains.

Triangular lattice sites live on a sheared grid (i, j) with physical
position (i + j/2, j*sqrt(3)/2); the six neighbours are the offsets
(+-1, 0), (0, +-1), (1, -1), (-1, 1).  Every layout is flattened into a
site list plus an edge list, so one union-find kernel serves all shapes,
including glued edges and square-lattice bonds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

SQRT3 = math.sqrt(3.0)
TRI_OFFSETS = ((1, 0), (0, 1), (-1, 1))  # half of the six; the rest are reverses
SQUARE_OFFSETS = ((1, 0), (0, 1))

# Segment bits.  For the four-arc observables the crossing pair is SEG_H1/SEG_H2.
SEG_H1 = 0  # rectangle left side, triangle Bw
SEG_O1 = 1  # rectangle bottom, triangle wC
SEG_H2 = 2  # rectangle right side, triangle CA
SEG_O2 = 3  # rectangle top, triangle AB


@dataclass(frozen=True, eq=False)
class Layout:
    """A finite domain: sites, undirected edges and boundary segment membership."""

    kind: str
    coords: np.ndarray  # (n, 2) int lattice coordinates
    edges: np.ndarray  # (m, 2) int32 site indices
    segments: tuple[np.ndarray, ...]  # site indices per segment bit
    bond: bool = False  # randomness lives on the edges instead of the sites
    glue: np.ndarray = field(default_factory=lambda: np.zeros((0, 2), np.int32))  # (alias, original)
    apex: int = -1  # distinguished site for the surrounding event

    @property
    def n_sites(self) -> int:
        return len(self.coords)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def physical(self) -> np.ndarray:
        if self.bond:
            return self.coords.astype(float)
        i, j = self.coords[:, 0], self.coords[:, 1]
        return np.column_stack([i + 0.5 * j, SQRT3 / 2 * j])


def _index(coords) -> dict:
    return {(int(i), int(j)): k for k, (i, j) in enumerate(coords)}


def _edges(coords, offsets) -> np.ndarray:
    idx = _index(coords)
    out = []
    for k, (i, j) in enumerate(coords):
        for di, dj in offsets:
            other = idx.get((int(i) + di, int(j) + dj))
            if other is not None:
                out.append((k, other))
    return np.asarray(out, dtype=np.int32).reshape(-1, 2)


@lru_cache(maxsize=16)
def rectangle(L: int, r: float) -> Layout:
    """L rows of sites; physical width r times the physical height."""
    height = (L - 1) * SQRT3 / 2
    width = r * height
    coords, left, right = [], [], []
    for j in range(L):
        lo = math.ceil(-j / 2 - 1e-9)
        hi = math.floor(width - j / 2 + 1e-9)
        if hi < lo:
            raise ValueError("rectangle too narrow for the lattice")
        left.append(len(coords))
        coords.extend((i, j) for i in range(lo, hi + 1))
        right.append(len(coords) - 1)
    coords = np.asarray(coords, dtype=np.int64)
    bottom = np.flatnonzero(coords[:, 1] == 0)
    top = np.flatnonzero(coords[:, 1] == L - 1)
    segs = (np.asarray(left), bottom, np.asarray(right), top)
    return Layout("rectangle", coords, _edges(coords, TRI_OFFSETS), segs)


@lru_cache(maxsize=16)
def square_bond_rectangle(L: int, r: float) -> Layout:
    """Square-lattice bond percolation on an L-row rectangle of width r*(L-1)."""
    nx = int(round(r * (L - 1))) + 1
    coords = np.asarray([(i, j) for j in range(L) for i in range(nx)], dtype=np.int64)
    segs = (
        np.flatnonzero(coords[:, 0] == 0),
        np.flatnonzero(coords[:, 1] == 0),
        np.flatnonzero(coords[:, 0] == nx - 1),
        np.flatnonzero(coords[:, 1] == L - 1),
    )
    return Layout("square_bond_rectangle", coords, _edges(coords, SQUARE_OFFSETS), segs, bond=True)


@lru_cache(maxsize=16)
def equilateral(L: int, t: float) -> Layout:
    """Triangle i, j >= 0, i + j <= L - 1 with B = (0, 0), C = (L-1, 0), A = (0, L-1).

    BC is the bottom row; w sits at fraction t along it.
    """
    coords = np.asarray([(i, j) for j in range(L) for i in range(L - j)], dtype=np.int64)
    i, j = coords[:, 0], coords[:, 1]
    split = t * (L - 1)
    base = j == 0
    segs = (
        np.flatnonzero(base & (i <= split + 1e-9)),  # Bw
        np.flatnonzero(base & (i > split + 1e-9)),  # wC
        np.flatnonzero(i + j == L - 1),  # CA
        np.flatnonzero(i == 0),  # AB
    )
    return Layout("equilateral", coords, _edges(coords, TRI_OFFSETS), segs)


def schramm_size(L: int) -> int:
    return max(2, (L - 1) // 6)


@lru_cache(maxsize=16)
def isosceles(L: int, t: float) -> Layout:
    """Isosceles triangle with base B'C' of 6m + 1 sites and apex A' = (2m, 2m).

    Base angles are 30 degrees, so the apex angle is 120 degrees.  The
    edges A'B' (sites (k, k)) and A'C' (sites (6m - 2k, k)) are glued by
    the reflection in the axis of symmetry.
    """
    m = schramm_size(L)
    n = 6 * m
    coords = np.asarray(
        [(i, j) for j in range(2 * m + 1) for i in range(j, n - 2 * j + 1)], dtype=np.int64
    )
    idx = _index(coords)
    i, j = coords[:, 0], coords[:, 1]
    base = j == 0
    split = t * n
    segs = (
        np.flatnonzero(base & (i <= split + 1e-9)),  # B'w, wired
        np.flatnonzero(base & (i > split + 1e-9)),  # wC', free
    )
    glue = np.asarray([(idx[(n - 2 * k, k)], idx[(k, k)]) for k in range(1, 2 * m)], dtype=np.int32)
    edges = np.concatenate([_edges(coords, TRI_OFFSETS), glue.reshape(-1, 2)])
    return Layout("isosceles", coords, edges, segs, glue=glue.reshape(-1, 2), apex=idx[(2 * m, 2 * m)])
