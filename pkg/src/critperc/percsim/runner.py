"""Monte Carlo driver: run configuration, per-trial random streams, aggregation."""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from . import kernels, lattice

MASK64 = (1 << 64) - 1


class Geometry(str, enum.Enum):
    RECTANGLE = "rectangle"
    TRIANGLE = "triangle"
    SCHRAMM = "schramm"


OBSERVABLES = {
    Geometry.RECTANGLE: ("P_h", "P_hv", "N_h"),
    Geometry.TRIANGLE: ("P_h", "P_hv", "N_h"),
    Geometry.SCHRAMM: ("P_surr",),
}


@dataclass(frozen=True)
class LatticeRun:
    geometry: Geometry
    L: int
    trials: int
    seed: int
    r: float = 1.0
    t: float = 0.5
    p: float = 0.5
    square_bond: bool = False

    def __post_init__(self):
        object.__setattr__(self, "geometry", Geometry(self.geometry))
        if not 0.0 < self.p < 1.0:
            raise ValueError("occupation probability must lie in (0, 1)")
        if self.L < 8:
            raise ValueError("L must be at least 8")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if self.geometry is Geometry.RECTANGLE:
            if not self.r > 0:
                raise ValueError("aspect ratio must be positive")
        elif not 0.0 < self.t < 1.0:
            raise ValueError("t must lie in (0, 1)")
        if self.square_bond and self.geometry is not Geometry.RECTANGLE:
            raise ValueError("square-lattice bonds are only wired up for the rectangle")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["geometry"] = self.geometry.value
        return d


@dataclass(frozen=True)
class CrossingEstimate:
    observable: str
    mean: float
    stderr: float
    trials: int

    @staticmethod
    def from_samples(name: str, samples: np.ndarray) -> "CrossingEstimate":
        n = len(samples)
        x = samples.astype(np.int64)
        s1 = int(x.sum())
        s2 = int((x * x).sum())
        mean = s1 / n
        var = (s2 - s1 * s1 / n) / (n - 1) if n > 1 else 0.0
        return CrossingEstimate(name, mean, math.sqrt(max(var, 0.0) / n), n)


@dataclass(frozen=True, eq=False)
class _Prepared:
    layout: lattice.Layout
    seg_sites: np.ndarray
    seg_bits: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    all_open: np.ndarray


def _csr(n, edges):
    both = np.concatenate([edges, edges[:, ::-1]])
    order = np.lexsort((both[:, 1], both[:, 0]))
    both = both[order]
    indptr = np.zeros(n + 1, np.int64)
    np.add.at(indptr, both[:, 0] + 1, 1)
    return np.cumsum(indptr), both[:, 1].astype(np.int64)


def make_layout(cfg: LatticeRun) -> lattice.Layout:
    if cfg.geometry is Geometry.RECTANGLE:
        if cfg.square_bond:
            return lattice.square_bond_rectangle(cfg.L, cfg.r)
        return lattice.rectangle(cfg.L, cfg.r)
    if cfg.geometry is Geometry.TRIANGLE:
        return lattice.equilateral(cfg.L, cfg.t)
    return lattice.isosceles(cfg.L, cfg.t)


@lru_cache(maxsize=8)
def _prepare(cfg: LatticeRun) -> _Prepared:
    lay = make_layout(cfg)
    sites = np.concatenate([np.asarray(s, np.int64) for s in lay.segments])
    bits = np.concatenate([np.full(len(s), b, np.int64) for b, s in enumerate(lay.segments)])
    indptr, indices = _csr(lay.n_sites, lay.edges)
    n_rand = lay.n_edges if lay.bond else lay.n_sites
    return _Prepared(lay, sites, bits, indptr, indices, np.ones(n_rand, np.bool_))


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent counter-based stream for one trial."""
    key = ((int(seed) & MASK64) << 64) | (int(trial) & MASK64)
    return np.random.Generator(np.random.Philox(key=key))


def sample(cfg: LatticeRun, trial: int) -> tuple[np.ndarray, np.ndarray]:
    """(site_open, edge_open) for one trial, with glued and wired sites fixed."""
    prep = _prepare(cfg)
    lay = prep.layout
    if lay.bond:
        edge_open = trial_rng(cfg.seed, trial).random(lay.n_edges) < cfg.p
        return np.ones(lay.n_sites, np.bool_), edge_open
    site_open = trial_rng(cfg.seed, trial).random(lay.n_sites) < cfg.p
    if len(lay.glue):
        site_open[lay.glue[:, 0]] = site_open[lay.glue[:, 1]]
    if cfg.geometry is Geometry.SCHRAMM:
        site_open[lay.segments[0]] = True
    return site_open, np.ones(lay.n_edges, np.bool_)


def evaluate(cfg: LatticeRun, site_open: np.ndarray, edge_open: np.ndarray | None = None) -> tuple:
    """Observables of one configuration, in the order of OBSERVABLES[cfg.geometry]."""
    prep = _prepare(cfg)
    lay = prep.layout
    if edge_open is None:
        edge_open = np.ones(lay.n_edges, np.bool_)
    roots = kernels.label(site_open, lay.edges, edge_open)
    if cfg.geometry is Geometry.SCHRAMM:
        hit = kernels.surrounded(
            roots, prep.indptr, prep.indices, lay.segments[0], lay.segments[1], lay.apex
        )
        return (int(hit),)
    ph, phv, nh = kernels.four_arc(roots, prep.seg_sites, prep.seg_bits)
    return int(ph), int(phv), int(nh)


def run_block(cfg: LatticeRun, start: int, stop: int) -> np.ndarray:
    """Outcomes of trials start..stop-1 as an int32 array (trials x observables)."""
    out = np.empty((stop - start, len(OBSERVABLES[cfg.geometry])), np.int32)
    for k, trial in enumerate(range(start, stop)):
        site_open, edge_open = sample(cfg, trial)
        out[k] = evaluate(cfg, site_open, edge_open)
    return out


def _blocks(trials, workers):
    n = max(1, min(trials, workers * 8))
    edges = np.linspace(0, trials, n + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def run_outcomes(cfg: LatticeRun, workers: int = 1) -> np.ndarray:
    """Per-trial outcomes in trial order; identical for any worker count."""
    if workers <= 1:
        return run_block(cfg, 0, cfg.trials)
    blocks = _blocks(cfg.trials, workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(run_block, [cfg] * len(blocks), *zip(*blocks)))
    return np.concatenate(parts)


def run(cfg: LatticeRun, workers: int | None = None) -> dict[str, CrossingEstimate]:
    """Estimate every observable of the geometry; stderr is sample std / sqrt(trials)."""
    if workers is None:
        workers = os.cpu_count() or 1
    outcomes = run_outcomes(cfg, workers)
    names = OBSERVABLES[cfg.geometry]
    return {name: CrossingEstimate.from_samples(name, outcomes[:, k]) for k, name in enumerate(names)}
