"""Triangular-lattice site percolation at criticality."""

from .runner import (
    OBSERVABLES,
    CrossingEstimate,
    Geometry,
    LatticeRun,
    evaluate,
    run,
    run_outcomes,
    sample,
    trial_rng,
)

__all__ = [
    "OBSERVABLES",
    "CrossingEstimate",
    "Geometry",
    "LatticeRun",
    "evaluate",
    "run",
    "run_outcomes",
    "sample",
    "trial_rng",
]
