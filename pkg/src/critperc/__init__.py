"""Crossing probabilities of two-dimensional critical percolation.

Closed forms (hypergeometric and elliptic), the conformal maps between
them, exact P-symbol bookkeeping and a Monte Carlo cross-check.
"""

from .crossing import N_h, P_h, P_hbar_v, P_hv, P_surr, aspect_ratio_to_z, z_to_aspect_ratio
from .errors import ConvergenceError, CritPercError, DomainError, PoleError, PreconditionError

__version__ = "0.1.0"

__all__ = [
    "N_h",
    "P_h",
    "P_hbar_v",
    "P_hv",
    "P_surr",
    "aspect_ratio_to_z",
    "z_to_aspect_ratio",
    "ConvergenceError",
    "CritPercError",
    "DomainError",
    "PoleError",
    "PreconditionError",
]
