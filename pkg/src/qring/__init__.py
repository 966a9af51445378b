"""Exact bound states of a 2D annular quantum ring with Rashba coupling.

Spectral solver for an electron confined to a finite-depth annular ring
in a perpendicular magnetic field, with Rashba spin-orbit and Zeeman
terms.  Energies are located as zeros of an 8x8 boundary-matching
determinant built from confluent hypergeometric radial solutions; a
finite-difference Hamiltonian provides an independent cross-check.
"""

from .matching import (
    BoundState,
    ImaginaryDetError,
    MatchingError,
    MaxIterationsError,
    RankDeficiencyAmbiguousError,
    SolveError,
    levels,
    refine_root,
    sample_wavefunction,
    scan_levels,
    solve_state,
)
from .model import (
    DEFAULT_PARAMS,
    PhysicalConfig,
    RingParams,
    energy_to_physical,
    energy_unit_mev,
    load_config,
    to_dimensionless,
    to_physical,
)
from .oracle import FdGrid, fd_spectrum, suggest_window

__all__ = [
    "BoundState",
    "DEFAULT_PARAMS",
    "FdGrid",
    "ImaginaryDetError",
    "MatchingError",
    "MaxIterationsError",
    "PhysicalConfig",
    "RankDeficiencyAmbiguousError",
    "RingParams",
    "SolveError",
    "energy_to_physical",
    "energy_unit_mev",
    "fd_spectrum",
    "levels",
    "load_config",
    "refine_root",
    "sample_wavefunction",
    "scan_levels",
    "solve_state",
    "suggest_window",
    "to_dimensionless",
    "to_physical",
]

__version__ = "0.1.0"
