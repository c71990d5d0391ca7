"""Bound states of the lattice two-boson fiber Hamiltonian.

The determinant route (torus quadrature + Fredholm determinants) and the
truncated-lattice oracle are independent; :mod:`boundstate_atlas.verification`
cross-checks them.
"""

from ._accel import USE_NUMBA
from .determinant import (
    ZeroReport,
    count_bound_states,
    det2,
    det5,
    det7,
    det2_zeros,
    det7_zeros,
    inertia_counts,
)
from .lattice import CouplingParams, EssentialBand, LatticeVector, Quasimomentum, TorusPoint, essential_band
from .oracle import BoxSpec, OracleReport, oracle_report
from .phase import PhaseCurve, RegionLabel, Side, classify, predicted_counts
from .quadrature import EdgeConstants, GridSpec, edge_constants, gram2, gram7

__version__ = "0.1.0"

__all__ = [
    "USE_NUMBA", "ZeroReport", "count_bound_states", "det2", "det5", "det7", "det2_zeros",
    "det7_zeros", "inertia_counts", "CouplingParams", "EssentialBand", "LatticeVector",
    "Quasimomentum", "TorusPoint", "essential_band", "BoxSpec", "OracleReport", "oracle_report",
    "PhaseCurve", "RegionLabel", "Side", "classify", "predicted_counts", "EdgeConstants",
    "GridSpec", "edge_constants", "gram2", "gram7",
]
