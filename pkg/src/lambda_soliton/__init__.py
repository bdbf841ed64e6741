"""Soliton-based storage and manipulation of light in a three-level medium.

Exact first- to third-order solutions of the integrable Maxwell-Bloch system
(equal couplings, two-photon resonance, zero detuning) built by algebraic
dressing and nonlinear superposition, ground-state imprint diagnostics with
closed-form location/phase predictions, and an independent finite-difference
integrator that cross-checks everything.
"""

from .algebra import SystemParams, Tolerances, TOL
from .darboux import (
    Regime,
    SolitonKind,
    SolitonSpec,
    SolutionState,
    asymptotic_involution,
    involution_first,
    phi_vector,
    state_first,
)
from .mbsolver import BoundaryData, Grid, MBIntegration, integrate, residual_norms
from .observables import (
    ImprintReport,
    PredictedImprint,
    PulseAreaRecord,
    delta_lag,
    locate_imprints,
    predict_location,
    pulse_area,
    total_area,
)
from .superposition import (
    OrderedSolution,
    state_second,
    state_third,
    superpose_involutions,
    superpose_third,
)

__version__ = "0.1.0"

__all__ = [
    "BoundaryData",
    "Grid",
    "ImprintReport",
    "MBIntegration",
    "OrderedSolution",
    "PredictedImprint",
    "PulseAreaRecord",
    "Regime",
    "SolitonKind",
    "SolitonSpec",
    "SolutionState",
    "SystemParams",
    "TOL",
    "Tolerances",
    "asymptotic_involution",
    "delta_lag",
    "integrate",
    "involution_first",
    "locate_imprints",
    "phi_vector",
    "predict_location",
    "pulse_area",
    "residual_norms",
    "state_first",
    "state_second",
    "state_third",
    "superpose_involutions",
    "superpose_third",
    "total_area",
]
