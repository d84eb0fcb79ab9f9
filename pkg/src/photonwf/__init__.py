"""Photon wave function toolkit: the Maxwell equations as a Dirac-like equation for psi = (E, iB)/sqrt(2)."""

from .algebra import MatrixSet, build_matrix_set, dirac_symbol, hamiltonian_symbol, omega_symbol
from .fieldgrid import FieldGrid, GridSpec, Observables, evolve_curl_reference, evolve_spectral, observables
from .io import RunConfig, load_amplitudes, load_config, save_amplitudes
from .modes import AmplitudeSet, ModeKey, PotentialAmplitudes, amplitudes_from_potential, project_amplitudes, synthesize_field
from .polarization import DomainError, eps, polarization_triad
from .symmetry import BoostParams, boost, dual, gauge_phase, parity, pseudo_lagrangian_check, time_reversal
from .zb import MomentumSeries, momentum_series, zb_extract

__all__ = [
    "AmplitudeSet",
    "BoostParams",
    "DomainError",
    "FieldGrid",
    "GridSpec",
    "MatrixSet",
    "ModeKey",
    "MomentumSeries",
    "Observables",
    "PotentialAmplitudes",
    "RunConfig",
    "amplitudes_from_potential",
    "boost",
    "build_matrix_set",
    "dirac_symbol",
    "dual",
    "eps",
    "evolve_curl_reference",
    "evolve_spectral",
    "gauge_phase",
    "hamiltonian_symbol",
    "load_amplitudes",
    "load_config",
    "momentum_series",
    "observables",
    "omega_symbol",
    "parity",
    "polarization_triad",
    "project_amplitudes",
    "pseudo_lagrangian_check",
    "save_amplitudes",
    "synthesize_field",
    "time_reversal",
    "zb_extract",
]
