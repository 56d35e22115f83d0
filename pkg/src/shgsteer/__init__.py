"""Spectral EPR/steering analysis of intracavity second harmonic generation.

The package is organized as a pipeline:

  model      — system parameters, critical pump, classical steady state
  linear     — linearized fluctuations, stability, spectral matrices,
               output quadrature spectra
  steering   — inferred variances, directed steering products,
               classification and parameter-plane maps
  stochastic — full nonlinear phase-space simulation used as an
               independent numerical oracle
  validation — the agreement chain between the analytic and stochastic
               routes
  cli        — command-line front end (`shgsteer`)
"""

from .errors import (
    ConsistencyError,
    DivergenceError,
    NumericalError,
    ParameterError,
    RegimeError,
    ShgSteerError,
    SolverError,
)
from .model import (
    SteadyState,
    SystemParams,
    critical_pump,
    solve_steady_state,
    steady_state_residual,
)
from .linear import (
    FluctuationSystem,
    OutputSpectra,
    SpectralMatrix,
    build_fluctuation_system,
    intracavity_spectrum,
    intracavity_spectra,
    lyapunov_covariance,
    output_quadrature_spectra,
    spectral_integral,
    stability_eigenvalues,
)
from .steering import (
    AsymmetryCell,
    Classification,
    SteeringPoint,
    SteeringScan,
    asymmetry_map,
    classify,
    epr_products,
    frequency_scan,
    inferred_variances,
)
from .stochastic import (
    EnsembleStats,
    IntegrationConfig,
    SpectrumEstimate,
    integrate_ensemble,
    stochastic_spectrum,
)
from .validation import ValidationReport, run_validation

__all__ = [
    "AsymmetryCell", "Classification", "ConsistencyError", "DivergenceError",
    "EnsembleStats", "FluctuationSystem", "IntegrationConfig", "NumericalError",
    "OutputSpectra", "ParameterError", "RegimeError", "ShgSteerError",
    "SolverError", "SpectralMatrix", "SpectrumEstimate", "SteadyState",
    "SteeringPoint", "SteeringScan", "SystemParams", "ValidationReport",
    "asymmetry_map", "build_fluctuation_system", "classify", "critical_pump",
    "epr_products", "frequency_scan", "inferred_variances",
    "integrate_ensemble", "intracavity_spectra", "intracavity_spectrum",
    "lyapunov_covariance", "output_quadrature_spectra", "run_validation",
    "solve_steady_state", "spectral_integral", "stability_eigenvalues",
    "steady_state_residual", "stochastic_spectrum",
]

__version__ = "0.1.0"
