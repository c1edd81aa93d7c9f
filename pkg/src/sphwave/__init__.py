"""Partial-wave scattering of a plane wave by a spherical step potential."""
from .errors import (ConfigError, DegenerateWavenumberError, DomainError, LmaxCapWarning,
                     QuadratureWarning, SingularSystemError, SpecialFunctionOverflow,
                     SphwaveError, StepTooLargeError, UnitarityWarning)
from .estimator import SphericalStepScatterer
from .field import (FieldPoint, Observables, ResidualReport, far_field_amplitude,
                    greens_partial_wave, observables, psi_incident, psi_total,
                    residual_homogeneous, residual_inhomogeneous)
from .model import BeamSpec, StepPotential, WaveNumbers, derive_wavenumbers
from .oracle import RadialSolution, numerov_radial, phase_shift_oracle
from .solver import (ModeCoefficients, ModeSystem, assemble_mode_system, choose_lmax,
                     solve, solve_boundary_matching, solve_homogeneous, solve_inhomogeneous)

__version__ = "0.1.0"

__all__ = [
    "BeamSpec", "ConfigError", "DegenerateWavenumberError", "DomainError", "FieldPoint",
    "LmaxCapWarning", "ModeCoefficients", "ModeSystem", "Observables", "QuadratureWarning",
    "RadialSolution", "ResidualReport", "SingularSystemError", "SpecialFunctionOverflow",
    "SphericalStepScatterer", "SphwaveError", "StepPotential", "StepTooLargeError",
    "UnitarityWarning", "WaveNumbers", "assemble_mode_system", "choose_lmax",
    "derive_wavenumbers", "far_field_amplitude", "greens_partial_wave", "numerov_radial",
    "observables", "phase_shift_oracle", "psi_incident", "psi_total", "residual_homogeneous",
    "residual_inhomogeneous", "solve", "solve_boundary_matching", "solve_homogeneous",
    "solve_inhomogeneous",
]
