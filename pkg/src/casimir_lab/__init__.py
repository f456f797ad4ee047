"""Thermal Casimir force between real metals.

Plate-plate pressure and sphere-plate force at nonzero temperature for
ideal, plasma-model and dielectric surfaces: numerical Lifshitz sums,
closed-form corrections in the penetration depth, asymptotic limits and
roughness averaging.
"""
from .asymptotics import k_factor, regime_recommendation, total_force
from .dielectric import permittivity, reflection_sq, scattering_s11, zero_frequency_report
from .errors import (
    CasimirError,
    ConfigurationError,
    ConvergenceError,
    DomainError,
    IndeterminateError,
    UnsupportedModelError,
)
from .lifshitz import (
    QuadratureSettings,
    force_plates_matsubara,
    force_plates_poisson,
    force_sphere_plate,
    free_energy_plates,
)
from .perturbative import delta_T_plates, delta_T_sphere
from .quantities import (
    ALUMINIUM,
    CONSTANTS,
    Dielectric,
    Drude,
    EvaluationPoint,
    IdealMetal,
    ModeSplit,
    Plasma,
)
from .roughness import Flat, Grid, Sinusoidal, TwoPoint, averaged_force

__version__ = "0.1.0"

__all__ = [
    "ALUMINIUM", "CONSTANTS", "CasimirError", "ConfigurationError", "ConvergenceError",
    "Dielectric", "DomainError", "Drude", "EvaluationPoint", "Flat", "Grid", "IdealMetal",
    "IndeterminateError", "ModeSplit", "Plasma", "QuadratureSettings", "Sinusoidal", "TwoPoint",
    "UnsupportedModelError", "averaged_force", "delta_T_plates", "delta_T_sphere",
    "force_plates_matsubara", "force_plates_poisson", "force_sphere_plate", "free_energy_plates",
    "k_factor", "permittivity", "reflection_sq", "regime_recommendation", "scattering_s11",
    "total_force", "zero_frequency_report",
]
