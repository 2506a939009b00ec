"""Entanglement harvesting from the vacuum of a massless scalar field.

Two two-level atoms couple to the field through finite interaction windows.
The package computes their second-order amplitudes, the reduced two-atom
state, its entanglement, and a local distillation protocol; accelerated
atoms are handled through exact residue series.
"""
from .amplitudes import (Atom, AmplitudeSet, Path, ScenarioConfig, assemble_amplitudes, harvesting_ratio,
                         smeared_two_point, transition_probabilities)
from .density import (TwoQubitState, assemble_rho, bell_state, concurrence, inseparability_inequalities,
                       negativity, partial_transpose, werner_state)
from .distillation import FilterParams, distill_to_target, local_filter, optimize_filter, recurrence_step
from .errors import (CausalityError, ConvergenceError, CrossValidationError, HarvestError, NotDistillableError,
                     PerturbativeRegimeError, UndefinedRatioError, WindowDomainError)
from .kernels import BACKEND
from .quadrature import QuadratureSettings
from .rindler import RindlerScenario, analytic_ratio, emission_rate, exchange_amplitude_rate
from .windows import WindowFunction, WindowShape, cosine_squared, gaussian, tabulated, window_spectrum

__version__ = "0.1.0"

__all__ = [
    "Atom", "AmplitudeSet", "Path", "ScenarioConfig", "assemble_amplitudes", "harvesting_ratio",
    "smeared_two_point", "transition_probabilities",
    "TwoQubitState", "assemble_rho", "bell_state", "concurrence", "inseparability_inequalities",
    "negativity", "partial_transpose", "werner_state",
    "FilterParams", "distill_to_target", "local_filter", "optimize_filter", "recurrence_step",
    "CausalityError", "ConvergenceError", "CrossValidationError", "HarvestError", "NotDistillableError",
    "PerturbativeRegimeError", "UndefinedRatioError", "WindowDomainError",
    "BACKEND", "QuadratureSettings",
    "RindlerScenario", "analytic_ratio", "emission_rate", "exchange_amplitude_rate",
    "WindowFunction", "WindowShape", "cosine_squared", "gaussian", "tabulated", "window_spectrum",
]
