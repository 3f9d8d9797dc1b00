"""Closed-form and series propagators."""
from .dispersion import DispersionKind, DispersionRelation, evolve_free_fourier, group_velocity
from .fourier import evolve_constant_force_fourier, evolve_harmonic_fourier, harmonic_mode_sum
from .kernels import (
    KernelForm,
    KernelKind,
    harmonic_dressing,
    harmonic_width,
    ho_parameters,
    kernel_equivalence_free,
    make_kernel,
)
from .polynomial import (
    EvolvedPolynomial,
    PolynomialState,
    TruncationError,
    double_factorial,
    evolve_free_polynomial,
    evolve_polynomial_state,
    free_polynomial,
    free_polynomial_coefficients,
    harmonic_polynomial_resummed,
)
from .series import (
    SeriesResult,
    act_on_polynomial,
    evolve_by_operator_series,
    kernel_series_terms,
    operator_series_polynomial,
)

__all__ = [
    "DispersionKind",
    "DispersionRelation",
    "EvolvedPolynomial",
    "KernelForm",
    "KernelKind",
    "PolynomialState",
    "SeriesResult",
    "TruncationError",
    "act_on_polynomial",
    "double_factorial",
    "evolve_by_operator_series",
    "evolve_constant_force_fourier",
    "evolve_free_fourier",
    "evolve_free_polynomial",
    "evolve_harmonic_fourier",
    "evolve_polynomial_state",
    "free_polynomial",
    "free_polynomial_coefficients",
    "group_velocity",
    "harmonic_dressing",
    "harmonic_mode_sum",
    "harmonic_polynomial_resummed",
    "harmonic_width",
    "ho_parameters",
    "kernel_equivalence_free",
    "kernel_series_terms",
    "make_kernel",
    "operator_series_polynomial",
]
