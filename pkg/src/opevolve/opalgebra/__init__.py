"""Symbolic algebra of q̂, p̂ under [q̂, p̂] = iħ."""
from .actions import apply_operator_polynomial, gaussian_similarity
from .classical import (
    ClassicalFlow,
    ClassicalPolynomial,
    FlowSource,
    TimeFunction,
    classical_flow,
    quantize_flow,
    weyl_quantize,
)
from .hamiltonians import HamiltonianKind, HamiltonianSpec
from .heisenberg import TimeSeriesOperator, heisenberg_derivative, heisenberg_series
from .polynomial import (
    DEFAULT_MAX_DEGREE,
    DegreeGuardError,
    OperatorPolynomial,
    commutator,
    multiply,
    normal_order,
)

__all__ = [
    "ClassicalFlow",
    "ClassicalPolynomial",
    "DEFAULT_MAX_DEGREE",
    "DegreeGuardError",
    "FlowSource",
    "HamiltonianKind",
    "HamiltonianSpec",
    "OperatorPolynomial",
    "TimeFunction",
    "TimeSeriesOperator",
    "apply_operator_polynomial",
    "classical_flow",
    "commutator",
    "gaussian_similarity",
    "heisenberg_derivative",
    "heisenberg_series",
    "multiply",
    "normal_order",
    "quantize_flow",
    "weyl_quantize",
]
