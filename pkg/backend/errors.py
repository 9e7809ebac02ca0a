"""
Shared exception types.
"""

from typing import Optional, Dict, Any


class DEAError(Exception):
    """Base class for every failure the toolkit reports."""

    default_message = "Analysis failed"
    default_code = "DEA_ERROR"

    def __init__(
        self,
        message: Optional[str] = None,
        code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        self.message = message or self.default_message
        self.code = code or self.default_code
        self.details = details or {}
        super().__init__(self.message)


class CircuitParseError(DEAError):
    default_message = "Circuit document could not be parsed"
    default_code = "CIRCUIT_PARSE_ERROR"


class CircuitValidationError(DEAError):
    default_message = "Circuit validation failed"
    default_code = "CIRCUIT_VALIDATION_ERROR"


class ParameterAssignmentError(DEAError):
    default_message = "Parameter assignment does not match the circuit"
    default_code = "PARAMETER_ASSIGNMENT_ERROR"


class SymmetryError(DEAError):
    default_message = "Symmetry removal is not possible for this circuit"
    default_code = "SYMMETRY_ERROR"


class ConfigError(DEAError):
    default_message = "Invalid run configuration"
    default_code = "CONFIG_ERROR"


class UnsupportedError(DEAError):
    default_message = "Operation not supported for this input"
    default_code = "UNSUPPORTED"


class NumericalError(DEAError):
    default_message = "Numerical failure"
    default_code = "NUMERICAL_ERROR"


class NonMinimalCircuitError(NumericalError):
    default_message = "Metric is singular almost everywhere; circuit is not minimal"
    default_code = "NON_MINIMAL_CIRCUIT"
