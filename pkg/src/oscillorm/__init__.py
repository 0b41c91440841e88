"""Numerical workbench for L^p -> L^q decay of oscillatory integral operators."""

from .errors import (
    ConfigError,
    ConvergenceError,
    DegenerateError,
    DomainError,
    EstimationError,
    NumericalError,
    OscillormError,
    ResolutionError,
)
from .kernels import BACKEND
from .theory import (
    BallGeometry,
    LebesguePoint,
    PhaseFamily,
    interpolated_upper_bound,
    sigma,
    theoretical_exponent,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BallGeometry",
    "ConfigError",
    "ConvergenceError",
    "DegenerateError",
    "DomainError",
    "EstimationError",
    "LebesguePoint",
    "NumericalError",
    "OscillormError",
    "PhaseFamily",
    "ResolutionError",
    "interpolated_upper_bound",
    "sigma",
    "theoretical_exponent",
]
