"""Exception types shared across the package."""


class P2SeqError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(P2SeqError, ValueError):
    """A parameter quadruple lies outside the admissible box."""


class AiryDomainError(P2SeqError, ValueError):
    """Airy argument outside the supported evaluation interval."""


class GridMismatchError(P2SeqError, ValueError):
    """Sampled data does not match the grid it claims to live on."""


class ConvergenceError(P2SeqError, RuntimeError):
    """Nonlinear solve failed to converge; carries the last residual norm."""

    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(message)
        self.residual = residual


class ClassificationError(P2SeqError, RuntimeError):
    """Solution profile matches neither admissible sign/monotonicity class."""


class DegenerateBasisError(P2SeqError, RuntimeError):
    """Boundary determinant of the homogeneous basis is numerically zero."""


class InvalidConversionError(P2SeqError, ValueError):
    """Cube root argument of the interval-length formula is not positive."""


class ConfigError(P2SeqError, ValueError):
    """Experiment configuration is invalid."""
