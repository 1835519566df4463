"""Custom exceptions for simulation and closed-form evaluation."""

from typing import Optional, Sequence


class QspSimError(Exception):
    """Base exception for simulator errors."""
    pass


class ConfigError(QspSimError):
    """Raised when a scenario or experiment configuration is invalid."""

    def __init__(self, message: str, fields: Optional[Sequence[str]] = None):
        super().__init__(message)
        self.fields = list(fields or [])


class PilotSupplyError(ConfigError):
    """Raised when the coherence interval cannot hold the requested pilots."""
    pass


class ShapeMismatchError(QspSimError):
    """Raised when matrix operands have inconsistent shapes."""

    def __init__(self, message: str, expected=None, actual=None):
        super().__init__(message)
        self.expected = expected
        self.actual = actual


class ModelDomainError(QspSimError):
    """Raised when parameters fall outside the analytical model's domain."""

    def __init__(self, message: str, value: Optional[float] = None):
        super().__init__(message)
        self.value = value


class NoFeasibleRootError(ModelDomainError):
    """Raised when neither stationary point of the SINR lies in (0, 1)."""

    def __init__(self, message: str, roots: Sequence[float]):
        super().__init__(message)
        self.roots = tuple(roots)


class DegenerateSinrError(QspSimError):
    """Raised when the estimated effective noise variance vanishes."""
    pass
