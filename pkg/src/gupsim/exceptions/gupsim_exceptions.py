from typing import Any


class GupSimError(Exception):
    """Base exception for gupsim."""


class InvalidParameterError(GupSimError, ValueError):
    """A physical or numerical parameter is outside its allowed range."""


class DimensionMismatchError(InvalidParameterError):
    """Operators with different truncation dimensions were combined."""

    def __init__(self, left: int, right: int) -> None:
        super().__init__(f"dimension mismatch: {left} != {right}")
        self.left = left
        self.right = right


class ScheduleError(InvalidParameterError):
    """Pulse index and pulse time disagree with the quarter-period schedule."""


class ConfigError(GupSimError):
    """Run configuration failed schema validation."""

    def __init__(self, message: str, *, field_errors: list[tuple[str, str]] | None = None) -> None:
        self.field_errors: list[tuple[str, str]] = field_errors or []
        detail = "; ".join(f"{path}: {msg}" for path, msg in self.field_errors)
        super().__init__(f"{message} ({detail})" if detail else message)
        self.message = message


class CatalogError(GupSimError):
    """Species catalog missing, malformed, or lacking the requested species."""


class NumericalError(GupSimError):
    """Generic failure of a numerical routine."""


class NotSkewHermitianError(NumericalError):
    """Generator passed to the matrix exponential is not skew-Hermitian."""


class EigenDecompositionError(NumericalError):
    """Hermitian eigendecomposition did not converge."""


class UnitarityError(NumericalError):
    """Constructed propagator exceeds the unitarity-defect tolerance."""


class TruncationError(NumericalError):
    """Fock truncation did not converge below the dimension cap."""

    def __init__(self, message: str, *, last_dim: int, last_change: float) -> None:
        super().__init__(message)
        self.last_dim = last_dim
        self.last_change = last_change


class PrecisionError(NumericalError):
    """Working precision too low for the requested phase reduction."""

    def __init__(self, error_bound: Any, precision_bits: int) -> None:
        super().__init__(
            f"phase wrap error bound {float(error_bound):.3e} rad exceeds limit at {precision_bits} bits; "
            "raise --precision-bits"
        )
        self.error_bound = error_bound
        self.precision_bits = precision_bits


class PhysicsCheckError(GupSimError):
    """A verification suite measured a value outside its tolerance."""

    def __init__(self, suite: str, measured: Any, tolerance: Any, *, details: Any = None) -> None:
        super().__init__(f"{suite}: measured {measured} outside tolerance {tolerance}")
        self.suite = suite
        self.measured = measured
        self.tolerance = tolerance
        self.details = details
