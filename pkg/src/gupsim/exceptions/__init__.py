from .gupsim_exceptions import (
    CatalogError,
    ConfigError,
    DimensionMismatchError,
    EigenDecompositionError,
    GupSimError,
    InvalidParameterError,
    NotSkewHermitianError,
    NumericalError,
    PhysicsCheckError,
    PrecisionError,
    ScheduleError,
    TruncationError,
    UnitarityError,
)

__all__ = [
    "GupSimError",
    "InvalidParameterError",
    "DimensionMismatchError",
    "ScheduleError",
    "ConfigError",
    "CatalogError",
    "NumericalError",
    "NotSkewHermitianError",
    "EigenDecompositionError",
    "UnitarityError",
    "TruncationError",
    "PrecisionError",
    "PhysicsCheckError",
]
