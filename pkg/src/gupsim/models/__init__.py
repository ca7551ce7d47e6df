from .angle import BigAngle, WrappedPhase
from .constants import OscillatorScales, PhysicalConstants
from .inputs import PhaseInputs
from .plan import GupParams, LaserConfig, PulsePlan, SchedulePulse
from .report import Finding, SimulateReport, SuiteResult, VerifyReport
from .results import (
    DetuningReport,
    DriftReport,
    EliminationReport,
    GapSweep,
    LeadingOrderGap,
    PhaseResult,
    PropagatorTerm,
    TermComparison,
)
from .run_config import ExplicitParameters, NumericOptions, OutputOptions, ParameterOverrides, RunConfig
from .species import (
    BoundReport,
    BoundSensitivity,
    ScalingPoint,
    SensitivityEntry,
    SharedParameters,
    SpeciesCatalog,
    SpeciesSpec,
)

__all__ = [
    "BigAngle",
    "WrappedPhase",
    "PhysicalConstants",
    "OscillatorScales",
    "PhaseInputs",
    "GupParams",
    "LaserConfig",
    "PulsePlan",
    "SchedulePulse",
    "PropagatorTerm",
    "DetuningReport",
    "DriftReport",
    "EliminationReport",
    "PhaseResult",
    "LeadingOrderGap",
    "GapSweep",
    "TermComparison",
    "SpeciesSpec",
    "SpeciesCatalog",
    "SharedParameters",
    "SensitivityEntry",
    "BoundSensitivity",
    "BoundReport",
    "ScalingPoint",
    "RunConfig",
    "ExplicitParameters",
    "NumericOptions",
    "OutputOptions",
    "ParameterOverrides",
    "SuiteResult",
    "Finding",
    "VerifyReport",
    "SimulateReport",
]
