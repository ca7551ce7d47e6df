from .bounds import load_catalog, solve_beta0_bound, species_phase, table1
from .models import (
    BoundReport,
    GupParams,
    LaserConfig,
    PhaseResult,
    PulsePlan,
    RunConfig,
    SpeciesCatalog,
    SpeciesSpec,
    VerifyReport,
)
from .protocol import total_phase
from .verify import run_verify

__version__ = "1.0.0"

__all__ = [
    "BoundReport",
    "GupParams",
    "LaserConfig",
    "PhaseResult",
    "PulsePlan",
    "RunConfig",
    "SpeciesCatalog",
    "SpeciesSpec",
    "VerifyReport",
    "load_catalog",
    "solve_beta0_bound",
    "species_phase",
    "table1",
    "total_phase",
    "run_verify",
    "__version__",
]
