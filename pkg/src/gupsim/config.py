from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    catalog: Path | None = None
    precision_bits: int = 256
    default_dim: int = 64
    max_dim: int = 1024
    convergence_rtol: float = 1e-8
    unitarity_tol: float = 1e-10
    hermiticity_tol: float = 1e-12
    skew_tol: float = 1e-10
    wrap_error_limit: float = 1e-6
    pulse_drift_warn: float = 0.05
    nu_tp_warn: float = 0.05
    interior_fraction: float = 0.25
    log_level: str = "WARNING"

    class Config:
        env_prefix: str = "GUPSIM_"
        env_file: str = ".env"
        env_file_encoding: str = "utf-8"


settings: Settings = Settings()


@contextmanager
def scoped_settings(**changes) -> Iterator[Settings]:
    """Apply ``changes`` to the shared settings for the duration of the block, then restore them."""
    previous = {name: getattr(settings, name) for name in changes}
    try:
        for name, value in changes.items():
            setattr(settings, name, value)
        yield settings
    finally:
        for name, value in previous.items():
            setattr(settings, name, value)
