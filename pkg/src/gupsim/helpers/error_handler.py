from __future__ import annotations

import logging

from gupsim.exceptions import (
    CatalogError,
    ConfigError,
    GupSimError,
    InvalidParameterError,
    NumericalError,
    PhysicsCheckError,
    PrecisionError,
    TruncationError,
)

logger = logging.getLogger(__name__)

EXIT_OK: int = 0
EXIT_PHYSICS: int = 1
EXIT_USAGE: int = 2


class ErrorHandler:
    """Maps gupsim exceptions to CLI exit codes and one-line diagnostics."""

    def __init__(self):
        """Initialize error handler with default exception-to-exit-code mappings."""
        self._exit_mappings: dict[type[BaseException], int] = {
            ConfigError: EXIT_USAGE,
            CatalogError: EXIT_USAGE,
            InvalidParameterError: EXIT_USAGE,
            PrecisionError: EXIT_PHYSICS,
            TruncationError: EXIT_PHYSICS,
            NumericalError: EXIT_PHYSICS,
            PhysicsCheckError: EXIT_PHYSICS,
        }

    def exit_code_for(self, exc: BaseException) -> int:
        """
        Resolve the exit code for an exception, most specific class first.

        Args:
            exc: Raised exception

        Returns:
            Exit code; unknown gupsim errors count as physics failures, anything else as usage errors
        """
        for klass in type(exc).__mro__:
            if klass in self._exit_mappings:
                return self._exit_mappings[klass]
        if isinstance(exc, GupSimError):
            return EXIT_PHYSICS
        return EXIT_USAGE

    def describe(self, exc: BaseException) -> str:
        """Build the diagnostic line printed to stderr."""
        if isinstance(exc, ConfigError) and exc.field_errors:
            fields = ", ".join(f"{path}: {msg}" for path, msg in exc.field_errors)
            return f"config error: {exc.message} [{fields}]"
        if isinstance(exc, PrecisionError):
            return f"precision error: {exc}"
        if isinstance(exc, TruncationError):
            return f"truncation error: {exc} (last dim {exc.last_dim}, last change {exc.last_change:.3e})"
        return f"{type(exc).__name__}: {exc}"

    def handle(self, exc: BaseException) -> int:
        """
        Log an exception and return the exit code the CLI should use.

        Args:
            exc: Raised exception

        Returns:
            Process exit code
        """
        code = self.exit_code_for(exc)
        logger.error(self.describe(exc))
        return code

    def add_exit_mapping(self, exc_type: type[BaseException], exit_code: int) -> None:
        """
        Add custom exception mapping.

        Args:
            exc_type: Exception class
            exit_code: Exit code to return for it
        """
        self._exit_mappings[exc_type] = exit_code


# Default instance
default_error_handler = ErrorHandler()
