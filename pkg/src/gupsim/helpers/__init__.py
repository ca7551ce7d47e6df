from .error_handler import EXIT_OK, EXIT_PHYSICS, EXIT_USAGE, ErrorHandler, default_error_handler
from .serializer import JSONSerializer, dump_json

__all__ = [
    "JSONSerializer",
    "ErrorHandler",
    "default_error_handler",
    "dump_json",
    "EXIT_OK",
    "EXIT_PHYSICS",
    "EXIT_USAGE",
]
