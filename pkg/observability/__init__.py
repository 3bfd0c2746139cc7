from .logger import (
    log_debug,
    log_error,
    log_info,
    log_warning,
    setup_structured_logging,
)
from .tracer import RunTracer, run_id_for

__all__ = [
    "RunTracer",
    "log_debug",
    "log_error",
    "log_info",
    "log_warning",
    "run_id_for",
    "setup_structured_logging",
]
