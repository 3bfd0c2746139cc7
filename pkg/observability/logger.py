#!/usr/bin/env python3
"""
Structured Logging
Non-blocking QueueHandler setup with a safety filter so every record
carries a run_id, JSON-lines file output via python-json-logger.
"""

import logging
import logging.handlers
import queue
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Union

# Safe import with fallback
try:
    from pythonjsonlogger import jsonlogger

    JSON_LOGGER_AVAILABLE = True
except ImportError:
    JSON_LOGGER_AVAILABLE = False

from .tracer import RunTracer

logger = logging.getLogger("screening")

_listener: Optional[logging.handlers.QueueListener] = None
_RECORD_ATTRS = frozenset(vars(logging.makeLogRecord({}))) | {"message", "asctime"}


def _current_run_id() -> str:
    rid = RunTracer.get_run_id()
    return rid if (rid and rid != "unknown") else "system"


class RunIDInterceptor(logging.Filter):
    """
    Safety Filter: ensures 'run_id' exists on every LogRecord.
    Third-party libraries (scipy, pandas) log without our extra dict.
    """

    def filter(self, record):
        if not hasattr(record, "run_id"):
            record.run_id = _current_run_id()
        return True


class CustomJsonFormatter(
    jsonlogger.JsonFormatter if JSON_LOGGER_AVAILABLE else logging.Formatter
):
    """Injects run_id before JSON serialization."""

    def format(self, record):
        if not hasattr(record, "run_id"):
            record.run_id = _current_run_id()
        return super().format(record)


def setup_structured_logging(
    log_level: int = logging.INFO, log_dir: Union[str, Path] = "logs"
) -> None:
    """Setup non-blocking logging with a background queue."""
    global _listener

    log_dir = Path(log_dir)
    log_dir.mkdir(parents=True, exist_ok=True)

    safety_filter = RunIDInterceptor()

    # Console goes to stderr so stdout stays clean for CLI output
    console_handler = logging.StreamHandler(sys.stderr)
    console_formatter = logging.Formatter(
        "%(asctime)s | %(levelname)-8s | %(name)s | %(run_id)s | %(message)s"
    )
    console_handler.setFormatter(console_formatter)
    console_handler.addFilter(safety_filter)

    log_file = log_dir / ("solver.jsonl" if JSON_LOGGER_AVAILABLE else "solver.log")
    file_handler = logging.handlers.RotatingFileHandler(
        log_file, maxBytes=10 * 1024 * 1024, backupCount=5, encoding="utf-8"
    )

    if JSON_LOGGER_AVAILABLE:
        file_formatter = CustomJsonFormatter(
            "%(asctime)s %(levelname)s %(name)s %(module)s %(lineno)d %(run_id)s %(message)s"
        )
    else:
        file_formatter = console_formatter

    file_handler.setFormatter(file_formatter)
    file_handler.addFilter(safety_filter)

    log_queue: queue.Queue = queue.Queue(-1)
    queue_handler = logging.handlers.QueueHandler(log_queue)

    if _listener is not None:
        _listener.stop()
    _listener = logging.handlers.QueueListener(
        log_queue, console_handler, file_handler, respect_handler_level=True
    )
    _listener.start()

    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)
    for h in root_logger.handlers[:]:
        root_logger.removeHandler(h)
    root_logger.addHandler(queue_handler)

    log_info(f"🚀 Logging ready (JSON: {JSON_LOGGER_AVAILABLE})", log_file=str(log_file))


def shutdown_logging() -> None:
    """Flush and stop the background listener."""
    global _listener
    if _listener is not None:
        _listener.stop()
        _listener = None


# =============================================================================
# Helper & Convenience Functions
# =============================================================================


def _prepare_extra(kwargs: Dict[str, Any]) -> Dict[str, Any]:
    """Ensures run_id is injected into the extra dict."""
    extra = dict(kwargs.get("extra", {}))
    extra.setdefault("run_id", _current_run_id())

    reserved = ("exc_info", "stack_info", "extra")
    for k, v in kwargs.items():
        if k in reserved:
            continue
        # LogRecord refuses extras that shadow its own attributes
        extra[f"field_{k}" if k in _RECORD_ATTRS else k] = v
    return extra


def log_debug(message: str, **kwargs: Any) -> None:
    logger.debug(message, extra=_prepare_extra(kwargs))


def log_info(message: str, **kwargs: Any) -> None:
    logger.info(message, extra=_prepare_extra(kwargs))


def log_warning(message: str, **kwargs: Any) -> None:
    logger.warning(message, extra=_prepare_extra(kwargs))


def log_error(message: str, **kwargs: Any) -> None:
    """Logs at ERROR level; pass exc_info=True to attach the traceback."""
    exc_info_val = kwargs.get("exc_info", False)
    logger.error(message, exc_info=exc_info_val, extra=_prepare_extra(kwargs))
