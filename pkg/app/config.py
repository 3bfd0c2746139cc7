#!/usr/bin/env python3
"""
Central Configuration & Bootstrap
Environment-driven defaults for the solver and the logging setup.
"""

import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv

from observability.logger import log_info, setup_structured_logging
from observability.tracer import RunTracer


def _env_bool(name: str, default: str = "false") -> bool:
    return os.getenv(name, default).lower() == "true"


class Config:
    """Centralized configuration store to avoid multiple os.getenv calls."""

    BASE_DIR = Path(__file__).parent.parent
    DEBUG = _env_bool("SCREENING_DEBUG")

    PROJECT_NAME = os.getenv("SCREENING_PROJECT", "committed-spend-pricing")
    LOG_DIR = os.getenv("SCREENING_LOG_DIR", "logs")

    # Numerical defaults; a run config overrides them per run
    QUAD_ORDER = int(os.getenv("SCREENING_QUAD_ORDER", "64"))
    ROOT_TOL = float(os.getenv("SCREENING_ROOT_TOL", "1e-10"))
    MONOTONE_TOL = float(os.getenv("SCREENING_MONOTONE_TOL", "1e-9"))
    IC_TOL = float(os.getenv("SCREENING_IC_TOL", "1e-7"))
    WORKERS = int(os.getenv("SCREENING_WORKERS", "1"))

    @classmethod
    def as_dict(cls) -> Dict[str, Any]:
        """Returns config as dict for debugging or serialization."""
        return {
            k: v
            for k, v in cls.__dict__.items()
            if not k.startswith("__") and not callable(v) and not isinstance(v, classmethod)
        }

    @classmethod
    def reload(cls) -> None:
        """Re-read the environment (after .env is loaded or in tests)."""
        cls.DEBUG = _env_bool("SCREENING_DEBUG")
        cls.PROJECT_NAME = os.getenv("SCREENING_PROJECT", "committed-spend-pricing")
        cls.LOG_DIR = os.getenv("SCREENING_LOG_DIR", "logs")
        cls.QUAD_ORDER = int(os.getenv("SCREENING_QUAD_ORDER", "64"))
        cls.ROOT_TOL = float(os.getenv("SCREENING_ROOT_TOL", "1e-10"))
        cls.MONOTONE_TOL = float(os.getenv("SCREENING_MONOTONE_TOL", "1e-9"))
        cls.IC_TOL = float(os.getenv("SCREENING_IC_TOL", "1e-7"))
        cls.WORKERS = int(os.getenv("SCREENING_WORKERS", "1"))


def load_environment() -> None:
    """Load .env from the project root when present, then refresh Config."""
    env_path = Config.BASE_DIR / ".env"
    if env_path.exists():
        load_dotenv(dotenv_path=env_path, override=True)
    Config.reload()


def setup_environment(verbose: bool = False, log_dir: Optional[str] = None) -> None:
    """
    Explicit entry point for application setup.
    Called by the CLI before any solver work.
    """
    load_environment()

    log_level = logging.DEBUG if (Config.DEBUG or verbose) else logging.INFO
    setup_structured_logging(log_level=log_level, log_dir=log_dir or Config.LOG_DIR)

    token = RunTracer.set_run_id("startup")
    try:
        log_info(
            f"🚀 Environment setup for: {Config.PROJECT_NAME}",
            quad_order=Config.QUAD_ORDER,
        )
    finally:
        RunTracer.reset_run_id(token)


# Side-effect free: setup_environment() must be called manually by entry points.
