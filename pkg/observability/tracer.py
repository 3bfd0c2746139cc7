#!/usr/bin/env python3
"""
Run Tracer & Context Manager
Carries the run correlation ID through every solver stage using ContextVars.
"""

import hashlib
import json
import uuid
from contextvars import ContextVar, Token
from typing import Any, Mapping, Optional

# "unknown" default ensures no log line ever has a null ID
run_id_var: ContextVar[str] = ContextVar("run_id", default="unknown")


def get_current_run_id() -> str:
    return run_id_var.get()


def set_run_id(run_id: Optional[str] = None) -> Token[str]:
    """Sets the run ID context; a random ID is generated if none is given."""
    if not run_id:
        run_id = uuid.uuid4().hex[:12]
    return run_id_var.set(run_id)


def run_id_for(payload: Mapping[str, Any]) -> str:
    """Deterministic run ID: sha1 of the canonical JSON of a config payload."""
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha1(canonical.encode("utf-8")).hexdigest()[:12]


class RunTracer:
    """
    Unified manager for run tracing and correlation.
    Used by the CLI and the worker pools that evaluate grid rows.
    """

    @staticmethod
    def generate_run_id() -> str:
        return uuid.uuid4().hex[:12]

    @staticmethod
    def set_run_id(run_id: Optional[str] = None) -> Token[str]:
        return set_run_id(run_id)

    @staticmethod
    def get_run_id() -> str:
        return get_current_run_id()

    @staticmethod
    def reset_run_id(token: Token[str]) -> None:
        """
        Restores the previous run ID.
        Prevents context leakage between consecutive runs in one process.
        """
        try:
            run_id_var.reset(token)
        except (ValueError, RuntimeError):
            # Token created in another context or already used
            pass
