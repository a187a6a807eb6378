"""Utility modules for logging."""

from .logger import configure_logging, get_logger, run_context, set_level

__all__ = ["configure_logging", "get_logger", "run_context", "set_level"]
