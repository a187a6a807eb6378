"""Structured logging configuration for the limit cycle toolkit."""

import logging
import logging.handlers
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Iterator

import structlog
from structlog.typing import FilteringBoundLogger

from ..config.settings import settings


def configure_logging() -> FilteringBoundLogger:
    """Configure structured logging with rotation and formatting."""

    log_dir = Path(settings.log_directory)
    log_dir.mkdir(parents=True, exist_ok=True)
    level = getattr(logging, settings.log_level)

    logging.basicConfig(format="%(message)s", stream=sys.stdout, level=level)

    root_logger = logging.getLogger()
    log_file = (log_dir / "loud_cycles.log").resolve()
    already_attached = any(
        isinstance(handler, logging.handlers.RotatingFileHandler)
        and Path(handler.baseFilename) == log_file
        for handler in root_logger.handlers
    )
    if not already_attached:
        file_handler = logging.handlers.RotatingFileHandler(
            filename=log_file,
            maxBytes=10 * 1024 * 1024,  # 10MB
            backupCount=5,
            encoding="utf-8",
        )
        file_handler.setLevel(level)
        root_logger.addHandler(file_handler)

    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.StackInfoRenderer(),
            structlog.dev.set_exc_info,
            structlog.processors.TimeStamper(fmt="ISO"),
            (
                structlog.dev.ConsoleRenderer()
                if settings.environment == "development"
                else structlog.processors.JSONRenderer()
            ),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(level),
        logger_factory=structlog.WriteLoggerFactory(),
        cache_logger_on_first_use=True,
    )

    return structlog.get_logger()


def get_logger(name: str = __name__) -> FilteringBoundLogger:
    """Get a configured logger instance."""
    return structlog.get_logger(name)


def set_level(level: str) -> None:
    """Change the active level of both stdlib and structlog output."""
    numeric = getattr(logging, level.upper())
    logging.getLogger().setLevel(numeric)
    structlog.configure(wrapper_class=structlog.make_filtering_bound_logger(numeric))


@contextmanager
def run_context(**values: Any) -> Iterator[None]:
    """Attach ``values`` (command, config hash) to every event logged in the block."""
    with structlog.contextvars.bound_contextvars(**values):
        yield


# Configure logging on module import
logger = configure_logging()
