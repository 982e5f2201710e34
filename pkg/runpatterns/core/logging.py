"""Logging configuration."""
import logging
import sys
from typing import Any

import structlog
from structlog.types import Processor

from runpatterns.core.config import get_settings

settings = get_settings()


def setup_logging(level: str | None = None) -> None:
    """Configure structured logging.

    Log lines always go to stderr; stdout is reserved for command output.
    """
    level_name = (level or settings.LOG_LEVEL).upper()
    processors: list[Processor] = [
        structlog.contextvars.merge_contextvars,
        structlog.processors.add_log_level,
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
    ]

    if settings.LOG_FORMAT == "json":
        processors.append(structlog.processors.JSONRenderer())
    else:
        processors.append(structlog.dev.ConsoleRenderer(colors=False))

    structlog.configure(
        processors=processors,
        wrapper_class=structlog.make_filtering_bound_logger(logging.getLevelName(level_name)),
        context_class=dict,
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )

    logging.basicConfig(
        format="%(message)s",
        stream=sys.stderr,
        level=getattr(logging, level_name),
    )


def get_logger(*args: Any, **kwargs: Any) -> structlog.BoundLogger:
    """Get structured logger instance."""
    return structlog.get_logger(*args, **kwargs)
