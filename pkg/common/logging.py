"""
Structured logging setup.
"""

import logging
import sys
from typing import Any, List

import structlog

from common.constants import LoggingConstants


def configure_logging(
    level: str = LoggingConstants.DEFAULT_LOG_LEVEL,
    fmt: str = LoggingConstants.DEFAULT_LOG_FORMAT,
) -> None:
    """Route structlog through stdlib logging on stderr.

    ``fmt`` is ``"json"`` for machine-readable lines or ``"console"`` for
    a coloured developer view.
    """
    logging.basicConfig(
        stream=sys.stderr,
        level=level.upper(),
        format=LoggingConstants.LOG_FORMAT,
        force=True,
    )

    renderer: Any = (
        structlog.dev.ConsoleRenderer()
        if fmt == "console"
        else structlog.processors.JSONRenderer()
    )
    processors: List[Any] = [
        structlog.contextvars.merge_contextvars,
        structlog.stdlib.filter_by_level,
        structlog.stdlib.add_logger_name,
        structlog.stdlib.add_log_level,
        structlog.stdlib.PositionalArgumentsFormatter(),
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
        structlog.processors.UnicodeDecoder(),
        renderer,
    ]
    structlog.configure(
        processors=processors,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )
