"""
Structured logging for rmcubic.

Records are rendered as one JSON object per line on stderr, through the
stdlib ``ProcessorFormatter`` bridge so pytest's caplog sees the event
dict. Reports go to stdout and never share a stream with logs.
"""

import logging
import sys
from fractions import Fraction
from typing import Any, MutableMapping

import structlog


def render_exact_numbers(
    logger: Any, method_name: str, event_dict: MutableMapping[str, Any]
) -> MutableMapping[str, Any]:
    """Render Fraction context values as "num/den" (integral ones as plain ints)."""
    for key, value in event_dict.items():
        if isinstance(value, Fraction):
            event_dict[key] = value.numerator if value.denominator == 1 else str(value)
    return event_dict


def configure_structlog(level: int = logging.INFO) -> None:
    """
    Install the rmcubic processor chain and a single JSON handler on the root logger.

    Called at package import; calling it again replaces the handler (the
    CLI does so indirectly through ``set_log_level``).

    Args:
        level: Root logging level (default: INFO)
    """
    timestamper = structlog.processors.TimeStamper(fmt="iso")
    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.stdlib.add_log_level,
            structlog.stdlib.add_logger_name,
            timestamper,
            render_exact_numbers,
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.stdlib.ProcessorFormatter.wrap_for_formatter,
        ],
        wrapper_class=structlog.stdlib.BoundLogger,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )

    formatter = structlog.stdlib.ProcessorFormatter(
        processor=structlog.processors.JSONRenderer(),
        foreign_pre_chain=[
            structlog.stdlib.add_log_level,
            structlog.stdlib.add_logger_name,
            timestamper,
        ],
    )

    root_logger = logging.getLogger()
    for existing in list(root_logger.handlers):
        if getattr(existing, "_rmcubic_handler", False):
            root_logger.removeHandler(existing)

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(formatter)
    handler._rmcubic_handler = True  # type: ignore[attr-defined]
    root_logger.addHandler(handler)
    root_logger.setLevel(level)


def set_log_level(level_name: str) -> None:
    """
    Set the root log level by name.

    Raises:
        ValueError: If the name is not a known logging level
    """
    level = logging.getLevelName(level_name.upper())
    if not isinstance(level, int):
        raise ValueError(f"Unknown log level: {level_name}")
    logging.getLogger().setLevel(level)
