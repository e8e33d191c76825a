"""
Logging utilities.

Thin entry points over the structlog configuration in
src.utils.structured_logging; every module obtains its logger here.

Example:
    from src.utils import get_logger, setup_logging
    setup_logging(level="INFO")
    logger = get_logger(__name__)
    logger.info("record_failed", clip_id="c001", stage="audio")
"""

import logging
from typing import Optional

import structlog


def setup_logging(
    level: Optional[str] = None,
    log_file: Optional[str] = None,
    json_format: Optional[bool] = None,
) -> logging.Logger:
    """
    Set up logging configuration.

    Unset arguments fall back to the MOODNET_LOG_* environment settings.

    Args:
        level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Optional file path to write logs to
        json_format: Render JSON lines instead of console output

    Returns:
        Configured root logger
    """
    from src.config.settings import get_settings
    from .structured_logging import setup_structured_logging

    settings = get_settings()
    setup_structured_logging(
        level=level or settings.log_level,
        log_file=log_file or settings.log_file,
        json_format=settings.log_format == "json" if json_format is None else json_format,
    )
    return logging.getLogger()


def get_logger(name: str) -> structlog.stdlib.BoundLogger:
    """
    Get a logger instance with the specified name.

    Args:
        name: Logger name

    Returns:
        Structured logger instance
    """
    from .structured_logging import get_logger as _get_structured_logger

    return _get_structured_logger(name)
