"""
Structured logging utilities using structlog.

Console or JSON lines on stderr. Every CLI command binds a run ID and the
command name, so featurize, train and eval events of one invocation can be
grouped after the fact.
"""

import logging
import sys
from pathlib import Path
from typing import Any, Optional

import numpy as np
import structlog
from structlog.types import EventDict, Processor


def add_app_context(logger: Any, method_name: str, event_dict: EventDict) -> EventDict:
    """Tag every entry with the application name."""
    event_dict.setdefault("app", "moodnet")
    return event_dict


def add_run_id(logger: Any, method_name: str, event_dict: EventDict) -> EventDict:
    """Copy the run ID from contextvars when the event does not carry one.

    Args:
        logger: Logger instance
        method_name: Method being called
        event_dict: Event dictionary with log data

    Returns:
        Updated event dictionary with run_id
    """
    if "run_id" not in event_dict:
        run_id = structlog.contextvars.get_contextvars().get("run_id")
        if run_id is not None:
            event_dict["run_id"] = run_id
    return event_dict


def coerce_values(logger: Any, method_name: str, event_dict: EventDict) -> EventDict:
    """Turn numpy scalars, small arrays and paths into plain values.

    Losses, F1 scores and shapes come out of numpy; JSONRenderer cannot
    serialize them as they are.
    """
    for key, value in event_dict.items():
        if isinstance(value, np.generic):
            event_dict[key] = value.item()
        elif isinstance(value, np.ndarray) and value.size <= 16:
            event_dict[key] = value.tolist()
        elif isinstance(value, Path):
            event_dict[key] = str(value)
    return event_dict


def rename_message(logger: Any, method_name: str, event_dict: EventDict) -> EventDict:
    """Rename 'event' to 'message' for consistency."""
    if "event" in event_dict:
        event_dict["message"] = event_dict.pop("event")
    return event_dict


def setup_structured_logging(
    level: str = "INFO",
    log_file: Optional[str] = None,
    json_format: bool = True,
    include_timestamp: bool = True,
    include_caller_info: bool = False,
) -> None:
    """Configure structured logging with structlog.

    Args:
        level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Optional file path to write logs to
        json_format: Whether to use JSON format (True) or console format (False)
        include_timestamp: Include timestamp in logs
        include_caller_info: Include module/function/line number
    """
    numeric_level = getattr(logging, level.upper())

    # stdout carries command results, logs go to stderr
    logging.basicConfig(format="%(message)s", stream=sys.stderr, level=numeric_level, force=True)

    processors: list[Processor] = [
        structlog.contextvars.merge_contextvars,
        structlog.stdlib.add_log_level,
        structlog.stdlib.add_logger_name,
        add_run_id,
        add_app_context,
        coerce_values,
    ]
    if include_timestamp:
        processors.append(structlog.processors.TimeStamper(fmt="iso"))
    if include_caller_info:
        processors.append(
            structlog.processors.CallsiteParameterAdder(
                parameters=[
                    structlog.processors.CallsiteParameter.FILENAME,
                    structlog.processors.CallsiteParameter.LINENO,
                    structlog.processors.CallsiteParameter.FUNC_NAME,
                ]
            )
        )

    if json_format:
        processors += [rename_message, structlog.processors.format_exc_info, structlog.processors.JSONRenderer()]
    else:
        # no colors: stderr is usually redirected to a run log
        processors.append(structlog.dev.ConsoleRenderer(colors=False, exception_formatter=structlog.dev.plain_traceback))

    structlog.configure(
        processors=processors,
        wrapper_class=structlog.stdlib.BoundLogger,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )

    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_path, encoding="utf-8")
        file_handler.setLevel(numeric_level)
        logging.getLogger().addHandler(file_handler)


def get_logger(name: str) -> structlog.stdlib.BoundLogger:
    """Get a structured logger instance.

    Example:
        >>> logger = get_logger(__name__)
        >>> logger.info("epoch_finished", epoch=3, loss=0.41)
    """
    return structlog.get_logger(name)


class RunContext:
    """Binds run-scoped fields for the duration of one CLI command.

    Example:
        >>> with RunContext(run_id="5f0c1a2b9e11", command="train"):
        ...     logger.info("training_started")
    """

    def __init__(self, **fields: Any):
        self.fields = fields

    def __enter__(self) -> "RunContext":
        structlog.contextvars.bind_contextvars(**self.fields)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> bool:
        structlog.contextvars.unbind_contextvars(*self.fields)
        return False
