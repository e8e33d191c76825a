"""Centralized error handling for CLI commands.

Every command runs inside `run_with_error_handling`, which turns exceptions
into a logged event, a JSON diagnostic on stderr and a process exit code.
"""

import json
import sys
import traceback
from typing import Any, Callable, Dict

from src.exception import EXIT_FAILURE, BaseAppException
from src.utils import get_logger

logger = get_logger(__name__)


def _emit(payload: Dict[str, Any]) -> None:
    print(json.dumps(payload, sort_keys=True, default=str), file=sys.stderr)


def app_exception_handler(exc: BaseAppException) -> int:
    """Handler for application-specific exceptions.

    Args:
        exc: Application exception

    Returns:
        The exception's exit code
    """
    logger.error("command_failed", error_type=exc.error_type, message=exc.message, **exc.details)
    _emit(exc.to_dict())
    return exc.exit_code


def general_exception_handler(exc: Exception) -> int:
    """Handler for unexpected exceptions.

    Args:
        exc: Unexpected exception

    Returns:
        EXIT_FAILURE
    """
    logger.error(
        "unhandled_exception",
        error_type=type(exc).__name__,
        message=str(exc),
        traceback=traceback.format_exc(),
    )
    _emit({"error": type(exc).__name__, "message": str(exc)})
    return EXIT_FAILURE


def run_with_error_handling(handler: Callable[[Any], int], args: Any) -> int:
    try:
        return handler(args)
    except BaseAppException as exc:
        return app_exception_handler(exc)
    except KeyboardInterrupt:
        logger.warning("interrupted")
        return 130
    except Exception as exc:
        return general_exception_handler(exc)
