"""
Resilience patterns for dataset I/O.

Feature extraction reads thousands of assets, often from network storage;
transient OSErrors are retried with exponential backoff. Format errors are
never retried.
"""

import logging
from functools import wraps
from typing import Callable, Optional, ParamSpec, TypeVar

from tenacity import (
    retry,
    stop_after_attempt,
    wait_exponential,
    retry_if_exception_type,
    before_sleep_log,
)

P = ParamSpec('P')
T = TypeVar('T')


def retry_on_exception(
    max_attempts: Optional[int] = None,
    wait_min: float = 0.1,
    wait_max: float = 2.0,
    exception_types: tuple[type[Exception], ...] = (OSError,),
):
    """Retry decorator with exponential backoff.

    Args:
        max_attempts: Maximum number of attempts (default: MOODNET_IO_RETRIES)
        wait_min: Minimum wait time between retries (seconds)
        wait_max: Maximum wait time between retries (seconds)
        exception_types: Exception types to retry on

    Returns:
        Decorator function

    Example:
        >>> @retry_on_exception(exception_types=(OSError,))
        ... def read_asset(path):
        ...     ...
    """
    def decorator(func: Callable[P, T]) -> Callable[P, T]:
        log_logger = logging.getLogger(func.__module__)

        @wraps(func)
        def wrapper(*args: P.args, **kwargs: P.kwargs) -> T:
            attempts = max_attempts
            if attempts is None:
                from src.config.settings import get_settings
                attempts = get_settings().io_retries

            retryer = retry(
                stop=stop_after_attempt(attempts),
                wait=wait_exponential(multiplier=wait_min, min=wait_min, max=wait_max),
                retry=retry_if_exception_type(exception_types),
                before_sleep=before_sleep_log(log_logger, logging.WARNING),
                reraise=True,
            )
            return retryer(func)(*args, **kwargs)

        return wrapper

    return decorator
