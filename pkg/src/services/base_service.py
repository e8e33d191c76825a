"""Base service class for all pipeline services."""

from typing import Any, Dict, NoReturn, Optional

from src.utils import get_logger


class BaseService:
    """Base service with common functionality for all services.

    This class provides:
    - Centralized logging
    - Centralized error handling
    """

    def __init__(self, logger_name: Optional[str] = None):
        """Initialize base service.

        Args:
            logger_name: Optional logger name. Defaults to class name.
        """
        self._logger = get_logger(logger_name or self.__class__.__name__)

    def _handle_error(self, error: Exception, context: Optional[Dict[str, Any]] = None) -> NoReturn:
        """Log the active exception with context and re-raise it.

        Must be called from inside an ``except`` block.

        Args:
            error: The exception that occurred
            context: Optional context information
        """
        error_context = dict(context or {})
        error_context["service"] = self.__class__.__name__
        self._logger.error("service_error", error=str(error), error_type=type(error).__name__, **error_context)
        raise
