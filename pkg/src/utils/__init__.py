from .logging import (
    get_logger,
    setup_logging,
)

from .structured_logging import (
    setup_structured_logging,
    RunContext,
)

from .resilience import retry_on_exception

__all__ = [
    # Logging
    "get_logger",
    "setup_logging",
    # Structured logging
    "setup_structured_logging",
    "RunContext",
    # Resilience
    "retry_on_exception",
]
