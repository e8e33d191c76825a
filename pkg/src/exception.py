"""
Custom exceptions for the MoodNet training and featurization pipeline
"""

from typing import Any, Dict, Optional, Sequence

# Process exit codes used by the CLI error handler
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_TRAINING = 4


class BaseCustomException(Exception):
    """Base class for custom exceptions"""

    def __init__(
        self,
        message: str,
        exit_code: int = EXIT_FAILURE,
        details: Optional[Dict[str, Any]] = None
    ):
        self.message = message
        self.detail = message  # Alias for compatibility
        self.exit_code = exit_code
        self.details = details or {}
        self.error_type = self.__class__.__name__
        super().__init__(self.message)

    def to_dict(self) -> Dict[str, Any]:
        """Serializable diagnostic for CLI output."""
        payload: Dict[str, Any] = {"error": self.error_type, "message": self.message}
        if self.details:
            payload["details"] = self.details
        return payload

    def __reduce__(self):
        # subclass constructors prefix messages and take other arguments
        return _rebuild_exception, (type(self), self.message, self.exit_code, self.details)


def _rebuild_exception(
    cls: type, message: str, exit_code: int, details: Dict[str, Any]
) -> BaseCustomException:
    exc = cls.__new__(cls)
    BaseCustomException.__init__(exc, message, exit_code=exit_code, details=details)
    return exc


# Alias for compatibility with error_handlers
BaseAppException = BaseCustomException


class ShapeError(BaseCustomException):
    """Tensor extents do not satisfy an operation's contract"""

    def __init__(self, message: str, op: Optional[str] = None, **kwargs):
        details = {"op": op} if op else {}
        details.update(kwargs)
        super().__init__(message=message, exit_code=EXIT_DATA, details=details)


class ConfigurationError(BaseCustomException):
    """Configuration error exception"""

    def __init__(self, message: str, config_key: Optional[str] = None, **kwargs):
        details = {"config_key": config_key} if config_key else {}
        details.update(kwargs)
        super().__init__(
            message=f"Configuration error: {message}",
            exit_code=EXIT_CONFIG,
            details=details
        )


class ValidationError(BaseCustomException):
    """Manifest or record validation error"""

    def __init__(self, message: str, field: Optional[str] = None, **kwargs):
        details = {"field": field} if field else {}
        details.update(kwargs)
        super().__init__(message=message, exit_code=EXIT_DATA, details=details)


class InputError(BaseCustomException):
    """Invalid model or featurizer input (empty signal, missing modality, unsupported WAV)"""

    def __init__(self, message: str, source: Optional[str] = None, **kwargs):
        details = {"source": source} if source else {}
        details.update(kwargs)
        super().__init__(message=message, exit_code=EXIT_DATA, details=details)


class LabelError(BaseCustomException):
    """Class label outside the valid range"""

    def __init__(self, label: Any, n_classes: int):
        super().__init__(
            message=f"Label {label!r} is outside [0, {n_classes})",
            exit_code=EXIT_DATA,
            details={"label": label, "n_classes": n_classes}
        )


class FormatError(BaseCustomException):
    """File content does not follow the expected format"""

    def __init__(self, message: str, file_name: Optional[str] = None, **kwargs):
        details = {"file_name": file_name} if file_name else {}
        details.update(kwargs)
        super().__init__(
            message=f"Format error: {message}",
            exit_code=EXIT_DATA,
            details=details
        )


class FileProcessingError(BaseCustomException):
    """File processing error exception"""

    def __init__(self, message: str, file_name: Optional[str] = None, file_type: Optional[str] = None):
        details = {}
        if file_name:
            details["file_name"] = file_name
        if file_type:
            details["file_type"] = file_type
        super().__init__(
            message=f"File processing error: {message}",
            exit_code=EXIT_DATA,
            details=details
        )


class TrainingError(BaseCustomException):
    """Non-finite loss or gradient during optimization"""

    def __init__(self, message: str, **kwargs):
        super().__init__(message=message, exit_code=EXIT_TRAINING, details=dict(kwargs))


class StateError(BaseCustomException):
    """Object used in a state that does not allow the operation"""

    def __init__(self, message: str, **kwargs):
        super().__init__(message=message, exit_code=EXIT_FAILURE, details=dict(kwargs))


# Utility functions for common error scenarios
def raise_shape_mismatch(op: str, expected: Sequence[int], actual: Sequence[int]):
    """Raise a ShapeError for an operand with the wrong extents"""
    raise ShapeError(
        f"{op}: expected shape {tuple(expected)}, got {tuple(actual)}",
        op=op,
        expected=list(expected),
        actual=list(actual),
    )


def raise_invalid_depth(depth: Any):
    """Raise a ConfigurationError for an unsupported tower depth"""
    raise ConfigurationError(
        f"depth must be one of 3, 4, 5, got {depth!r}",
        config_key="model.depth",
    )
