"""
Custom exceptions
"""
from typing import Optional

from fastapi import status
from pydantic import ValidationError


class TurnKANException(Exception):
    """Base exception for turnkan"""

    def __init__(self, message: str, code: Optional[str] = None):
        self.message = message
        self.code = code
        super().__init__(self.message)


class ConfigurationError(TurnKANException):
    """Exception raised for invalid configuration values"""

    def __init__(self, message: str, field: Optional[str] = None):
        self.field = field
        if field:
            message = f"Invalid configuration field '{field}': {message}"
        super().__init__(message, "CONFIG_ERROR")


class ShapeError(TurnKANException):
    """Exception raised when operand shapes do not fit an operation"""

    def __init__(self, op: str, detail: str):
        self.op = op
        super().__init__(f"Shape mismatch in '{op}': {detail}", "SHAPE_ERROR")


class DomainError(TurnKANException):
    """Exception raised when an argument lies outside a function's domain"""

    def __init__(self, message: str):
        super().__init__(message, "DOMAIN_ERROR")


class GradientError(TurnKANException):
    """Exception raised for invalid backward passes"""

    def __init__(self, message: str):
        super().__init__(message, "GRADIENT_ERROR")


class NumericalError(TurnKANException):
    """Exception raised when training produces non-finite values"""

    def __init__(self, message: str, epoch: Optional[int] = None):
        self.epoch = epoch
        if epoch is not None:
            message = f"{message} (epoch {epoch})"
        super().__init__(message, "NUMERICAL_ERROR")


class DataFormatError(TurnKANException):
    """Exception raised for malformed dataset content"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message, "DATA_FORMAT_ERROR")


class DatasetNotFoundError(TurnKANException):
    """Exception raised when a dataset is missing or empty"""

    def __init__(self, message: str = "Dataset not found"):
        super().__init__(message, "DATASET_NOT_FOUND")


class DataIOError(TurnKANException):
    """Exception raised when files cannot be read or written"""

    def __init__(self, message: str):
        super().__init__(message, "IO_ERROR")


class InfeasibleProfileError(TurnKANException):
    """Exception raised when a generator profile cannot meet its targets"""

    def __init__(self, message: str):
        super().__init__(message, "INFEASIBLE_PROFILE")


class InsufficientDataError(TurnKANException):
    """Exception raised when a split or fold lacks required trials or windows"""

    def __init__(self, message: str):
        super().__init__(message, "INSUFFICIENT_DATA")


class StatisticalTestError(TurnKANException):
    """Exception raised when a hypothesis test cannot be computed"""

    def __init__(self, message: str):
        super().__init__(message, "TEST_REJECTED")


class HarnessError(TurnKANException):
    """Exception raised when compared conditions are not paired"""

    def __init__(self, message: str):
        super().__init__(message, "HARNESS_ERROR")


EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2
EXIT_NUMERICAL = 3


def exit_code_from_error(error: Exception) -> int:
    """Map an exception to the CLI exit code"""

    status_map = {
        ConfigurationError: EXIT_CONFIG,
        DatasetNotFoundError: EXIT_IO,
        DataIOError: EXIT_IO,
        DataFormatError: EXIT_IO,
        InsufficientDataError: EXIT_IO,
        NumericalError: EXIT_NUMERICAL,
        GradientError: EXIT_NUMERICAL,
    }

    for error_type, code in status_map.items():
        if isinstance(error, error_type):
            return code
    return EXIT_CONFIG


def status_code_from_error(error: TurnKANException) -> int:
    """Map an exception to the HTTP status of the inference API"""

    status_map = {
        ShapeError: status.HTTP_422_UNPROCESSABLE_ENTITY,
        ConfigurationError: status.HTTP_400_BAD_REQUEST,
        DatasetNotFoundError: status.HTTP_404_NOT_FOUND,
        DataFormatError: status.HTTP_503_SERVICE_UNAVAILABLE,
        DataIOError: status.HTTP_503_SERVICE_UNAVAILABLE,
    }

    for error_type, status_code in status_map.items():
        if isinstance(error, error_type):
            return status_code
    return status.HTTP_500_INTERNAL_SERVER_ERROR


def error_body(error: TurnKANException) -> dict:
    """Error envelope shared by every failing API response"""
    return {
        "success": False,
        "error": {
            "code": error.code or "UNKNOWN_ERROR",
            "message": error.message
        }
    }


def configuration_error_from_validation(error: ValidationError) -> ConfigurationError:
    """Convert the first pydantic validation error into a ConfigurationError"""

    first = error.errors()[0]
    field = ".".join(str(part) for part in first["loc"]) or None
    return ConfigurationError(first["msg"], field)
