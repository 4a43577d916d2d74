"""
Logging configuration
"""
import logging
import sys
from pathlib import Path
from typing import Optional

from turnkan.config import settings
from turnkan.utils.exceptions import ConfigurationError, DataIOError

PACKAGE_LOGGER = "turnkan"
CONSOLE_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(filename)s:%(lineno)d - %(message)s"
RUN_LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def resolve_level(level: Optional[str] = None) -> int:
    """Explicit level, else settings.log_level, else DEBUG/INFO from settings.debug"""
    name = level or settings.log_level or ("DEBUG" if settings.debug else "INFO")
    value = logging.getLevelName(name.upper())
    if not isinstance(value, int):
        raise ConfigurationError(f"unknown level {name!r}", "log_level")
    return value


def setup_logging(
    level: Optional[str] = None,
    format_string: Optional[str] = None
) -> None:
    """
    Setup logging configuration

    Args:
        level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        format_string: Custom format string for log messages
    """
    numeric = resolve_level(level)
    logging.basicConfig(level=numeric, format=format_string or CONSOLE_FORMAT, stream=sys.stdout)

    # training logs epoch losses at DEBUG; uvicorn only matters under `turnkan serve`
    for name in (PACKAGE_LOGGER, "uvicorn", "uvicorn.access", "uvicorn.error", "fastapi"):
        logging.getLogger(name).setLevel(numeric)


def attach_run_log(path: Path) -> logging.Handler:
    """
    Mirror package logs into a run directory file

    Raises:
        DataIOError: The file cannot be created
    """
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        handler = logging.FileHandler(path, mode="w", encoding="utf-8")
    except OSError as e:
        raise DataIOError(f"Cannot write to {path.parent}: {e}") from e
    handler.setFormatter(logging.Formatter(RUN_LOG_FORMAT))
    logging.getLogger(PACKAGE_LOGGER).addHandler(handler)
    return handler


def detach_run_log(handler: logging.Handler) -> None:
    logging.getLogger(PACKAGE_LOGGER).removeHandler(handler)
    handler.close()


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger instance

    Args:
        name: Logger name

    Returns:
        Logger instance
    """
    return logging.getLogger(name)
