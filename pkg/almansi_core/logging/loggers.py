"""
Standardized logging configuration for almansi-core
"""
import logging
import os
from typing import Optional

DEFAULT_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"


def get_logger(name: str, level: Optional[str] = None) -> logging.Logger:
    """
    Get a standardized logger for almansi-core modules

    Args:
        name: Logger name (typically __name__)
        level: Optional log level override

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)

    if level:
        numeric_level = getattr(logging, level.upper(), logging.INFO)
        logger.setLevel(numeric_level)

    return logger


def setup_logging(level: Optional[str] = None, format_string: Optional[str] = None):
    """Setup global logging configuration; ALMANSI_LOG_LEVEL is used when no level is given"""
    if level is None:
        level = os.environ.get("ALMANSI_LOG_LEVEL", "INFO")
    numeric_level = getattr(logging, level.upper(), logging.INFO)

    if format_string is None:
        format_string = DEFAULT_FORMAT

    # stderr only: stdout carries the JSON report
    logging.basicConfig(
        level=numeric_level,
        format=format_string,
        force=True,
    )
