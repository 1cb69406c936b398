"""
Logging utilities for almansi-core
"""

from .loggers import get_logger, setup_logging, DEFAULT_FORMAT

__all__ = [
    'get_logger', 'setup_logging', 'DEFAULT_FORMAT'
]
