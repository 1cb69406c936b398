"""
Error handling and exceptions for almansi-core
"""

from .exceptions import (
    AlmansiError, ErrorSeverity, DomainError, SingularPointError, CapabilityError,
    ModeError, InputFormatError, StepSizeError, DegreeOverflowError,
)
from .handlers import create_user_friendly_error_message, handle_check_error

__all__ = [
    'AlmansiError', 'ErrorSeverity', 'DomainError', 'SingularPointError', 'CapabilityError',
    'ModeError', 'InputFormatError', 'StepSizeError', 'DegreeOverflowError',
    'create_user_friendly_error_message', 'handle_check_error',
]
