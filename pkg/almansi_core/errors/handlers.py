"""
Error handling functions for almansi-core
"""

from typing import Dict, Any
from .exceptions import (
    AlmansiError, DomainError, SingularPointError, CapabilityError, ModeError,
    InputFormatError, ErrorSeverity,
)
from ..logging import get_logger

logger = get_logger(__name__)

_ERROR_MESSAGES = {
    InputFormatError: "input document rejected",
    ModeError: "reconstruction mode not applicable",
    SingularPointError: "point lies on a singular slice",
    CapabilityError: "operation not supported for this function",
    DomainError: "argument out of range",
}


def create_user_friendly_error_message(error: Exception, context: str = "") -> str:
    """Create the one-line message printed on stderr by the CLI"""
    for error_type, prefix in _ERROR_MESSAGES.items():
        if isinstance(error, error_type):
            return f"{prefix}: {error} {context}".strip()
    if isinstance(error, AlmansiError):
        return f"{error} {context}".strip()
    return f"unexpected failure ({type(error).__name__}): {error} {context}".strip()


def handle_check_error(error: Exception, check_name: str, tolerance: float) -> Dict[str, Any]:
    """Turn an exception raised inside a verification check into a failing check record"""
    severity = getattr(error, "severity", ErrorSeverity.HIGH)
    logger.error(f"Check {check_name} raised {type(error).__name__}: {error}")

    return {
        "name": check_name,
        "status": "fail",
        "residual": None,
        "tolerance": tolerance,
        "details": {
            "error": str(error),
            "error_type": type(error).__name__,
            "severity": severity.value,
            "message": create_user_friendly_error_message(error),
        },
    }
