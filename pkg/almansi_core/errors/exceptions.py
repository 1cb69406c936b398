"""
Exception classes for almansi-core
"""

from typing import Optional
from enum import Enum


class ErrorSeverity(Enum):
    """Error severity levels"""
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"
    CRITICAL = "critical"


class AlmansiError(Exception):
    """Base exception for every failure raised by the library"""
    def __init__(self, message: str, severity: ErrorSeverity = ErrorSeverity.MEDIUM,
                 component: Optional[str] = None):
        super().__init__(message)
        self.severity = severity
        self.component = component


class DomainError(AlmansiError):
    """Arguments outside the domain of an operation (indices, subsets, radii, balls)"""


class SingularPointError(AlmansiError):
    """Spherical derivative requested where beta_h = 0 on a stem without a closed form"""
    def __init__(self, message: str, variables: Optional[tuple] = None, component: Optional[str] = None):
        super().__init__(message, ErrorSeverity.MEDIUM, component)
        self.variables = variables or ()


class CapabilityError(AlmansiError):
    """The operation needs exact information the stem does not carry"""


class ModeError(AlmansiError):
    """Reconstruction mode incompatible with the chosen index set"""


class InputFormatError(AlmansiError):
    """A JSON document does not match its schema"""
    def __init__(self, message: str, document: Optional[str] = None):
        super().__init__(message, ErrorSeverity.LOW, document)
        self.document = document


class StepSizeError(DomainError):
    """Finite-difference step below the cancellation guard"""


class DegreeOverflowError(DomainError):
    """Real-coordinate expansion beyond the supported total degree"""
