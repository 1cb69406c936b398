"""
Verification suites, one check per verified identity
"""

from . import crf, fueter, harmonicity, meanvalue, poisson, reconstruction  # noqa: F401  (registers checks)
from .base import CHECKS, CheckSpec, checks_for, verification_check
from .corpus import SuiteContext, random_point, random_polynomial
from .runner import SUITE_NAMES, registered_checks, run_suite

__all__ = [
    'CHECKS', 'CheckSpec', 'checks_for', 'verification_check', 'SuiteContext', 'random_point',
    'random_polynomial', 'SUITE_NAMES', 'registered_checks', 'run_suite',
]
