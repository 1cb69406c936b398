"""
Registry of verification checks, one per verified identity
"""

from dataclasses import dataclass
from typing import Callable, Dict, List

from ..config import SuiteSettings
from ..types import CheckResult
from .corpus import SuiteContext

CheckFunction = Callable[[SuiteContext], CheckResult]
ToleranceLookup = Callable[[SuiteSettings], float]


@dataclass(frozen=True)
class CheckSpec:
    name: str
    suite: str
    tolerance: ToleranceLookup
    run: CheckFunction


CHECKS: Dict[str, CheckSpec] = {}


def verification_check(name: str, suite: str, tolerance: ToleranceLookup):
    """Register a check under its report name"""
    def decorator(func: CheckFunction) -> CheckFunction:
        if name in CHECKS:
            raise ValueError(f"check {name} registered twice")
        CHECKS[name] = CheckSpec(name, suite, tolerance, func)
        return func
    return decorator


def checks_for(suite: str) -> List[CheckSpec]:
    return sorted((c for c in CHECKS.values() if suite in ("all", c.suite)), key=lambda c: c.name)


def relative(residual: float, scale: float) -> float:
    return residual / max(1.0, scale)
