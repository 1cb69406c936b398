"""
Run verification suites and collect one check result per identity
"""

from typing import List

from ..config import SuiteSettings
from ..errors import DomainError, handle_check_error
from ..logging import get_logger
from ..monitoring import CheckTimer, performance_monitor
from ..types import CheckResult
from .base import CHECKS, checks_for
from .corpus import SuiteContext

logger = get_logger(__name__)

SUITE_NAMES = ("reconstruction", "harmonicity", "crf", "fueter", "meanvalue", "poisson", "all")


def run_suite(suite: str, settings: SuiteSettings) -> List[CheckResult]:
    """Every check of the suite, sorted by name; a check that raises becomes a failing record"""
    if suite not in SUITE_NAMES:
        raise DomainError(f"unknown suite {suite!r}, expected one of {', '.join(SUITE_NAMES)}")
    ctx = SuiteContext(settings)
    results = []
    logger.info(f"Running suite {suite} with seed {settings.seed} ({len(checks_for(suite))} checks)")
    for spec in checks_for(suite):
        timer = CheckTimer(f"check {spec.name}")
        try:
            with timer:
                result = spec.run(ctx)
            performance_monitor.record_operation(spec.name, timer.duration, result.passed)
        except Exception as e:
            performance_monitor.record_operation(spec.name, timer.duration, False)
            result = CheckResult.parse_obj(handle_check_error(e, spec.name, spec.tolerance(settings)))
        if not result.passed:
            logger.warning(f"Check {spec.name} failed: residual {result.residual} > tolerance {result.tolerance}")
        results.append(result)
    return sorted(results, key=lambda r: r.name)


def registered_checks() -> List[str]:
    return sorted(CHECKS)
