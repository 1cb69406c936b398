"""
Report models emitted by the almansi CLI
"""

from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"


class CheckResult(BaseModel):
    """One verification check: a residual compared against a tolerance"""
    name: str
    status: CheckStatus
    residual: Optional[float]
    tolerance: float
    details: Dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def from_residual(cls, name: str, residual: float, tolerance: float, **details) -> "CheckResult":
        status = CheckStatus.PASS if residual <= tolerance else CheckStatus.FAIL
        return cls(name=name, status=status, residual=float(residual), tolerance=tolerance, details=details)

    @property
    def passed(self) -> bool:
        return self.status == CheckStatus.PASS

    class Config:
        use_enum_values = True


class Report(BaseModel):
    tool_version: str
    command: str
    checks: List[CheckResult] = Field(default_factory=list)
    seed: int = 0
    elapsed_ms: int = 0
    result: Optional[Dict[str, Any]] = None

    @property
    def passed(self) -> bool:
        return all(check.status == CheckStatus.PASS.value for check in self.checks)

    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def sorted_checks(self) -> "Report":
        return self.copy(update={"checks": sorted(self.checks, key=lambda c: c.name)})

    def to_json(self) -> str:
        return self.json(sort_keys=True, indent=2)
