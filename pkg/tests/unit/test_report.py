"""Unit tests for report models and the error-to-check conversion"""

import json

from almansi_core.errors import (
    CapabilityError, DomainError, InputFormatError, SingularPointError, StepSizeError,
    create_user_friendly_error_message, handle_check_error,
)
from almansi_core.types import CheckResult, CheckStatus, Report


class TestCheckResult:
    def test_status_from_residual(self):
        assert CheckResult.from_residual("a", 1e-12, 1e-10).passed
        failing = CheckResult.from_residual("b", 1e-3, 1e-10, points=5)
        assert failing.status == CheckStatus.FAIL.value
        assert failing.details == {"points": 5}

    def test_residual_equal_to_tolerance_passes(self):
        assert CheckResult.from_residual("edge", 0.5, 0.5).passed


class TestReport:
    def test_exit_code(self):
        report = Report(tool_version="0.1.0", command="verify fueter",
                        checks=[CheckResult.from_residual("x", 0.0, 1.0)])
        assert report.exit_code() == 0
        report.checks.append(CheckResult.from_residual("y", 2.0, 1.0))
        assert report.exit_code() == 1

    def test_empty_report_passes(self):
        assert Report(tool_version="0.1.0", command="eval").passed

    def test_sorted_json(self):
        report = Report(tool_version="0.1.0", command="verify all", seed=7, checks=[
            CheckResult.from_residual("09-fueter", 0.0, 1.0),
            CheckResult.from_residual("01-reconstruction", 0.0, 1.0),
        ]).sorted_checks()
        document = json.loads(report.to_json())
        assert [c["name"] for c in document["checks"]] == ["01-reconstruction", "09-fueter"]
        assert document["seed"] == 7
        assert document["checks"][0]["status"] == "pass"
        assert document["result"] is None


class TestErrorHandling:
    def test_check_error_becomes_failing_record(self):
        record = handle_check_error(SingularPointError("beta is zero", variables=(1,)), "05-crf", 1e-10)
        check = CheckResult.parse_obj(record)
        assert not check.passed
        assert check.residual is None
        assert check.details["error_type"] == "SingularPointError"
        assert check.details["severity"] == "medium"

    def test_unexpected_errors_are_high_severity(self):
        record = handle_check_error(ZeroDivisionError("boom"), "x", 1.0)
        assert record["details"]["severity"] == "high"
        assert record["details"]["message"].startswith("unexpected failure (ZeroDivisionError)")

    def test_user_friendly_messages(self):
        assert create_user_friendly_error_message(InputFormatError("bad")) == "input document rejected: bad"
        assert create_user_friendly_error_message(StepSizeError("tiny")) == "argument out of range: tiny"
        assert create_user_friendly_error_message(CapabilityError("no closed form"), "(exp)") == \
            "operation not supported for this function: no closed form (exp)"
        assert create_user_friendly_error_message(DomainError("K not in H")).startswith("argument out of range")
