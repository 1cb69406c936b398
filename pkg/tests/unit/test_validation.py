"""Unit tests for document validation and argument range checks"""

import pytest

from almansi_core.errors import DomainError, InputFormatError
from almansi_core.validation import (
    load_schema, validate_ball_points, validate_index_subset, validate_point_document,
    validate_polynomial_document, validate_radii, validate_report_document, validate_variable_index,
)


class TestDocuments:
    def test_schemas_are_bundled(self):
        for name in ("polynomial", "qpoint", "report"):
            assert load_schema(name)["$schema"].startswith("https://json-schema.org/")

    def test_polynomial_document(self):
        document = {"n": 2, "terms": [{"alpha": [1, 1], "coeff": [1, 0, 0, 0]}]}
        assert validate_polynomial_document(document) is document

    @pytest.mark.parametrize("document", [
        {"n": 2},
        {"n": 7, "terms": []},
        {"n": 1, "terms": [{"alpha": [-1], "coeff": [1, 0, 0, 0]}]},
        {"n": 1, "terms": [{"alpha": [1], "coeff": [1, 0, 0]}]},
        {"n": 1, "terms": [{"alpha": [1], "coeff": [1, 0, 0, 0], "extra": True}]},
        {"n": 2, "terms": [{"alpha": [1], "coeff": [1, 0, 0, 0]}]},
    ])
    def test_polynomial_document_rejected(self, document):
        with pytest.raises(InputFormatError) as info:
            validate_polynomial_document(document)
        assert info.value.document == "polynomial"

    def test_point_document(self):
        assert validate_point_document([[0, 1, 0, 0], [1, 0, 0, 0]], 2)
        with pytest.raises(InputFormatError):
            validate_point_document([], None)
        with pytest.raises(InputFormatError):
            validate_point_document([[0, 1, 0, 0]], 2)

    def test_report_document(self):
        report = {"tool_version": "0.1.0", "command": "eval", "checks": [], "seed": 0, "elapsed_ms": 3}
        assert validate_report_document(report) is report
        with pytest.raises(InputFormatError):
            validate_report_document({**report, "seed": "zero"})
        check = {"name": "x", "status": "maybe", "residual": None, "tolerance": 1.0, "details": {}}
        with pytest.raises(InputFormatError):
            validate_report_document({**report, "checks": [check]})


class TestRanges:
    def test_variable_index(self):
        assert validate_variable_index(2, 3) == 2
        with pytest.raises(DomainError, match="out of range 1..3"):
            validate_variable_index(4, 3)
        with pytest.raises(DomainError):
            validate_variable_index(1, 7)

    def test_index_subset(self):
        validate_index_subset([1], [1, 2])
        with pytest.raises(DomainError):
            validate_index_subset([3], [1, 2])

    def test_radii(self):
        assert validate_radii([1, 0.5, 0], 2) == [1.0, 0.5, 0.0]
        with pytest.raises(DomainError):
            validate_radii([1.0], 2)
        with pytest.raises(DomainError):
            validate_radii([1.0, float("inf")], 2)

    def test_ball_points(self):
        validate_ball_points([0.0, 0.99])
        with pytest.raises(DomainError):
            validate_ball_points([0.5, 1.0])
