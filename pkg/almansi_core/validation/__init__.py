"""
Validation utilities for almansi-core
"""

from .validators import (
    load_schema, validate_polynomial_document, validate_point_document, validate_report_document,
    validate_variable_index, validate_index_subset, validate_radii, validate_ball_points,
    MAX_VARIABLES,
)

__all__ = [
    'load_schema', 'validate_polynomial_document', 'validate_point_document',
    'validate_report_document', 'validate_variable_index', 'validate_index_subset',
    'validate_radii', 'validate_ball_points', 'MAX_VARIABLES',
]
