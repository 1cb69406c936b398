"""
Common validation utilities for almansi-core
"""
import json
import math
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Sequence

from jsonschema import Draft202012Validator

from ..errors import DomainError, InputFormatError
from ..logging import get_logger

logger = get_logger(__name__)

SCHEMA_DIR = Path(__file__).resolve().parent.parent / "schemas"
MAX_VARIABLES = 6


@lru_cache(maxsize=None)
def load_schema(name: str) -> Dict[str, Any]:
    """Load a bundled JSON schema by stem name (polynomial, qpoint, report)"""
    with open(SCHEMA_DIR / f"{name}.schema.json", "r", encoding="utf-8") as f:
        return json.load(f)


def _validate_document(document: Any, schema_name: str) -> None:
    validator = Draft202012Validator(load_schema(schema_name))
    errors = sorted(validator.iter_errors(document), key=lambda e: list(e.path))
    if errors:
        first = errors[0]
        location = "/".join(str(p) for p in first.path) or "<root>"
        logger.debug(f"{schema_name} document rejected with {len(errors)} error(s)")
        raise InputFormatError(f"{schema_name} document invalid at {location}: {first.message}",
                               document=schema_name)


def validate_polynomial_document(document: Any) -> Dict[str, Any]:
    """Schema check plus the cross-field rules a schema cannot express"""
    _validate_document(document, "polynomial")
    n = document["n"]
    for index, term in enumerate(document["terms"]):
        if len(term["alpha"]) != n:
            raise InputFormatError(
                f"polynomial term {index} has {len(term['alpha'])} exponents, expected {n}",
                document="polynomial")
        if not all(math.isfinite(c) for c in term["coeff"]):
            raise InputFormatError(f"polynomial term {index} has a non-finite coefficient",
                                   document="polynomial")
    return document


def validate_point_document(document: Any, n: Optional[int] = None) -> list:
    _validate_document(document, "qpoint")
    if n is not None and len(document) != n:
        raise InputFormatError(f"point has {len(document)} coordinates, expected {n}", document="qpoint")
    for coords in document:
        if not all(math.isfinite(c) for c in coords):
            raise InputFormatError("point coordinates must be finite", document="qpoint")
    return document


def validate_report_document(document: Any) -> Dict[str, Any]:
    _validate_document(document, "report")
    return document


def validate_variable_index(h: int, n: int) -> int:
    if not 1 <= n <= MAX_VARIABLES:
        raise DomainError(f"variable count {n} out of range 1..{MAX_VARIABLES}")
    if not isinstance(h, int) or not 1 <= h <= n:
        raise DomainError(f"variable index {h} out of range 1..{n}")
    return h


def validate_index_subset(inner: Iterable[int], outer: Iterable[int]) -> None:
    """K must be contained in H"""
    extra = sorted(set(inner) - set(outer))
    if extra:
        raise DomainError(f"indices {extra} are not contained in {sorted(set(outer))}")


def validate_radii(radii: Sequence[float], m: int) -> list:
    if len(radii) < m:
        raise DomainError(f"need {m} radii, got {len(radii)}")
    for r in radii:
        if not math.isfinite(r) or r < 0:
            raise DomainError(f"radius {r} must be finite and nonnegative")
    return [float(r) for r in radii]


def validate_ball_points(norms: Sequence[float]) -> None:
    """Interior points of the unit ball, |x_h| < 1"""
    for h, norm in enumerate(norms, start=1):
        if not norm < 1.0:
            raise DomainError(f"Poisson point x{h} has |x| = {norm:.6g}, must lie inside the unit ball")
