"""Init validate_utils."""
from .check import DEFAULT_GEOMETRIES, Check, CheckResult

__all__ = ["Check", "CheckResult", "DEFAULT_GEOMETRIES"]
