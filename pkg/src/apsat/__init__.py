"""Arithmetic-progression avoiding and saturating sets in finite abelian groups."""

__version__ = "0.1.0"

from .field import Field, VectorSpace, make_field
from .groups import (
    HALF_HALF,
    ONE_MINUS_ONE,
    ONE_ONE,
    THREE_AP,
    TWO_MINUS_ONE,
    FieldScalar,
    Group,
    PointSet,
    WeightFamily,
    WeightPair,
    cyclic,
    make_group,
)
from .groupspec import format_group_spec, parse_group_spec
from .predicates import Kind, Predicate, VerificationReport, verify

__all__ = [
    "Field", "VectorSpace", "make_field", "HALF_HALF", "ONE_MINUS_ONE", "ONE_ONE", "THREE_AP",
    "TWO_MINUS_ONE", "FieldScalar", "Group", "PointSet", "WeightFamily", "WeightPair", "cyclic",
    "make_group", "format_group_spec", "parse_group_spec", "Kind", "Predicate",
    "VerificationReport", "verify",
]
