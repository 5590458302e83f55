"""Propositional abduction: explanations, preference orderings and reductions."""

from .core import (
    AbductionInstance,
    Comparison,
    HypothesisSpace,
    InstanceError,
    Ordering,
    OrderingError,
    Theory,
    check_ordering_properties,
    compare,
    validate_instance,
    with_candidate,
)
from .io import ParseError, parse_instance, serialize_instance
from .solver import (
    CapExceeded,
    QueryResult,
    answer,
    enumerate_minimal,
    exists_explanation,
    is_solution,
    query_variable,
    verify_minimal,
)

__all__ = [
    "AbductionInstance",
    "CapExceeded",
    "Comparison",
    "HypothesisSpace",
    "InstanceError",
    "Ordering",
    "OrderingError",
    "ParseError",
    "QueryResult",
    "Theory",
    "answer",
    "check_ordering_properties",
    "compare",
    "enumerate_minimal",
    "exists_explanation",
    "is_solution",
    "parse_instance",
    "query_variable",
    "serialize_instance",
    "validate_instance",
    "verify_minimal",
    "with_candidate",
]
