from .boundaried import BoundariedIlp, BoundarySet, box
from .ilp import (
    EQ,
    GE,
    LE,
    RELATIONS,
    Constraint,
    DomainInterval,
    FeasibilityResult,
    Ilp,
    Variable,
    check_assignment,
    checked,
    domain_rows,
    domain_size,
    extract_subsystem,
    is_normalized,
    make_ilp,
    normalize,
    pin_variable,
    substitute_variable,
    substitute_variables,
)
from .typing import Assignment, Relation

__all__ = [
    "EQ",
    "GE",
    "LE",
    "RELATIONS",
    "Assignment",
    "BoundariedIlp",
    "BoundarySet",
    "Constraint",
    "DomainInterval",
    "FeasibilityResult",
    "Ilp",
    "Relation",
    "Variable",
    "box",
    "check_assignment",
    "checked",
    "domain_rows",
    "domain_size",
    "extract_subsystem",
    "is_normalized",
    "make_ilp",
    "normalize",
    "pin_variable",
    "substitute_variable",
    "substitute_variables",
]
