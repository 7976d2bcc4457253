import logging
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Optional, Sequence, Union

from src.errors import IlpError, IlpOverflowError

from .typing import Assignment, Relation

logger = logging.getLogger(__name__)

LE: Relation = "<="
GE: Relation = ">="
EQ: Relation = "="

RELATIONS = (LE, GE, EQ)

INT64_MIN = -(1 << 63)
INT64_MAX = (1 << 63) - 1


def checked(value: int, what: str = "value") -> int:
    """
    Range-check an integer into signed 64-bit storage.
    """
    if isinstance(value, bool) or not isinstance(value, int):
        raise IlpError(f"{what} must be an integer, got {value!r}")

    if value < INT64_MIN or value > INT64_MAX:
        raise IlpOverflowError(f"{what} {value} does not fit in 64 bits")

    return value


@dataclass(frozen=True)
class DomainInterval:
    lo: int
    hi: int

    def __post_init__(self) -> None:
        checked(self.lo, "domain lower bound")
        checked(self.hi, "domain upper bound")

        if self.lo > self.hi:
            raise IlpError(f"empty domain [{self.lo}, {self.hi}]")

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    def values(self) -> range:
        return range(self.lo, self.hi + 1)

    def __contains__(self, value: int) -> bool:
        return self.lo <= value <= self.hi


@dataclass(frozen=True)
class Variable:
    name: str
    domain: DomainInterval


@dataclass(frozen=True)
class Constraint:
    """
    A sparse row `sum(coeff * x[index]) rel rhs`.

    `coeffs` is kept as a tuple of (index, coefficient) pairs in ascending
    index order; use `Constraint.of` to build one from a mapping.
    """

    coeffs: tuple[tuple[int, int], ...]
    rel: Relation = LE
    rhs: int = 0

    def __post_init__(self) -> None:
        if self.rel not in RELATIONS:
            raise IlpError(f"unknown relation {self.rel!r}")

        checked(self.rhs, "right-hand side")

        previous = None
        for index, coeff in self.coeffs:
            if previous is not None and index <= previous:
                raise IlpError("constraint variables must be distinct and in ascending order")
            if checked(coeff, "coefficient") == 0:
                raise IlpError(f"zero coefficient on variable {index}")
            previous = index

    @classmethod
    def of(
        cls,
        coeffs: Union[Mapping[int, int], Iterable[tuple[int, int]]],
        rel: Relation = LE,
        rhs: int = 0,
    ) -> "Constraint":
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        merged: dict[int, int] = {}

        for index, coeff in items:
            if index in merged:
                raise IlpError(f"variable {index} appears twice in one constraint")
            merged[index] = coeff

        return cls(tuple(sorted(merged.items())), rel, rhs)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(index for index, _ in self.coeffs)

    def coefficient(self, index: int) -> int:
        for var, coeff in self.coeffs:
            if var == index:
                return coeff
        return 0

    def lhs(self, values: Union[Assignment, Sequence[int]]) -> int:
        return sum(coeff * values[index] for index, coeff in self.coeffs)

    def holds(self, values: Union[Assignment, Sequence[int]]) -> bool:
        lhs = self.lhs(values)

        if self.rel == LE:
            return lhs <= self.rhs
        if self.rel == GE:
            return lhs >= self.rhs
        return lhs == self.rhs

    def negated(self) -> "Constraint":
        """
        The row multiplied by -1 with the relation flipped.
        """
        flipped = {LE: GE, GE: LE, EQ: EQ}[self.rel]
        return Constraint(
            tuple((index, checked(-coeff, "coefficient")) for index, coeff in self.coeffs),
            flipped,
            checked(-self.rhs, "right-hand side"),
        )


@dataclass(frozen=True)
class Ilp:
    variables: tuple[Variable, ...]
    constraints: tuple[Constraint, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "constraints", tuple(self.constraints))

        n = len(self.variables)
        for row, constraint in enumerate(self.constraints):
            for index, _ in constraint.coeffs:
                if index < 0 or index >= n:
                    raise IlpError(f"constraint {row} references variable {index} outside [0, {n})")

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def m(self) -> int:
        return len(self.constraints)

    @property
    def domains(self) -> tuple[DomainInterval, ...]:
        return tuple(variable.domain for variable in self.variables)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(variable.name for variable in self.variables)

    def index_of(self, name: str) -> int:
        for index, variable in enumerate(self.variables):
            if variable.name == name:
                return index
        raise IlpError(f"unknown variable {name!r}")


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    witness: Optional[Assignment] = field(default=None, compare=False)

    def __bool__(self) -> bool:
        return self.feasible


def make_ilp(
    domains: Sequence[tuple[int, int]],
    constraints: Iterable[Constraint] = (),
    names: Optional[Sequence[str]] = None,
) -> Ilp:
    """
    Shorthand for building an instance from (lo, hi) pairs.
    """
    if names is None:
        names = [f"x{index}" for index in range(len(domains))]

    variables = tuple(Variable(name, DomainInterval(lo, hi)) for name, (lo, hi) in zip(names, domains))
    return Ilp(variables, tuple(constraints))


def is_normalized(ilp: Ilp) -> bool:
    return all(constraint.rel == LE for constraint in ilp.constraints)


def normalize(ilp: Ilp) -> Ilp:
    if is_normalized(ilp):
        return ilp

    rows = []
    for constraint in ilp.constraints:
        if constraint.rel == LE:
            rows.append(constraint)
        elif constraint.rel == GE:
            rows.append(constraint.negated())
        else:
            rows.append(replace(constraint, rel=LE))
            rows.append(replace(constraint.negated(), rel=LE))

    return Ilp(ilp.variables, tuple(rows))


def check_assignment(ilp: Ilp, values: Assignment) -> bool:
    if set(values) != set(range(ilp.n)):
        raise IlpError(f"assignment covers {len(values)} of {ilp.n} variables")

    for index, variable in enumerate(ilp.variables):
        if values[index] not in variable.domain:
            return False

    return all(constraint.holds(values) for constraint in ilp.constraints)


def domain_size(ilp: Ilp) -> int:
    return max((variable.domain.size for variable in ilp.variables), default=0)


def domain_rows(ilp: Ilp, variables: Iterable[int]) -> tuple[Constraint, ...]:
    """
    The two bound rows `x <= hi` and `-x <= -lo` for each listed variable.
    """
    rows = []
    for index in variables:
        domain = ilp.variables[index].domain
        rows.append(Constraint(((index, 1),), LE, domain.hi))
        rows.append(Constraint(((index, -1),), LE, checked(-domain.lo, "right-hand side")))
    return tuple(rows)


def _require_in_domain(ilp: Ilp, index: int, value: int) -> None:
    if index < 0 or index >= ilp.n:
        raise IlpError(f"variable {index} outside [0, {ilp.n})")

    if value not in ilp.variables[index].domain:
        domain = ilp.variables[index].domain
        raise IlpError(f"value {value} outside the domain [{domain.lo}, {domain.hi}] of {ilp.variables[index].name}")


def pin_variable(ilp: Ilp, index: int, value: int) -> Ilp:
    _require_in_domain(ilp, index, value)

    variables = list(ilp.variables)
    variables[index] = replace(variables[index], domain=DomainInterval(value, value))

    return Ilp(tuple(variables), ilp.constraints)


def substitute_variables(ilp: Ilp, values: Assignment) -> tuple[Ilp, dict[int, int]]:
    """
    Fix several variables at once and drop their columns.

    Returns the residual system and the map from surviving old indices to
    new ones. Rows are kept even when their support becomes empty.
    """
    for index, value in values.items():
        _require_in_domain(ilp, index, value)

    mapping = {}
    for index in range(ilp.n):
        if index not in values:
            mapping[index] = len(mapping)

    variables = tuple(ilp.variables[index] for index in mapping)
    rows = []

    for constraint in ilp.constraints:
        rhs = constraint.rhs
        coeffs = []

        for index, coeff in constraint.coeffs:
            if index in values:
                rhs = checked(rhs - checked(coeff * values[index]), "right-hand side")
            else:
                coeffs.append((mapping[index], coeff))

        rows.append(Constraint(tuple(coeffs), constraint.rel, rhs))

    return Ilp(variables, tuple(rows)), mapping


def substitute_variable(ilp: Ilp, index: int, value: int) -> Ilp:
    residual, _ = substitute_variables(ilp, {index: value})
    return residual


def extract_subsystem(ilp: Ilp, variables: Iterable[int], rows: Iterable[Union[int, Constraint]]) -> tuple[Ilp, dict[int, int]]:
    """
    Restrict to a variable subset and a set of rows (row indices into `ilp`
    or extra constraints over `ilp`'s indices), re-indexed in ascending order.
    """
    mapping = {index: position for position, index in enumerate(sorted(set(variables)))}
    extracted = []

    for row in rows:
        constraint = ilp.constraints[row] if isinstance(row, int) else row

        if not constraint.support <= mapping.keys():
            raise IlpError("extracted row reaches outside the selected variables")

        extracted.append(Constraint(tuple((mapping[index], coeff) for index, coeff in constraint.coeffs), constraint.rel, constraint.rhs))

    return Ilp(tuple(ilp.variables[index] for index in mapping), tuple(extracted)), mapping
