from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

from src.errors import IlpError

from .ilp import DomainInterval, Ilp


@dataclass(frozen=True)
class BoundariedIlp:
    """
    A system with r distinguished boundary variables through which it meets
    the rest of an instance.
    """

    ilp: Ilp
    boundary: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "boundary", tuple(self.boundary))

        if len(set(self.boundary)) != len(self.boundary):
            raise IlpError("boundary variables must be distinct")

        for index in self.boundary:
            if index < 0 or index >= self.ilp.n:
                raise IlpError(f"boundary variable {index} outside [0, {self.ilp.n})")

    @property
    def r(self) -> int:
        return len(self.boundary)

    @property
    def boundary_domains(self) -> tuple[DomainInterval, ...]:
        return tuple(self.ilp.variables[index].domain for index in self.boundary)


def box(domains: Sequence[DomainInterval]) -> Iterator[tuple[int, ...]]:
    """
    All tuples of the domain box in lexicographic order.
    """
    return product(*(domain.values() for domain in domains))


@dataclass(frozen=True)
class BoundarySet:
    r: int
    tuples: frozenset[tuple[int, ...]]

    def __post_init__(self) -> None:
        object.__setattr__(self, "tuples", frozenset(tuple(values) for values in self.tuples))

        for values in self.tuples:
            if len(values) != self.r:
                raise IlpError(f"tuple {values} does not have arity {self.r}")

    def sorted(self) -> list[tuple[int, ...]]:
        return sorted(self.tuples)

    def complement(self, domains: Sequence[DomainInterval]) -> "BoundarySet":
        if len(domains) != self.r:
            raise IlpError(f"expected {self.r} boundary domains, got {len(domains)}")

        return BoundarySet(self.r, frozenset(values for values in box(domains) if values not in self.tuples))

    def __contains__(self, values: tuple[int, ...]) -> bool:
        return tuple(values) in self.tuples

    def __len__(self) -> int:
        return len(self.tuples)
