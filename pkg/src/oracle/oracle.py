import logging
from typing import Iterator

import numpy as np

from src.caps import Caps, get_caps
from src.errors import IlpOverflowError, ResourceCapError
from src.ilp import EQ, GE, BoundariedIlp, BoundarySet, FeasibilityResult, Ilp, check_assignment
from src.ilp.ilp import INT64_MAX

logger = logging.getLogger(__name__)


def _require_box(ilp: Ilp, caps: Caps) -> None:
    cells = 1
    for variable in ilp.variables:
        cells *= variable.domain.size

    if cells > caps.oracle_box:
        raise ResourceCapError("oracle_box", caps.oracle_box, cells, "domain box too large to enumerate")

    for row, constraint in enumerate(ilp.constraints):
        bound = abs(constraint.rhs) + sum(
            abs(coeff) * max(abs(ilp.variables[index].domain.lo), abs(ilp.variables[index].domain.hi))
            for index, coeff in constraint.coeffs
        )
        if bound > INT64_MAX:
            raise IlpOverflowError(f"row {row} can leave the 64-bit range over the domain box")


def _slices(ilp: Ilp) -> Iterator[tuple[int, np.ndarray]]:
    """
    For each value of the first variable, in order, the mask of satisfying
    assignments of the remaining variables.
    """
    rest = ilp.variables[1:]
    shape = tuple(variable.domain.size for variable in rest)

    for first in ilp.variables[0].domain.values():
        mask = np.ones(shape, dtype=bool)

        for constraint in ilp.constraints:
            lhs = np.zeros((1,) * len(rest), dtype=np.int64)

            for index, coeff in constraint.coeffs:
                if index == 0:
                    lhs = lhs + coeff * first
                    continue

                domain = ilp.variables[index].domain
                axis_shape = [1] * len(rest)
                axis_shape[index - 1] = domain.size
                lhs = lhs + (np.arange(domain.lo, domain.hi + 1, dtype=np.int64) * coeff).reshape(axis_shape)

            if constraint.rel == GE:
                mask &= lhs >= constraint.rhs
            elif constraint.rel == EQ:
                mask &= lhs == constraint.rhs
            else:
                mask &= lhs <= constraint.rhs

        yield first, mask


def brute_feasible(ilp: Ilp, caps: Caps = None) -> FeasibilityResult:
    """
    Enumerate the whole domain box in lexicographic order and return the
    first satisfying assignment.
    """
    _require_box(ilp, get_caps(caps))

    if ilp.n == 0:
        return FeasibilityResult(True, {}) if check_assignment(ilp, {}) else FeasibilityResult(False)

    for first, mask in _slices(ilp):
        hits = np.argwhere(mask)
        if len(hits):
            values = [first] + [
                int(offset) + variable.domain.lo for offset, variable in zip(hits[0], ilp.variables[1:])
            ]
            return FeasibilityResult(True, dict(enumerate(values)))

    return FeasibilityResult(False)


def brute_boundary_set(bilp: BoundariedIlp, caps: Caps = None) -> BoundarySet:
    ilp = bilp.ilp
    _require_box(ilp, get_caps(caps))

    if ilp.n == 0:
        return BoundarySet(0, frozenset({()} if check_assignment(ilp, {}) else set()))

    kept = sorted(index for index in set(bilp.boundary) if index != 0)
    dropped = tuple(index - 1 for index in range(1, ilp.n) if index not in kept)
    tuples = set()

    for first, mask in _slices(ilp):
        projected = np.any(mask, axis=dropped) if dropped else mask

        for hit in np.argwhere(projected):
            values = {0: first}
            values.update(
                {index: int(offset) + ilp.variables[index].domain.lo for index, offset in zip(kept, hit)}
            )
            tuples.add(tuple(values[index] for index in bilp.boundary))

    logger.debug("Oracle boundary set holds %(count)d tuples", {"count": len(tuples)})

    return BoundarySet(bilp.r, frozenset(tuples))
