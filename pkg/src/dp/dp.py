import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from src.caps import Caps, get_caps
from src.errors import DecompositionError, IlpError, IlpOverflowError, ResourceCapError
from src.gaifman import NiceGaifmanDecomposition, nice_decomposition, validate_nice
from src.ilp import (
    BoundariedIlp,
    BoundarySet,
    FeasibilityResult,
    Ilp,
    check_assignment,
    normalize,
    pin_variable,
    substitute_variables,
)
from src.ilp.ilp import INT64_MAX

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DpTable:
    """
    Feasibility table of one node: axis k ranges over the domain of
    `variables[k]` (ascending variable index), offset by its lower bound.
    """

    node_id: int
    variables: tuple[int, ...]
    lows: tuple[int, ...]
    table: np.ndarray

    def entry(self, values: Sequence[int]) -> bool:
        index = tuple(value - low for value, low in zip(values, self.lows))
        return bool(self.table[index])

    def true_tuples(self) -> list[tuple[int, ...]]:
        return [tuple(int(i) + low for i, low in zip(hit, self.lows)) for hit in np.argwhere(self.table)]


def _check_row_range(ilp: Ilp) -> None:
    for row, constraint in enumerate(ilp.constraints):
        bound = sum(
            abs(coeff) * max(abs(ilp.variables[index].domain.lo), abs(ilp.variables[index].domain.hi))
            for index, coeff in constraint.coeffs
        )
        if bound > INT64_MAX:
            raise IlpOverflowError(f"row {row} can leave the 64-bit range over the domain box")


def _cells(ilp: Ilp, variables: Iterable[int]) -> int:
    cells = 1
    for index in variables:
        cells *= ilp.variables[index].domain.size
    return cells


def _row_mask(ilp: Ilp, row: int, variables: tuple[int, ...]) -> np.ndarray:
    constraint = ilp.constraints[row]
    axes = {index: axis for axis, index in enumerate(variables)}
    lhs = np.zeros((1,) * len(variables), dtype=np.int64)

    for index, coeff in constraint.coeffs:
        domain = ilp.variables[index].domain
        shape = [1] * len(variables)
        shape[axes[index]] = domain.size
        lhs = lhs + (np.arange(domain.lo, domain.hi + 1, dtype=np.int64) * coeff).reshape(shape)

    return lhs <= constraint.rhs


def compute_tables(ilp: Ilp, ngd: NiceGaifmanDecomposition, caps: Caps = None) -> dict[int, DpTable]:
    """
    Bottom-up tables for every node; children are always finished before
    their parent.
    """
    caps = get_caps(caps)
    _check_row_range(ilp)
    tables: dict[int, DpTable] = {}

    for node_id in ngd.post_order():
        node = ngd.nodes[node_id]
        variables = tuple(sorted(node.bag))
        cells = _cells(ilp, variables)

        if cells > caps.dp_table_cells:
            raise ResourceCapError("dp_table_cells", caps.dp_table_cells, cells)

        if node.kind == "leaf":
            table = np.ones((ilp.variables[variables[0]].domain.size,), dtype=bool)
        elif node.kind == "introduce":
            child = tables[node.children[0]].table
            axis = variables.index(node.vertex)
            size = ilp.variables[node.vertex].domain.size
            table = np.repeat(np.expand_dims(child, axis), size, axis=axis)
        elif node.kind == "forget":
            child = tables[node.children[0]]
            table = np.any(child.table, axis=child.variables.index(node.vertex))
        elif node.kind == "join":
            left, right = (tables[child].table for child in node.children)
            table = np.logical_and(left, right)
        else:
            child = tables[node.children[0]].table
            table = np.logical_and(child, _row_mask(ilp, node.row, variables))

        lows = tuple(ilp.variables[index].domain.lo for index in variables)
        tables[node_id] = DpTable(node_id, variables, lows, np.asarray(table, dtype=bool))

    return tables


def _trace_witness(ilp: Ilp, ngd: NiceGaifmanDecomposition, tables: Mapping[int, DpTable]) -> dict[int, int]:
    """
    Walk down from the root, fixing each variable where it is forgotten to
    the lowest value the child table still accepts.
    """
    root = tables[ngd.root]
    values: dict[int, int] = dict(zip(root.variables, root.true_tuples()[0]))
    stack = [ngd.root]

    while stack:
        node = ngd.nodes[stack.pop()]

        if node.kind == "forget":
            child = tables[node.children[0]]
            for value in ilp.variables[node.vertex].domain.values():
                values[node.vertex] = value
                if child.entry([values[index] for index in child.variables]):
                    break

        stack.extend(node.children)

    return values


def _solve(ilp: Ilp, ngd: NiceGaifmanDecomposition, caps: Caps = None) -> FeasibilityResult:
    if ilp.n == 0:
        return FeasibilityResult(True, {}) if check_assignment(ilp, {}) else FeasibilityResult(False)

    tables = compute_tables(ilp, ngd, caps)

    if not tables[ngd.root].table.any():
        return FeasibilityResult(False)

    witness = _trace_witness(ilp, ngd, tables)
    if not check_assignment(ilp, witness):
        raise RuntimeError("reconstructed witness violates the instance")

    return FeasibilityResult(True, witness)


def solve_dp(ilp: Ilp, ngd: NiceGaifmanDecomposition, caps: Caps = None) -> FeasibilityResult:
    if ilp.n == 0:
        return _solve(ilp, ngd, caps)

    report = validate_nice(ilp, ngd)
    if not report.ok:
        raise DecompositionError("invalid nice decomposition", report)

    result = _solve(ilp, ngd, caps)

    logger.debug(
        "DP over %(count)d nodes of width %(width)d: %(verdict)s",
        {"count": len(ngd.nodes), "width": ngd.width, "verdict": "feasible" if result.feasible else "infeasible"},
    )

    return result


def enumerate_feasible_boundary(
    bilp: BoundariedIlp,
    ngd: NiceGaifmanDecomposition,
    caps: Caps = None,
    threads: int = 1,
) -> BoundarySet:
    """
    Pin every boundary tuple in turn and decide the pinned system with the
    shared decomposition. Pinning only narrows domains, so the decomposition
    stays valid for every pinned copy.
    """
    ilp = bilp.ilp
    report = validate_nice(ilp, ngd)
    if not report.ok:
        raise DecompositionError("invalid nice decomposition", report)

    caps = get_caps(caps)
    boxes = [ilp.variables[index].domain.values() for index in bilp.boundary]

    def extendable(values: tuple[int, ...]) -> bool:
        pinned = ilp
        for index, value in zip(bilp.boundary, values):
            pinned = pin_variable(pinned, index, value)
        return _solve(pinned, ngd, caps).feasible

    candidates = list(product(*boxes))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            verdicts = list(executor.map(extendable, candidates))
    else:
        verdicts = [extendable(values) for values in candidates]

    logger.debug(
        "%(feasible)d of %(total)d boundary tuples extend",
        {"feasible": sum(verdicts), "total": len(candidates)},
    )

    return BoundarySet(len(bilp.boundary), frozenset(values for values, ok in zip(candidates, verdicts) if ok))


def solve_with_modulator(ilp: Ilp, mod_vars: Iterable[int], caps: Caps = None) -> FeasibilityResult:
    """
    Branch over every assignment of the modulator and solve each residual by
    DP. The residual's structure is the same in every branch, so one exact
    decomposition serves them all.
    """
    ilp = normalize(ilp)
    modulator = sorted(set(mod_vars))

    for index in modulator:
        if index < 0 or index >= ilp.n:
            raise IlpError(f"modulator variable {index} outside [0, {ilp.n})")

    residual, mapping = substitute_variables(ilp, {index: ilp.variables[index].domain.lo for index in modulator})
    ngd: Optional[NiceGaifmanDecomposition] = None
    if residual.n:
        ngd = nice_decomposition(residual, exact=True, caps=caps)

    inverse = {new: old for old, new in mapping.items()}
    boxes = [ilp.variables[index].domain.values() for index in modulator]
    branches = 0

    for values in product(*boxes):
        branches += 1
        fixed = dict(zip(modulator, values))
        residual, _ = substitute_variables(ilp, fixed)
        result = _solve(residual, ngd, caps)

        if result.feasible:
            witness = dict(fixed)
            witness.update({inverse[index]: value for index, value in result.witness.items()})

            logger.debug("Modulator branch %(branch)d is feasible", {"branch": branches})

            return FeasibilityResult(True, witness)

    logger.debug("All %(count)d modulator branches are infeasible", {"count": branches})

    return FeasibilityResult(False)
