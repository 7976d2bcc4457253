import logging
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations, product
from math import comb
from typing import Iterable, Optional

import numpy as np

from src.caps import Caps, get_caps
from src.errors import IlpError, ResourceCapError
from src.ilp import (
    BoundariedIlp,
    BoundarySet,
    FeasibilityResult,
    Ilp,
    box,
    check_assignment,
    is_normalized,
    normalize,
    substitute_variables,
)
from src.lp import LpSystem, lp_feasible
from src.protrusion import build_blocking_gadget

from .matrix import IntMatrix, bareiss_determinant

logger = logging.getLogger(__name__)


def _strip_sparse_lines(entries: np.ndarray) -> np.ndarray:
    """
    Delete rows and columns with at most one nonzero until none are left.
    Neither deletion changes whether the matrix is totally unimodular.
    """
    while entries.size:
        rows = np.count_nonzero(entries, axis=1) > 1
        cols = np.count_nonzero(entries, axis=0) > 1
        if rows.all() and cols.all():
            break
        entries = entries[rows][:, cols]
    return entries


def _drop_parallel_lines(entries: np.ndarray) -> np.ndarray:
    """
    Keep one of each set of equal or negated rows (then columns); a square
    submatrix holding two of them is singular.
    """
    for _ in range(2):
        kept = []
        seen = set()
        for line in entries:
            key = tuple(int(value) for value in line)
            negated = tuple(-value for value in key)
            if key in seen or negated in seen:
                continue
            seen.add(key)
            kept.append(line)
        entries = np.array(kept, dtype=np.int64).reshape(len(kept), entries.shape[1]).T
    return entries


def is_tu_bruteforce(matrix: IntMatrix, caps: Caps = None) -> bool:
    """
    Check every square submatrix's determinant, after the exact reductions
    (sparse lines, parallel lines) that do not change the answer.
    """
    caps = get_caps(caps)

    if not matrix.is_ternary():
        return False

    entries = matrix.entries
    while True:
        reduced = _drop_parallel_lines(_strip_sparse_lines(entries))
        if reduced.shape == entries.shape:
            break
        entries = reduced

    rows, cols = entries.shape
    size = min(rows, cols)
    submatrices = sum(comb(rows, k) * comb(cols, k) for k in range(2, size + 1))

    if size > caps.tu_dimension and submatrices > caps.tu_submatrices:
        raise ResourceCapError(
            "tu_dimension",
            caps.tu_dimension,
            size,
            "matrix too large for brute force, use is_tu_fastpath",
        )

    logger.debug(
        "Checking %(count)d square submatrices of a %(rows)dx%(cols)d matrix",
        {"count": submatrices, "rows": rows, "cols": cols},
    )

    grid = entries.tolist()
    for k in range(2, size + 1):
        for chosen_rows in combinations(range(rows), k):
            for chosen_cols in combinations(range(cols), k):
                square = [[grid[i][j] for j in chosen_cols] for i in chosen_rows]
                if bareiss_determinant(square) not in (-1, 0, 1):
                    return False

    return True


def _at_most_one_sign_each(entries: np.ndarray) -> bool:
    return bool(np.all(np.count_nonzero(entries == 1, axis=0) <= 1) and np.all(np.count_nonzero(entries == -1, axis=0) <= 1))


def is_tu_fastpath(matrix: IntMatrix) -> Optional[bool]:
    """
    Sound but incomplete: True when the reduced matrix has at most one +1
    and at most one -1 per column (or per row), None when undecided.
    """
    if not matrix.is_ternary():
        return False

    entries = _strip_sparse_lines(matrix.entries)

    if entries.size == 0:
        return True

    if _at_most_one_sign_each(entries) or _at_most_one_sign_each(entries.T):
        return True

    return None


def certify_tu(matrix: IntMatrix, caps: Caps = None) -> bool:
    verdict = is_tu_fastpath(matrix)
    if verdict is None:
        verdict = is_tu_bruteforce(matrix, caps)
    return verdict


def residual_matrix(bilp: BoundariedIlp) -> IntMatrix:
    """
    Columns of the non-boundary variables, in index order.
    """
    ilp = normalize(bilp.ilp)
    boundary = set(bilp.boundary)
    return IntMatrix.from_ilp(ilp, [index for index in range(ilp.n) if index not in boundary])


def _residual_feasible(ilp: Ilp, fixed: dict[int, int]) -> tuple[bool, Optional[dict[int, int]]]:
    residual, mapping = substitute_variables(ilp, fixed)
    feasible, point = lp_feasible(LpSystem.from_ilp(residual))

    if not feasible:
        return False, None

    inverse = {new: old for old, new in mapping.items()}
    return True, {inverse[index]: value for index, value in enumerate(point)}


def feasible_boundary_tu(bilp: BoundariedIlp, caps: Caps = None, threads: int = 1) -> BoundarySet:
    if not certify_tu(residual_matrix(bilp), caps):
        raise IlpError("the non-boundary columns are not totally unimodular")

    ilp = normalize(bilp.ilp)
    candidates = list(box(bilp.boundary_domains))

    def extendable(values: tuple[int, ...]) -> bool:
        feasible, _ = _residual_feasible(ilp, dict(zip(bilp.boundary, values)))
        return feasible

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            verdicts = list(executor.map(extendable, candidates))
    else:
        verdicts = [extendable(values) for values in candidates]

    logger.debug(
        "%(feasible)d of %(total)d boundary tuples pass the LP",
        {"feasible": sum(verdicts), "total": len(candidates)},
    )

    return BoundarySet(bilp.r, frozenset(values for values, ok in zip(candidates, verdicts) if ok))


def replace_boundaried_tu(bilp: BoundariedIlp, caps: Caps = None, threads: int = 1) -> BoundariedIlp:
    feasible = feasible_boundary_tu(bilp, caps, threads)
    blocked = feasible.complement(bilp.boundary_domains)
    gadget = build_blocking_gadget(bilp.boundary_domains, blocked, [bilp.ilp.names[index] for index in bilp.boundary])

    logger.info(
        "TU replacement blocks %(blocked)d boundary tuples with %(n)d variables",
        {"blocked": len(blocked), "n": gadget.ilp.n},
    )

    return gadget


def tu_boundary_interval(bilp: BoundariedIlp, caps: Caps = None) -> Optional[tuple[int, int]]:
    if bilp.r != 1:
        raise IlpError(f"boundary intervals need exactly one boundary variable, got {bilp.r}")

    values = sorted(values[0] for values in feasible_boundary_tu(bilp, caps).tuples)
    if not values:
        return None

    lo, hi = values[0], values[-1]
    if len(values) != hi - lo + 1:
        raise IlpError(f"feasible boundary values {values} do not form an interval")

    return lo, hi


def solve_tu_plus_entries(
    ilp: Ilp, modified_entries: Iterable[tuple[int, int]], caps: Caps = None
) -> FeasibilityResult:
    """
    Decide a system that is totally unimodular up to a few modified entries:
    branch over the variables whose columns hold a modified entry and decide
    each TU residual by its LP relaxation.
    """
    if not is_normalized(ilp):
        raise IlpError("modified entries refer to rows of a normalized instance")

    branching = sorted({col for _, col in modified_entries})
    for col in branching:
        if col < 0 or col >= ilp.n:
            raise IlpError(f"modified entry column {col} outside [0, {ilp.n})")

    if not certify_tu(residual_matrix(BoundariedIlp(ilp, tuple(branching))), caps):
        raise IlpError("the system minus the modified columns is not totally unimodular")

    branches = 0
    for values in product(*(ilp.variables[col].domain.values() for col in branching)):
        branches += 1
        fixed = dict(zip(branching, values))
        feasible, point = _residual_feasible(ilp, fixed)

        if not feasible:
            continue

        if any(value.denominator != 1 for value in point.values()):
            raise RuntimeError("LP vertex of a TU residual is not integral")

        witness = dict(fixed)
        witness.update({index: int(value) for index, value in point.items()})

        if not check_assignment(ilp, witness):
            raise RuntimeError("combined witness violates the instance")

        logger.debug("Branch %(branch)d of the modified columns is feasible", {"branch": branches})

        return FeasibilityResult(True, witness)

    return FeasibilityResult(False)
