import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from src.errors import LpError
from src.ilp import Ilp, domain_rows, normalize

from .typing import Rational

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LpSystem:
    """
    Rows `sum(rows[i][j] * x[j]) <= rhs[i]` over n free rational variables.
    """

    rows: tuple[tuple[Rational, ...], ...]
    rhs: tuple[Rational, ...]
    n: int

    def __post_init__(self) -> None:
        rows = tuple(tuple(Fraction(value) for value in row) for row in self.rows)
        rhs = tuple(Fraction(value) for value in self.rhs)

        if len(rows) != len(rhs):
            raise LpError(f"{len(rows)} rows but {len(rhs)} right-hand sides")
        for index, row in enumerate(rows):
            if len(row) != self.n:
                raise LpError(f"row {index} has {len(row)} entries, expected {self.n}")

        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "rhs", rhs)

    @classmethod
    def from_ilp(cls, ilp: Ilp, with_domain_rows: bool = True) -> "LpSystem":
        """
        The LP relaxation of an instance, including its bound rows.
        """
        constraints = normalize(ilp).constraints
        if with_domain_rows:
            constraints = constraints + domain_rows(ilp, range(ilp.n))

        rows = []
        for constraint in constraints:
            row = [0] * ilp.n
            for index, coeff in constraint.coeffs:
                row[index] = coeff
            rows.append(row)

        return cls(tuple(tuple(row) for row in rows), tuple(c.rhs for c in constraints), ilp.n)

    def satisfied_by(self, point: Sequence[Rational]) -> bool:
        return all(
            sum(coeff * value for coeff, value in zip(row, point)) <= rhs for row, rhs in zip(self.rows, self.rhs)
        )


def _require_bounded(system: LpSystem) -> None:
    for column in range(system.n):
        above = below = False
        for row in system.rows:
            if row[column] and not any(value for index, value in enumerate(row) if index != column):
                above = above or row[column] > 0
                below = below or row[column] < 0
        if not (above and below):
            raise LpError(f"variable {column} is not bounded on both sides by a single-variable row")


def lp_feasible(system: LpSystem) -> tuple[bool, Optional[tuple[Rational, ...]]]:
    """
    Phase-1 simplex over exact rationals with Bland's rule.

    Each free variable is split as x = x_plus - x_minus; rows with a negative
    right-hand side are negated and given an artificial variable. The system
    is feasible iff the artificial sum can be driven to zero.
    """
    _require_bounded(system)

    n = system.n
    m = len(system.rows)
    artificial_rows = [i for i in range(m) if system.rhs[i] < 0]
    width = 2 * n + m + len(artificial_rows)
    first_artificial = 2 * n + m

    tableau: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    basis: list[int] = []

    for i, (row, value) in enumerate(zip(system.rows, system.rhs)):
        line = [Fraction(0)] * width
        sign = -1 if value < 0 else 1

        for j, coeff in enumerate(row):
            line[j] = sign * coeff
            line[n + j] = -sign * coeff
        line[2 * n + i] = Fraction(sign)

        if value < 0:
            column = first_artificial + artificial_rows.index(i)
            line[column] = Fraction(1)
            basis.append(column)
        else:
            basis.append(2 * n + i)

        tableau.append(line)
        rhs.append(sign * value)

    pivots = 0
    while True:
        entering = None
        for j in range(width):
            if j in basis:
                continue
            cost = (1 if j >= first_artificial else 0) - sum(
                tableau[i][j] for i in range(m) if basis[i] >= first_artificial
            )
            if cost < 0:
                entering = j
                break

        if entering is None:
            break

        leaving = None
        for i in range(m):
            if tableau[i][entering] > 0:
                ratio = rhs[i] / tableau[i][entering]
                if leaving is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                    leaving, best = i, ratio

        pivot = tableau[leaving][entering]
        tableau[leaving] = [value / pivot for value in tableau[leaving]]
        rhs[leaving] = rhs[leaving] / pivot

        for i in range(m):
            if i != leaving and tableau[i][entering]:
                factor = tableau[i][entering]
                tableau[i] = [a - factor * b for a, b in zip(tableau[i], tableau[leaving])]
                rhs[i] = rhs[i] - factor * rhs[leaving]

        basis[leaving] = entering
        pivots += 1

    infeasibility = sum(rhs[i] for i in range(m) if basis[i] >= first_artificial)

    logger.debug(
        "Phase one finished after %(pivots)d pivots with residual %(residual)s",
        {"pivots": pivots, "residual": infeasibility},
    )

    if infeasibility != 0:
        return False, None

    values = [Fraction(0)] * width
    for i, column in enumerate(basis):
        values[column] = rhs[i]

    point = tuple(values[j] - values[n + j] for j in range(n))
    if not system.satisfied_by(point):
        raise RuntimeError("phase one produced a point that violates the system")

    return True, point
