from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from src.errors import IlpError
from src.ilp import Ilp, checked


@dataclass(frozen=True, eq=False)
class IntMatrix:
    entries: np.ndarray

    def __post_init__(self) -> None:
        entries = np.asarray(self.entries, dtype=np.int64)
        if entries.ndim != 2:
            raise IlpError(f"a matrix needs two dimensions, got {entries.ndim}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        if not rows:
            return cls(np.zeros((0, cols or 0), dtype=np.int64))
        return cls(np.array(rows, dtype=np.int64))

    @classmethod
    def from_ilp(cls, ilp: Ilp, columns: Optional[Sequence[int]] = None) -> "IntMatrix":
        """
        Constraint matrix of `ilp`, restricted to `columns` in the given order.
        """
        columns = list(range(ilp.n)) if columns is None else list(columns)
        position = {index: column for column, index in enumerate(columns)}
        entries = np.zeros((ilp.m, len(columns)), dtype=np.int64)

        for row, constraint in enumerate(ilp.constraints):
            for index, coeff in constraint.coeffs:
                if index in position:
                    entries[row, position[index]] = coeff

        return cls(entries)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def is_ternary(self) -> bool:
        return bool(np.all(np.abs(self.entries) <= 1))

    def with_zeroed(self, positions: Iterable[tuple[int, int]]) -> "IntMatrix":
        entries = self.entries.copy()
        for row, col in positions:
            entries[row, col] = 0
        return IntMatrix(entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.entries.shape == other.entries.shape and bool(np.array_equal(self.entries, other.entries))


def bareiss_determinant(square: Sequence[Sequence[int]]) -> int:
    """
    Fraction-free elimination; every intermediate value is an exact minor.
    """
    a = [[int(value) for value in row] for row in square]
    n = len(a)
    if n == 0:
        return 1

    sign = 1
    previous = 1

    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign

        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = checked((a[i][j] * a[k][k] - a[i][k] * a[k][j]) // previous, "determinant minor")

        previous = a[k][k]

    return sign * a[n - 1][n - 1]
