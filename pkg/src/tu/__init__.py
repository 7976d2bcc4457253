from .matrix import IntMatrix, bareiss_determinant
from .tu import (
    certify_tu,
    feasible_boundary_tu,
    is_tu_bruteforce,
    is_tu_fastpath,
    replace_boundaried_tu,
    residual_matrix,
    solve_tu_plus_entries,
    tu_boundary_interval,
)

__all__ = [
    "IntMatrix",
    "bareiss_determinant",
    "certify_tu",
    "feasible_boundary_tu",
    "is_tu_bruteforce",
    "is_tu_fastpath",
    "replace_boundaried_tu",
    "residual_matrix",
    "solve_tu_plus_entries",
    "tu_boundary_interval",
]
