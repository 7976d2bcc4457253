from .dp import DpTable, compute_tables, enumerate_feasible_boundary, solve_dp, solve_with_modulator

__all__ = [
    "DpTable",
    "compute_tables",
    "enumerate_feasible_boundary",
    "solve_dp",
    "solve_with_modulator",
]
