from .oracle import brute_boundary_set, brute_feasible

__all__ = [
    "brute_boundary_set",
    "brute_feasible",
]
