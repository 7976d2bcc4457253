from .lp import LpSystem, lp_feasible
from .typing import Rational

__all__ = [
    "LpSystem",
    "Rational",
    "lp_feasible",
]
