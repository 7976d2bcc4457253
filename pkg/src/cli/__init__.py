from .commands import analyze, generate, kernelize, solve, verify

__all__ = [
    "analyze",
    "generate",
    "kernelize",
    "solve",
    "verify",
]
