from .caps import Caps, get_caps

__all__ = [
    "Caps",
    "get_caps",
]
