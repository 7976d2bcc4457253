from .gadget import build_blocking_gadget, replace_boundaried_tw
from .protrusion import ProtrusionDecomposition, validate_protrusion_decomposition
from .reduction import Kernel, PartReport, extract_part, kernelize, reduce_instance

__all__ = [
    "Kernel",
    "PartReport",
    "ProtrusionDecomposition",
    "build_blocking_gadget",
    "extract_part",
    "kernelize",
    "reduce_instance",
    "replace_boundaried_tw",
    "validate_protrusion_decomposition",
]
