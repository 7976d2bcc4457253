from .decomposition import TreeDecomposition, ValidationReport, validate_tree_decomposition
from .gaifman import GaifmanGraph, build_gaifman
from .nice import NiceGaifmanDecomposition, NiceNode, make_nice, nice_decomposition, validate_nice
from .treewidth import (
    decomposition_from_order,
    min_fill_order,
    minor_min_width,
    treewidth_exact,
    treewidth_heuristic,
)
from .typing import NodeKind, Rule

__all__ = [
    "GaifmanGraph",
    "NiceGaifmanDecomposition",
    "NiceNode",
    "NodeKind",
    "Rule",
    "TreeDecomposition",
    "ValidationReport",
    "build_gaifman",
    "decomposition_from_order",
    "make_nice",
    "min_fill_order",
    "minor_min_width",
    "nice_decomposition",
    "treewidth_exact",
    "treewidth_heuristic",
    "validate_nice",
    "validate_tree_decomposition",
]
