from typing import Literal, TypeAlias

NodeKind: TypeAlias = Literal["leaf", "join", "introduce", "forget", "constraint"]

Rule: TypeAlias = Literal[
    "tree",
    "vertices",
    "cover",
    "edge",
    "connected",
    "normalized",
    "kind",
    "rows",
    "size",
    "partition",
    "neighbourhood",
    "alpha",
    "protrusion",
]
