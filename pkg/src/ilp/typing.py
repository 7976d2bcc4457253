from typing import Literal, Mapping, TypeAlias

Relation: TypeAlias = Literal["<=", ">=", "="]

Assignment: TypeAlias = Mapping[int, int]
