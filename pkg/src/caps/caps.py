import logging
from dataclasses import dataclass, fields, replace
from typing import Optional

from config import Config

from src import services
from src.errors import IlpError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Caps:
    """
    Resource caps shared by every module.

    Configuration is via the `caps` section:
    * `treewidth_vertices` (defaults to 20) largest component handed to exact treewidth
    * `tu_dimension` (defaults to 6) largest min(rows, cols) for brute-force TU checks
    * `tu_submatrices` (defaults to 200000) alternative brute-force TU limit on the
    number of square submatrices
    * `dp_table_cells` (defaults to 2^28) largest single DP table
    * `oracle_box` (defaults to 2^24) largest domain box the oracle enumerates

    The `ILPK_CAPS` environment variable overrides any of them with a
    `name=value,name=value` list.
    """

    treewidth_vertices: int = 20
    tu_dimension: int = 6
    tu_submatrices: int = 200_000
    dp_table_cells: int = 1 << 28
    oracle_box: int = 1 << 24

    def __post_init__(self) -> None:
        for field in fields(self):
            value = getattr(self, field.name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise IlpError(f"cap {field.name} must be a positive integer, got {value!r}")

    @classmethod
    def from_config(cls, app_config: Config) -> "Caps":
        values = {}

        for field in fields(cls):
            value = app_config.get(f"caps.{field.name}", None)
            if value is not None:
                values[field.name] = _to_int(field.name, value)

        return cls(**values)

    def with_overrides(self, overrides: Optional[str]) -> "Caps":
        if not overrides:
            return self

        known = {field.name for field in fields(self)}
        values = {}

        for item in overrides.split(","):
            item = item.strip()
            if not item:
                continue

            name, separator, value = item.partition("=")
            name = name.strip()

            if not separator or name not in known:
                raise IlpError(f"ILPK_CAPS entry {item!r} is not of the form name=value with a known cap name")

            values[name] = _to_int(name, value.strip())

        logger.debug("Overriding caps %(values)s", {"values": values})

        return replace(self, **values)


def _to_int(name: str, value) -> int:
    try:
        return int(value)
    except (TypeError, ValueError):
        raise IlpError(f"cap {name} must be an integer, got {value!r}")


def get_caps(caps: Optional[Caps] = None) -> Caps:
    if caps:
        return caps

    return services.get("caps") or Caps()
