from .document import FORMAT_VERSION, Certificates, parse_instance, serialize_instance
from .pace import read_edge_list, read_pace_td, write_pace_td

__all__ = [
    "FORMAT_VERSION",
    "Certificates",
    "parse_instance",
    "read_edge_list",
    "read_pace_td",
    "serialize_instance",
    "write_pace_td",
]
