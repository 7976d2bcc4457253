import json
import logging
from dataclasses import dataclass
from typing import Any, Optional

from src.errors import DocumentError, IlpError
from src.gaifman import NiceGaifmanDecomposition, NiceNode, TreeDecomposition
from src.ilp import RELATIONS, Constraint, DomainInterval, Ilp, Variable
from src.protrusion import ProtrusionDecomposition

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1

NODE_KINDS = ("leaf", "join", "introduce", "forget", "constraint")


@dataclass(frozen=True)
class Certificates:
    """
    Optional structural certificates carried next to an instance. Variables
    are referenced by index here and by name in documents; rows by their
    position in the document's constraint list.
    """

    tree_decomposition: Optional[TreeDecomposition] = None
    nice_decomposition: Optional[NiceGaifmanDecomposition] = None
    protrusion_decomposition: Optional[ProtrusionDecomposition] = None
    boundary: Optional[tuple[int, ...]] = None
    tu_modified_entries: Optional[tuple[tuple[int, int], ...]] = None


def _expect(value: Any, kind: type, path: str) -> Any:
    if kind is int:
        ok = isinstance(value, int) and not isinstance(value, bool)
    else:
        ok = isinstance(value, kind)

    if not ok:
        raise DocumentError(f"expected {kind.__name__}, got {type(value).__name__}", path)

    return value


def _field(obj: dict, key: str, kind: type, path: str) -> Any:
    if key not in obj:
        raise DocumentError(f"missing field {key!r}", path)
    return _expect(obj[key], kind, f"{path}.{key}")


class _Names:
    def __init__(self, names: list[str]) -> None:
        self.index = {name: position for position, name in enumerate(names)}

    def resolve(self, name: Any, path: str) -> int:
        _expect(name, str, path)
        if name not in self.index:
            raise DocumentError(f"unknown variable {name!r}", path)
        return self.index[name]

    def resolve_all(self, names: Any, path: str) -> list[int]:
        return [self.resolve(name, f"{path}[{i}]") for i, name in enumerate(_expect(names, list, path))]


def _parse_variables(items: list) -> list[Variable]:
    variables = []
    seen = set()

    for i, item in enumerate(items):
        path = f"$.variables[{i}]"
        _expect(item, dict, path)

        name = _field(item, "name", str, path)
        if name in seen:
            raise DocumentError(f"duplicate variable name {name!r}", f"{path}.name")
        seen.add(name)

        lo = _field(item, "lo", int, path)
        hi = _field(item, "hi", int, path)
        try:
            variables.append(Variable(name, DomainInterval(lo, hi)))
        except IlpError as err:
            raise DocumentError(str(err), path) from err

    return variables


def _parse_constraints(items: list, names: _Names) -> list[Constraint]:
    constraints = []

    for i, item in enumerate(items):
        path = f"$.constraints[{i}]"
        _expect(item, dict, path)

        coeffs = {}
        for name, coeff in _field(item, "coeffs", dict, path).items():
            where = f"{path}.coeffs.{name}"
            _expect(coeff, int, where)
            if coeff == 0:
                raise DocumentError("zero coefficient", where)
            coeffs[names.resolve(name, where)] = coeff

        rel = _field(item, "rel", str, path)
        if rel not in RELATIONS:
            raise DocumentError(f"unknown relation {rel!r}", f"{path}.rel")

        rhs = _field(item, "rhs", int, path)
        try:
            constraints.append(Constraint.of(coeffs, rel, rhs))
        except IlpError as err:
            raise DocumentError(str(err), path) from err

    return constraints


def _parse_tree_decomposition(item: Any, names: _Names, path: str) -> TreeDecomposition:
    _expect(item, dict, path)

    bags = {}
    for i, bag in enumerate(_field(item, "bags", list, path)):
        where = f"{path}.bags[{i}]"
        _expect(bag, dict, where)
        node = _field(bag, "id", int, where)
        if node in bags:
            raise DocumentError(f"duplicate bag id {node}", where)
        bags[node] = frozenset(names.resolve_all(_field(bag, "vars", list, where), f"{where}.vars"))

    edges = []
    for i, edge in enumerate(_field(item, "edges", list, path)):
        where = f"{path}.edges[{i}]"
        if len(_expect(edge, list, where)) != 2:
            raise DocumentError("a tree edge needs two bag ids", where)
        u, v = (_expect(node, int, where) for node in edge)
        if u not in bags or v not in bags:
            raise DocumentError(f"tree edge ({u}, {v}) references an unknown bag", where)
        edges.append((u, v))

    root = item.get("root")
    if root is not None and _expect(root, int, f"{path}.root") not in bags:
        raise DocumentError(f"root {root} is not a bag", f"{path}.root")

    return TreeDecomposition(bags, tuple(edges), root)


def _parse_nice_decomposition(item: Any, names: _Names, m: int, path: str) -> NiceGaifmanDecomposition:
    _expect(item, dict, path)

    nodes = {}
    rows = {}
    for i, node in enumerate(_field(item, "nodes", list, path)):
        where = f"{path}.nodes[{i}]"
        _expect(node, dict, where)

        node_id = _field(node, "id", int, where)
        if node_id in nodes:
            raise DocumentError(f"duplicate node id {node_id}", where)

        kind = _field(node, "kind", str, where)
        if kind not in NODE_KINDS:
            raise DocumentError(f"unknown node kind {kind!r}", f"{where}.kind")

        vertex = node.get("vertex")
        if vertex is not None:
            vertex = names.resolve(vertex, f"{where}.vertex")

        row = node.get("row")
        if row is not None:
            if not 0 <= _expect(row, int, f"{where}.row") < m:
                raise DocumentError(f"row {row} outside [0, {m})", f"{where}.row")
            rows[row] = node_id

        children = tuple(_expect(child, int, f"{where}.children") for child in _field(node, "children", list, where))
        bag = frozenset(names.resolve_all(_field(node, "bag", list, where), f"{where}.bag"))

        nodes[node_id] = NiceNode(node_id, kind, bag, children, vertex, row)

    for node in nodes.values():
        for child in node.children:
            if child not in nodes:
                raise DocumentError(f"node {node.id} has unknown child {child}", path)

    root = _field(item, "root", int, path)
    if root not in nodes:
        raise DocumentError(f"root {root} is not a node", f"{path}.root")

    return NiceGaifmanDecomposition(nodes, root, rows)


def _parse_protrusion_decomposition(item: Any, names: _Names, path: str) -> ProtrusionDecomposition:
    _expect(item, dict, path)

    y0 = names.resolve_all(_field(item, "y0", list, path), f"{path}.y0")
    parts = [
        frozenset(names.resolve_all(part, f"{path}.parts[{i}]"))
        for i, part in enumerate(_field(item, "parts", list, path))
    ]

    return ProtrusionDecomposition(frozenset(y0), tuple(parts), _field(item, "r", int, path), _field(item, "alpha", int, path))


def _parse_certificates(item: Any, names: _Names, m: int) -> Certificates:
    path = "$.certificates"
    _expect(item, dict, path)

    known = {"tree_decomposition", "nice_decomposition", "protrusion_decomposition", "boundary", "tu_modified_entries"}
    unknown = sorted(set(item) - known)
    if unknown:
        raise DocumentError(f"unknown certificates {unknown}", path)

    fields = {}
    if "tree_decomposition" in item:
        fields["tree_decomposition"] = _parse_tree_decomposition(item["tree_decomposition"], names, f"{path}.tree_decomposition")
    if "nice_decomposition" in item:
        fields["nice_decomposition"] = _parse_nice_decomposition(item["nice_decomposition"], names, m, f"{path}.nice_decomposition")
    if "protrusion_decomposition" in item:
        fields["protrusion_decomposition"] = _parse_protrusion_decomposition(
            item["protrusion_decomposition"], names, f"{path}.protrusion_decomposition"
        )
    if "boundary" in item:
        fields["boundary"] = tuple(names.resolve_all(item["boundary"], f"{path}.boundary"))
    if "tu_modified_entries" in item:
        entries = []
        for i, entry in enumerate(_expect(item["tu_modified_entries"], list, f"{path}.tu_modified_entries")):
            where = f"{path}.tu_modified_entries[{i}]"
            if len(_expect(entry, list, where)) != 2:
                raise DocumentError("an entry is a [row, variable] pair", where)
            row = _expect(entry[0], int, where)
            if not 0 <= row < m:
                raise DocumentError(f"row {row} outside [0, {m})", where)
            entries.append((row, names.resolve(entry[1], where)))
        fields["tu_modified_entries"] = tuple(entries)

    return Certificates(**fields)


def parse_instance(data: bytes) -> tuple[Ilp, Certificates]:
    try:
        document = json.loads(data.decode("utf-8") if isinstance(data, bytes) else data)
    except UnicodeDecodeError as err:
        raise DocumentError(f"not UTF-8: {err.reason}") from err
    except json.JSONDecodeError as err:
        raise DocumentError(err.msg, line=err.lineno, column=err.colno) from err

    _expect(document, dict, "$")

    version = _field(document, "format_version", int, "$")
    if version != FORMAT_VERSION:
        raise DocumentError(f"unsupported format version {version}", "$.format_version")

    variables = _parse_variables(_field(document, "variables", list, "$"))
    names = _Names([variable.name for variable in variables])
    constraints = _parse_constraints(_field(document, "constraints", list, "$"), names)

    certificates = Certificates()
    if "certificates" in document:
        certificates = _parse_certificates(document["certificates"], names, len(constraints))

    logger.debug(
        "Parsed instance with %(vars)d variables and %(rows)d constraints",
        {"vars": len(variables), "rows": len(constraints)},
    )

    return Ilp(tuple(variables), tuple(constraints)), certificates


def _names_of(ilp: Ilp, indices) -> list[str]:
    return [ilp.names[index] for index in sorted(indices)]


def _dump_certificates(ilp: Ilp, certificates: Certificates) -> dict:
    dumped = {}

    td = certificates.tree_decomposition
    if td is not None:
        dumped["tree_decomposition"] = {
            "bags": [{"id": node, "vars": _names_of(ilp, bag)} for node, bag in sorted(td.bags.items())],
            "edges": [list(edge) for edge in td.edges],
            "root": td.root,
        }

    ngd = certificates.nice_decomposition
    if ngd is not None:
        dumped["nice_decomposition"] = {
            "nodes": [
                {
                    "id": node.id,
                    "kind": node.kind,
                    "bag": _names_of(ilp, node.bag),
                    "children": list(node.children),
                    "vertex": None if node.vertex is None else ilp.names[node.vertex],
                    "row": node.row,
                }
                for _, node in sorted(ngd.nodes.items())
            ],
            "root": ngd.root,
        }

    pd = certificates.protrusion_decomposition
    if pd is not None:
        dumped["protrusion_decomposition"] = {
            "y0": _names_of(ilp, pd.y0),
            "parts": [_names_of(ilp, part) for part in pd.parts],
            "r": pd.r,
            "alpha": pd.alpha,
        }

    if certificates.boundary is not None:
        dumped["boundary"] = [ilp.names[index] for index in certificates.boundary]

    if certificates.tu_modified_entries is not None:
        dumped["tu_modified_entries"] = [[row, ilp.names[col]] for row, col in certificates.tu_modified_entries]

    return dumped


def serialize_instance(ilp: Ilp, certificates: Optional[Certificates] = None) -> bytes:
    """
    Canonical JSON: sorted keys, two-space indent, trailing newline.
    """
    document = {
        "format_version": FORMAT_VERSION,
        "variables": [{"name": v.name, "lo": v.domain.lo, "hi": v.domain.hi} for v in ilp.variables],
        "constraints": [
            {
                "coeffs": {ilp.names[index]: coeff for index, coeff in constraint.coeffs},
                "rel": constraint.rel,
                "rhs": constraint.rhs,
            }
            for constraint in ilp.constraints
        ],
    }

    if certificates is not None:
        dumped = _dump_certificates(ilp, certificates)
        if dumped:
            document["certificates"] = dumped

    return (json.dumps(document, sort_keys=True, indent=2) + "\n").encode("utf-8")
