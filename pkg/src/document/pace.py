import logging

import networkx as nx

from src.errors import DocumentError
from src.gaifman import TreeDecomposition

logger = logging.getLogger(__name__)


def _lines(text: str):
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if line and not line.startswith(("c", "#")):
            yield number, line.split()


def _ints(words: list[str], number: int) -> list[int]:
    try:
        return [int(word) for word in words]
    except ValueError as err:
        raise DocumentError(f"expected integers, got {' '.join(words)!r}", line=number, column=1) from err


def read_pace_td(text: str) -> TreeDecomposition:
    """
    Parse a PACE `.td` file. Vertices are 1-based in the file and 0-based in
    the result; bag ids are kept. The root is the lowest bag id.
    """
    header = None
    bags = {}
    edges = []

    for number, words in _lines(text):
        if words[0] == "s":
            if header is not None:
                raise DocumentError("second solution line", line=number, column=1)
            if len(words) != 5 or words[1] != "td":
                raise DocumentError("solution line must read 's td <bags> <max bag> <vertices>'", line=number, column=1)
            header = _ints(words[2:], number)
        elif header is None:
            raise DocumentError("content before the solution line", line=number, column=1)
        elif words[0] == "b":
            values = _ints(words[1:], number)
            if not values:
                raise DocumentError("bag line without an id", line=number, column=1)
            if values[0] in bags:
                raise DocumentError(f"duplicate bag {values[0]}", line=number, column=1)
            if any(vertex < 1 or vertex > header[2] for vertex in values[1:]):
                raise DocumentError(f"bag {values[0]} holds a vertex outside 1..{header[2]}", line=number, column=1)
            bags[values[0]] = frozenset(vertex - 1 for vertex in values[1:])
        else:
            values = _ints(words, number)
            if len(values) != 2:
                raise DocumentError("edge line needs two bag ids", line=number, column=1)
            edges.append(tuple(values))

    if header is None:
        raise DocumentError("missing solution line")

    if len(bags) != header[0]:
        raise DocumentError(f"declared {header[0]} bags, found {len(bags)}")

    for u, v in edges:
        if u not in bags or v not in bags:
            raise DocumentError(f"tree edge ({u}, {v}) references an unknown bag")

    return TreeDecomposition(bags, tuple(sorted(edges)), min(bags, default=None))


def write_pace_td(td: TreeDecomposition, n: int) -> str:
    """
    Bags are renumbered 1..k in ascending node id order.
    """
    ids = {node: position for position, node in enumerate(sorted(td.bags), start=1)}
    lines = [f"s td {len(td.bags)} {td.width + 1} {n}"]

    for node, position in ids.items():
        lines.append(" ".join(["b", str(position)] + [str(vertex + 1) for vertex in sorted(td.bags[node])]))

    for u, v in td.edges:
        lines.append(f"{ids[u]} {ids[v]}")

    return "\n".join(lines) + "\n"


def read_edge_list(text: str) -> nx.Graph:
    """
    A vertex count on the first content line, then one `u v` pair per line
    over vertices 1..n. Lines starting with `#` or `c` are comments.
    """
    graph = None

    for number, words in _lines(text):
        values = _ints(words, number)

        if graph is None:
            if len(values) != 1 or values[0] < 0:
                raise DocumentError("first line must hold the vertex count", line=number, column=1)
            graph = nx.Graph()
            graph.add_nodes_from(range(1, values[0] + 1))
            continue

        if len(values) != 2:
            raise DocumentError("edge line needs two vertices", line=number, column=1)

        u, v = values
        if u == v or not graph.has_node(u) or not graph.has_node(v):
            raise DocumentError(f"bad edge ({u}, {v})", line=number, column=1)
        graph.add_edge(u, v)

    if graph is None:
        raise DocumentError("empty edge list")

    logger.debug(
        "Read graph with %(n)d vertices and %(m)d edges",
        {"n": graph.number_of_nodes(), "m": graph.number_of_edges()},
    )

    return graph
