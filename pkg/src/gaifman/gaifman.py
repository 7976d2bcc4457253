import logging
from typing import Iterable

import networkx as nx

from src.errors import IlpError
from src.ilp import Ilp

logger = logging.getLogger(__name__)


class GaifmanGraph:
    """
    The primal graph of a constraint system: one vertex per variable and an
    edge between two variables whenever some row has nonzero coefficients on
    both.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()) -> None:
        self.graph = nx.Graph()
        self.graph.add_nodes_from(range(n))

        for u, v in edges:
            if u == v:
                raise IlpError(f"self-loop on vertex {u}")
            self.graph.add_edge(u, v)

    @property
    def n(self) -> int:
        return self.graph.number_of_nodes()

    def neighbors(self, vertex: int) -> frozenset[int]:
        return frozenset(self.graph.adj[vertex])

    def edges(self) -> list[tuple[int, int]]:
        return sorted((min(u, v), max(u, v)) for u, v in self.graph.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return self.graph.has_edge(u, v)

    def max_degree(self) -> int:
        return max((degree for _, degree in self.graph.degree), default=0)

    def adjacency(self) -> dict[int, set[int]]:
        return {vertex: set(self.graph.adj[vertex]) for vertex in range(self.n)}

    def components(self) -> list[list[int]]:
        return sorted(sorted(component) for component in nx.connected_components(self.graph))

    def subgraph(self, vertices: Iterable[int]) -> tuple["GaifmanGraph", dict[int, int]]:
        """
        Induced subgraph relabelled to 0..k-1 in ascending vertex order.
        """
        mapping = {vertex: position for position, vertex in enumerate(sorted(set(vertices)))}
        edges = [(mapping[u], mapping[v]) for u, v in self.graph.subgraph(mapping).edges]

        return GaifmanGraph(len(mapping), edges), mapping

    def neighbourhood(self, vertices: Iterable[int]) -> set[int]:
        vertices = set(vertices)
        return {other for vertex in vertices for other in self.graph.adj[vertex]} - vertices

    def boundary(self, vertices: Iterable[int]) -> set[int]:
        """
        Vertices of the set with at least one neighbour outside it.
        """
        vertices = set(vertices)
        return {vertex for vertex in vertices if any(other not in vertices for other in self.graph.adj[vertex])}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GaifmanGraph):
            return NotImplemented
        return self.n == other.n and self.edges() == other.edges()

    def __repr__(self) -> str:
        return f"GaifmanGraph(n={self.n}, edges={self.edges()})"


def build_gaifman(ilp: Ilp) -> GaifmanGraph:
    edges = set()

    for constraint in ilp.constraints:
        support = sorted(constraint.support)
        for position, u in enumerate(support):
            for v in support[position + 1:]:
                edges.add((u, v))

    logger.debug("Gaifman graph with %(n)d vertices and %(edges)d edges", {"n": ilp.n, "edges": len(edges)})

    return GaifmanGraph(ilp.n, sorted(edges))
