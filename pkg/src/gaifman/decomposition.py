from dataclasses import dataclass, field
from typing import Mapping, Optional

import networkx as nx

from .gaifman import GaifmanGraph
from .typing import Rule


@dataclass
class ValidationReport:
    violations: list[tuple[Rule, str]] = field(default_factory=list)
    width: Optional[int] = None
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, rule: Rule, detail: str) -> None:
        self.violations.append((rule, detail))

    def rules(self) -> set[Rule]:
        return {rule for rule, _ in self.violations}

    def extend(self, other: "ValidationReport", prefix: str = "") -> None:
        for rule, detail in other.violations:
            self.add(rule, f"{prefix}{detail}")
        self.notes.extend(f"{prefix}{note}" for note in other.notes)


@dataclass(frozen=True)
class TreeDecomposition:
    """
    A tree over integer node ids with a bag of vertices per node.
    """

    bags: Mapping[int, frozenset[int]]
    edges: tuple[tuple[int, int], ...] = ()
    root: Optional[int] = None

    @property
    def width(self) -> int:
        return max((len(bag) for bag in self.bags.values()), default=0) - 1

    def tree(self) -> nx.Graph:
        tree = nx.Graph()
        tree.add_nodes_from(self.bags)
        tree.add_edges_from(self.edges)
        return tree

    def parents(self) -> dict[int, Optional[int]]:
        if self.root is None:
            return {}

        parents: dict[int, Optional[int]] = {self.root: None}
        for parent, child in nx.bfs_edges(self.tree(), self.root):
            parents[child] = parent
        return parents


def validate_tree_decomposition(g: GaifmanGraph, td: TreeDecomposition) -> ValidationReport:
    report = ValidationReport(width=td.width)

    for node, bag in sorted(td.bags.items()):
        stray = sorted(vertex for vertex in bag if vertex < 0 or vertex >= g.n)
        if stray:
            report.add("vertices", f"bag {node} holds unknown vertices {stray}")

    for u, v in td.edges:
        if u not in td.bags or v not in td.bags:
            report.add("tree", f"tree edge ({u}, {v}) references a missing node")

    if not report.ok:
        return report

    tree = td.tree()

    if td.bags:
        if not nx.is_tree(tree):
            report.add("tree", "nodes and edges do not form a tree")
        if td.root is not None and td.root not in td.bags:
            report.add("tree", f"root {td.root} is not a node")
    elif g.n:
        report.add("cover", "decomposition has no bags")

    covered = set().union(*td.bags.values()) if td.bags else set()
    missing = sorted(set(range(g.n)) - covered)
    if missing:
        report.add("cover", f"vertices {missing} are in no bag")

    for u, v in g.edges():
        if not any(u in bag and v in bag for bag in td.bags.values()):
            report.add("edge", f"edge ({u}, {v}) is in no bag")

    for vertex in range(g.n):
        holding = [node for node, bag in td.bags.items() if vertex in bag]
        if holding and not nx.is_connected(tree.subgraph(holding)):
            report.add("connected", f"bags holding vertex {vertex} are not connected")

    return report
