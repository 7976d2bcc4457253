import logging
from dataclasses import dataclass, replace
from typing import Mapping, Optional

from src.caps import Caps
from src.errors import DecompositionError, IlpError
from src.ilp import Ilp, is_normalized

from .decomposition import TreeDecomposition, ValidationReport, validate_tree_decomposition
from .gaifman import build_gaifman
from .treewidth import treewidth_exact, treewidth_heuristic
from .typing import NodeKind

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NiceNode:
    id: int
    kind: NodeKind
    bag: frozenset[int]
    children: tuple[int, ...] = ()
    vertex: Optional[int] = None
    row: Optional[int] = None


@dataclass(frozen=True)
class NiceGaifmanDecomposition:
    """
    A nice tree decomposition of the Gaifman graph whose constraint nodes
    each own one row of the (normalized) system. `rows` maps every row index
    to the id of its constraint node.
    """

    nodes: Mapping[int, NiceNode]
    root: int
    rows: Mapping[int, int]

    @property
    def width(self) -> int:
        return max((len(node.bag) for node in self.nodes.values()), default=0) - 1

    def post_order(self, start: Optional[int] = None) -> list[int]:
        order = []
        stack = [(self.root if start is None else start, False)]

        while stack:
            node_id, expanded = stack.pop()
            if expanded:
                order.append(node_id)
                continue

            stack.append((node_id, True))
            for child in reversed(self.nodes[node_id].children):
                stack.append((child, False))

        return order

    def tree_decomposition(self) -> TreeDecomposition:
        edges = tuple(
            sorted((child, node.id) for node in self.nodes.values() for child in node.children)
        )
        return TreeDecomposition({node_id: node.bag for node_id, node in self.nodes.items()}, edges, self.root)


class _NiceBuilder:
    """
    Builds the leaf/join/introduce/forget tree from a perfect elimination
    order of a chordal graph.

    Vertex v owns the bag {v} plus its later neighbours. Children of v in the
    elimination tree are either absorbed into v's spine as introduce/forget
    runs (when the spine already holds their later neighbours and has room
    for their depth) or built as separate branches and joined.
    """

    def __init__(self, adjacency: Mapping[int, set[int]], order: list[int], width: int) -> None:
        self.width = width
        self.nodes: dict[int, NiceNode] = {}

        position = {vertex: index for index, vertex in enumerate(order)}
        self.higher = {
            vertex: frozenset(u for u in adjacency[vertex] if position[u] > position[vertex]) for vertex in order
        }
        self.children: dict[int, list[int]] = {vertex: [] for vertex in order}
        self.roots = []

        for vertex in order:
            if self.higher[vertex]:
                self.children[min(self.higher[vertex], key=position.__getitem__)].append(vertex)
            else:
                self.roots.append(vertex)

        self.size = {}
        self.height = {}
        for vertex in order:
            kids = self.children[vertex]
            self.size[vertex] = 1 + sum(self.size[c] for c in kids)
            self.height[vertex] = 1 + max((self.height[c] for c in kids), default=0)

    def _add(self, kind: NodeKind, bag: frozenset[int], children: tuple[int, ...] = (), vertex: int = None) -> int:
        node_id = len(self.nodes)
        self.nodes[node_id] = NiceNode(node_id, kind, bag, children, vertex)
        return node_id

    def leaf(self, vertex: int) -> int:
        return self._add("leaf", frozenset({vertex}))

    def introduce(self, child: int, vertex: int) -> int:
        return self._add("introduce", self.nodes[child].bag | {vertex}, (child,), vertex)

    def forget(self, child: int, vertex: int) -> int:
        return self._add("forget", self.nodes[child].bag - {vertex}, (child,), vertex)

    def join(self, left: int, right: int) -> int:
        return self._add("join", self.nodes[left].bag, (left, right))

    def absorb(self, spine: int, vertex: int) -> int:
        spine = self.introduce(spine, vertex)
        for child in self.children[vertex]:
            spine = self.absorb(spine, child)
        return self.forget(spine, vertex)

    def _pick(self, missing: frozenset[int], pending: list[int], current: frozenset[int]) -> int:
        wanted = [(len(self.higher[c] - current), c) for c in pending]
        if wanted:
            _, child = min(wanted)
            return min(self.higher[child] - current)
        return min(missing)

    def grow(self, spine: int, pending: list[int], target: frozenset[int]) -> int:
        pending = list(pending)

        while True:
            current = self.nodes[spine].bag
            ready = next((c for c in pending if self.higher[c] <= current), None)

            if ready is not None:
                pending.remove(ready)
                if len(current) + self.height[ready] <= self.width + 1:
                    spine = self.absorb(spine, ready)
                else:
                    # siblings that fit under the join bag share the branch
                    shared = [c for c in pending if self.higher[c] <= current]
                    pending = [c for c in pending if c not in shared]
                    branch = self.grow(self.build_vertex(ready), shared, current)
                    spine = self.join(spine, branch)
                continue

            missing = target - current
            if not missing:
                return spine

            spine = self.introduce(spine, self._pick(missing, pending, current))

    def build_vertex(self, vertex: int) -> int:
        kids = self.children[vertex]
        tall = [c for c in kids if self.children[c]]

        if tall:
            first = max(tall, key=lambda c: (self.size[c], -c))
            spine = self.build_vertex(first)
            rest = [c for c in kids if c != first]
        else:
            spine = self.leaf(vertex)
            rest = kids

        spine = self.grow(spine, rest, self.higher[vertex] | {vertex})
        return self.forget(spine, vertex)

    def build(self) -> int:
        first = max(self.roots, key=lambda c: (self.size[c], -c))
        spine = self.build_vertex(first)
        return self.grow(spine, [r for r in self.roots if r != first], frozenset())


def _perfect_elimination_order(adjacency: dict[int, set[int]]) -> list[int]:
    remaining = {vertex: set(neighbours) for vertex, neighbours in adjacency.items()}
    order = []

    while remaining:
        for vertex in sorted(remaining):
            neighbours = remaining[vertex]
            if all(neighbours - {u} <= remaining[u] for u in neighbours):
                break
        else:
            raise IlpError("bag completion is not chordal")

        order.append(vertex)
        for u in remaining.pop(vertex):
            remaining[u].discard(vertex)

    return order


def make_nice(ilp: Ilp, td: TreeDecomposition) -> NiceGaifmanDecomposition:
    if not is_normalized(ilp):
        raise IlpError("nice decompositions are built for normalized instances")

    if ilp.n == 0:
        raise IlpError("an instance without variables has no nice decomposition")

    g = build_gaifman(ilp)
    report = validate_tree_decomposition(g, td)
    if not report.ok:
        raise DecompositionError("invalid tree decomposition", report)

    adjacency = {vertex: set() for vertex in range(ilp.n)}
    for bag in td.bags.values():
        for u in bag:
            adjacency[u] |= bag - {u}

    builder = _NiceBuilder(adjacency, _perfect_elimination_order(adjacency), td.width)
    root = builder.build()
    nodes = dict(builder.nodes)

    parents = {child: node.id for node in nodes.values() for child in node.children}
    plain = NiceGaifmanDecomposition(nodes, root, {})
    supports = [constraint.support for constraint in ilp.constraints]
    unassigned = list(range(ilp.m))
    rows = {}

    for node_id in plain.post_order():
        bag = nodes[node_id].bag

        for row in [row for row in unassigned if supports[row] <= bag]:
            spliced = len(nodes)
            nodes[spliced] = NiceNode(spliced, "constraint", bag, (node_id,), row=row)

            parent = parents.get(node_id)
            if parent is None:
                root = spliced
            else:
                children = tuple(spliced if child == node_id else child for child in nodes[parent].children)
                nodes[parent] = replace(nodes[parent], children=children)
                parents[spliced] = parent

            parents[node_id] = spliced
            rows[row] = spliced
            unassigned.remove(row)

    if unassigned:
        raise DecompositionError(f"rows {unassigned} fit in no bag")

    if len(builder.nodes) > 4 * ilp.n:
        logger.warning(
            "Nice decomposition has %(count)d nodes for %(n)d variables",
            {"count": len(builder.nodes), "n": ilp.n},
        )

    logger.debug(
        "Nice decomposition of width %(width)d with %(count)d nodes",
        {"width": td.width, "count": len(nodes)},
    )

    return NiceGaifmanDecomposition(nodes, root, rows)


def validate_nice(ilp: Ilp, ngd: NiceGaifmanDecomposition) -> ValidationReport:
    report = ValidationReport()

    if not is_normalized(ilp):
        report.add("normalized", "constraint rows must all be <= rows")

    nodes = ngd.nodes
    if ngd.root not in nodes:
        report.add("tree", f"root {ngd.root} is not a node")
        return report

    parents: dict[int, int] = {}
    for node_id, node in nodes.items():
        if node.id != node_id:
            report.add("tree", f"node stored under {node_id} claims id {node.id}")
        for child in node.children:
            if child not in nodes:
                report.add("tree", f"node {node_id} has missing child {child}")
            elif child in parents:
                report.add("tree", f"node {child} has two parents")
            else:
                parents[child] = node_id

    if ngd.root in parents:
        report.add("tree", "root has a parent")

    if not report.ok:
        return report

    reachable = ngd.post_order()
    if len(reachable) != len(nodes) or len(set(reachable)) != len(reachable):
        report.add("tree", "nodes are not a single tree under the root")
        return report

    for node in nodes.values():
        children = [nodes[child] for child in node.children]
        _check_kind(report, ilp, node, children)

    report.extend(validate_tree_decomposition(build_gaifman(ilp), ngd.tree_decomposition()))
    report.width = ngd.width

    owners: dict[int, list[int]] = {}
    for node in nodes.values():
        if node.kind == "constraint" and node.row is not None:
            owners.setdefault(node.row, []).append(node.id)

    for row in range(ilp.m):
        holders = owners.get(row, [])
        if len(holders) != 1:
            report.add("rows", f"row {row} is owned by {len(holders)} constraint nodes")
        if ngd.rows.get(row) not in holders:
            report.add("rows", f"row {row} is not mapped to its constraint node")

    for row in sorted(set(owners) | set(ngd.rows)):
        if row < 0 or row >= ilp.m:
            report.add("rows", f"row {row} does not exist")

    limit = 4 * ilp.n + ilp.m
    if len(nodes) > limit:
        report.add("size", f"{len(nodes)} nodes exceed 4n + m = {limit}")

    return report


def _check_kind(report: ValidationReport, ilp: Ilp, node: NiceNode, children: list[NiceNode]) -> None:
    where = f"{node.kind} node {node.id}"

    if node.kind == "leaf":
        if children or len(node.bag) != 1:
            report.add("kind", f"{where} must have no children and one vertex")
    elif node.kind == "join":
        if len(children) != 2 or any(child.bag != node.bag for child in children):
            report.add("kind", f"{where} must have two children with its bag")
    elif node.kind == "introduce":
        if len(children) != 1 or children[0].bag | {node.vertex} != node.bag or node.vertex in children[0].bag:
            report.add("kind", f"{where} must add exactly vertex {node.vertex} to its child's bag")
    elif node.kind == "forget":
        if len(children) != 1 or node.bag | {node.vertex} != children[0].bag or node.vertex in node.bag:
            report.add("kind", f"{where} must drop exactly vertex {node.vertex} from its child's bag")
    elif node.kind == "constraint":
        if len(children) != 1 or children[0].bag != node.bag:
            report.add("kind", f"{where} must have one child with its bag")
        if node.row is None or node.row < 0 or node.row >= ilp.m:
            report.add("rows", f"{where} owns no valid row")
        elif not ilp.constraints[node.row].support <= node.bag:
            report.add("kind", f"{where} does not cover row {node.row}")
    else:
        report.add("kind", f"node {node.id} has unknown kind {node.kind!r}")


def nice_decomposition(ilp: Ilp, exact: bool = False, caps: Caps = None) -> NiceGaifmanDecomposition:
    g = build_gaifman(ilp)
    _, td = treewidth_exact(g, caps) if exact else treewidth_heuristic(g)
    return make_nice(ilp, td)
