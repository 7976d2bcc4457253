import logging
from typing import Optional, Sequence

from src.caps import Caps, get_caps
from src.errors import ResourceCapError

from .decomposition import TreeDecomposition
from .gaifman import GaifmanGraph

logger = logging.getLogger(__name__)


def decomposition_from_order(g: GaifmanGraph, order: Sequence[int]) -> TreeDecomposition:
    """
    Eliminate vertices in `order`, adding fill edges. Each vertex gets the bag
    of itself plus its remaining neighbours and hangs below the earliest
    eliminated of those neighbours. The last eliminated vertex is the root;
    roots of other components hang below it.
    """
    if not order:
        return TreeDecomposition({}, (), None)

    adjacency = g.adjacency()
    position = {vertex: index for index, vertex in enumerate(order)}
    bags = {}
    edges = []
    roots = []

    for vertex in order:
        neighbours = adjacency.pop(vertex)
        bags[vertex] = frozenset(neighbours | {vertex})

        if neighbours:
            edges.append((vertex, min(neighbours, key=position.__getitem__)))
        else:
            roots.append(vertex)

        for u in neighbours:
            adjacency[u].discard(vertex)
            adjacency[u] |= neighbours - {u}

    root = order[-1]
    edges.extend((other, root) for other in roots if other != root)

    return TreeDecomposition(bags, tuple(sorted(edges)), root)


def min_fill_order(g: GaifmanGraph) -> tuple[int, list[int]]:
    """
    Greedy min-fill elimination, ties broken by lowest vertex index.
    """
    adjacency = g.adjacency()
    order = []
    width = -1

    while adjacency:
        best = None
        best_fill = None

        for vertex in sorted(adjacency):
            neighbours = sorted(adjacency[vertex])
            fill = sum(
                1
                for index, u in enumerate(neighbours)
                for v in neighbours[index + 1:]
                if v not in adjacency[u]
            )
            if best_fill is None or fill < best_fill:
                best, best_fill = vertex, fill
                if fill == 0:
                    break

        neighbours = adjacency.pop(best)
        width = max(width, len(neighbours))
        order.append(best)

        for u in neighbours:
            adjacency[u].discard(best)
            adjacency[u] |= neighbours - {u}

    return width, order


def treewidth_heuristic(g: GaifmanGraph) -> tuple[int, TreeDecomposition]:
    width, order = min_fill_order(g)
    td = decomposition_from_order(g, order)

    logger.debug("Min-fill width %(width)d on %(n)d vertices", {"width": td.width, "n": g.n})

    return td.width, td


def minor_min_width(g: GaifmanGraph) -> int:
    """
    Lower bound: repeatedly contract a minimum-degree vertex into its
    minimum-degree neighbour, keeping the largest minimum degree seen.
    """
    adjacency = g.adjacency()
    bound = 0

    while len(adjacency) > 1:
        vertex = min(adjacency, key=lambda v: (len(adjacency[v]), v))
        neighbours = adjacency.pop(vertex)
        bound = max(bound, len(neighbours))

        if not neighbours:
            continue

        target = min(neighbours, key=lambda u: (len(adjacency[u]), u))
        for u in neighbours:
            adjacency[u].discard(vertex)
        for u in neighbours - {target}:
            adjacency[u].add(target)
            adjacency[target].add(u)

    return bound


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _eliminated_neighbourhood(masks: list[int], eliminated: int, vertex: int) -> int:
    """
    Neighbours of `vertex` in the graph obtained by eliminating the
    vertices of `eliminated`: the non-eliminated vertices reachable through
    eliminated ones.
    """
    seen = 1 << vertex
    reach = 0
    stack = [vertex]

    while stack:
        u = stack.pop()
        fresh = masks[u] & ~seen
        seen |= fresh
        reach |= fresh & ~eliminated
        stack.extend(_bits(fresh & eliminated))

    return reach


def _order_within(masks: list[int], k: int) -> Optional[list[int]]:
    """
    Search for an elimination order of width at most k, memoising the
    eliminated sets already known to fail.
    """
    n = len(masks)
    full = (1 << n) - 1
    failed = set()
    order: list[int] = []

    def search(eliminated: int) -> bool:
        remaining = full & ~eliminated

        if bin(remaining).count("1") <= k + 1:
            order.extend(_bits(remaining))
            return True

        if eliminated in failed:
            return False

        candidates = []
        for vertex in _bits(remaining):
            neighbours = _eliminated_neighbourhood(masks, eliminated, vertex)
            if bin(neighbours).count("1") > k:
                continue

            simplicial = all(
                neighbours & ~(1 << u) & ~_eliminated_neighbourhood(masks, eliminated, u) == 0
                for u in _bits(neighbours)
            )
            if simplicial:
                candidates = [vertex]
                break
            candidates.append(vertex)

        for vertex in candidates:
            order.append(vertex)
            if search(eliminated | (1 << vertex)):
                return True
            order.pop()

        failed.add(eliminated)
        return False

    return order if search(0) else None


def _component_order(g: GaifmanGraph) -> tuple[int, list[int]]:
    upper, upper_order = min_fill_order(g)
    lower = minor_min_width(g)

    if lower >= upper:
        return upper, upper_order

    masks = [sum(1 << u for u in g.neighbors(vertex)) for vertex in range(g.n)]

    for k in range(lower, upper):
        order = _order_within(masks, k)
        if order is not None:
            return k, order

    return upper, upper_order


def treewidth_exact(g: GaifmanGraph, caps: Caps = None) -> tuple[int, TreeDecomposition]:
    """
    Exact treewidth by elimination-ordering search, one connected component
    at a time. The vertex cap applies to each component.
    """
    caps = get_caps(caps)
    width = -1
    order = []

    for component in g.components():
        if len(component) > caps.treewidth_vertices:
            raise ResourceCapError(
                "treewidth_vertices",
                caps.treewidth_vertices,
                len(component),
                "instance too large for exact mode",
            )

        subgraph, mapping = g.subgraph(component)
        vertices = sorted(mapping, key=mapping.__getitem__)
        component_width, component_order = _component_order(subgraph)

        width = max(width, component_width)
        order.extend(vertices[local] for local in component_order)

    td = decomposition_from_order(g, order)

    logger.debug("Exact treewidth %(width)d on %(n)d vertices", {"width": width, "n": g.n})

    return td.width, td
