import logging
import random
from itertools import combinations
from typing import Sequence

import networkx as nx

from src.errors import IlpError
from src.gaifman import TreeDecomposition
from src.ilp import EQ, GE, LE, Constraint, DomainInterval, Ilp, Variable, domain_rows, normalize
from src.protrusion import ProtrusionDecomposition

logger = logging.getLogger(__name__)

PERTURBATIONS = (-1, 0, 0, 1)
COEFFICIENTS = (-2, -1, 1, 2)


def gen_subset_sum(items: Sequence[int], target: int) -> tuple[Ilp, TreeDecomposition]:
    """
    Subset Sum as a chain of partial sums: x_j picks item j and
    y_j = a_j * x_j + y_(j-1), with y_n pinned to the target.

    The y domains span every attainable partial sum, so the path
    decomposition over {x_j, y_(j-1), y_j} has width at most two.
    """
    if not items:
        raise IlpError("subset sum needs at least one item")

    span = DomainInterval(min(0, sum(item for item in items if item < 0)), max(0, sum(item for item in items if item > 0)))
    variables = []
    rows = []

    for j, item in enumerate(items, start=1):
        variables.append(Variable(f"x{j}", DomainInterval(0, 1)))
        variables.append(Variable(f"y{j}", span))

        x, y = 2 * (j - 1), 2 * (j - 1) + 1
        coeffs = {y: 1}
        if item:
            coeffs[x] = -item
        if j > 1:
            coeffs[y - 2] = -1
        rows.append(Constraint.of(coeffs, EQ, 0))

    rows.append(Constraint.of({2 * len(items) - 1: 1}, EQ, target))

    bags = {0: frozenset({0, 1})}
    for j in range(2, len(items) + 1):
        x, y = 2 * (j - 1), 2 * (j - 1) + 1
        bags[j - 1] = frozenset({x, y - 2, y})
    edges = tuple((node - 1, node) for node in range(1, len(items)))

    logger.debug("Generated subset sum over %(count)d items", {"count": len(items)})

    return normalize(Ilp(tuple(variables), tuple(rows))), TreeDecomposition(bags, edges, len(items) - 1)


def gen_hitting_set(
    universe_size: int, sets: Sequence[Sequence[int]], k: int
) -> tuple[Ilp, list[tuple[int, int]]]:
    """
    Hitting Set over elements 1..universe_size with x_(u,F) marking that u
    hits F and x_u selecting u. The returned entries are the -|family|
    coefficients of x_u; zeroing them leaves a totally unimodular matrix.
    """
    if not sets:
        raise IlpError("hitting set needs at least one set")

    family = [frozenset(members) for members in sets]
    for number, members in enumerate(family, start=1):
        if not members:
            raise IlpError(f"set {number} is empty")
        stray = sorted(member for member in members if member < 1 or member > universe_size)
        if stray:
            raise IlpError(f"set {number} holds elements {stray} outside 1..{universe_size}")

    size = len(family)

    def hit(u: int, f: int) -> int:
        return (u - 1) * size + f

    def pick(u: int) -> int:
        return universe_size * size + u - 1

    variables = [
        Variable(f"x{u}_{f + 1}", DomainInterval(0, 1)) for u in range(1, universe_size + 1) for f in range(size)
    ]
    variables.extend(Variable(f"x{u}", DomainInterval(0, 1)) for u in range(1, universe_size + 1))

    rows = [Constraint.of({hit(u, f): -1 for u in members}, LE, -1) for f, members in enumerate(family)]
    modified = []

    for u in range(1, universe_size + 1):
        coeffs = {hit(u, f): 1 for f in range(size)}
        coeffs[pick(u)] = -size
        modified.append((len(rows), pick(u)))
        rows.append(Constraint.of(coeffs, LE, 0))

    rows.append(Constraint.of({pick(u): 1 for u in range(1, universe_size + 1)}, LE, k))

    ilp = Ilp(tuple(variables), tuple(rows))
    return Ilp(ilp.variables, ilp.constraints + domain_rows(ilp, range(ilp.n))), modified


def gen_or_composition(graphs: Sequence[nx.Graph], k: int) -> tuple[Ilp, ProtrusionDecomposition]:
    """
    OR of t Independent Set instances on a shared vertex count.

    The selector s picks a graph: per vertex pair, d_p = 0 exactly when
    s = p, enforced by the telescoping partial sums c. y_ij = 1 forbids
    taking both i and j and is forced to 1 by the selected graph's edges.
    """
    if not graphs:
        raise IlpError("or-composition needs at least one graph")

    n = graphs[0].number_of_nodes()
    for number, graph in enumerate(graphs, start=1):
        if graph.number_of_nodes() != n:
            raise IlpError(f"graph {number} has {graph.number_of_nodes()} vertices, expected {n}")

    t = len(graphs)
    orders = [sorted(graph.nodes) for graph in graphs]
    pairs = list(combinations(range(n), 2))

    variables = [Variable(f"x{i + 1}", DomainInterval(0, 1)) for i in range(n)]
    y = {}
    for i, j in pairs:
        y[i, j] = len(variables)
        variables.append(Variable(f"y{i + 1}_{j + 1}", DomainInterval(0, 1)))
    s = len(variables)
    variables.append(Variable("s", DomainInterval(1, t)))

    rows = [Constraint.of({i: 1 for i in range(n)}, GE, k)]
    rows.extend(Constraint.of({i: 1, j: 1, y[i, j]: 1}, LE, 2) for i, j in pairs)
    parts = []

    for i, j in pairs:
        c = [len(variables) + p for p in range(t)]
        d = [len(variables) + t + p for p in range(t)]
        variables.extend(Variable(f"c{i + 1}_{j + 1}_{p}", DomainInterval(0, 1)) for p in range(1, t + 1))
        variables.extend(Variable(f"d{i + 1}_{j + 1}_{p}", DomainInterval(0, 1)) for p in range(1, t + 1))
        parts.append(frozenset(c + d))

        for p in range(1, t + 1):
            rows.append(Constraint.of({s: 1, d[p - 1]: t}, GE, p))
            rows.append(Constraint.of({s: 1, d[p - 1]: -t}, LE, p))

        rows.append(Constraint.of({c[0]: 1, d[0]: -1}, EQ, 0))
        for p in range(1, t):
            rows.append(Constraint.of({c[p]: 1, c[p - 1]: -1, d[p]: -1}, EQ, -1))
        rows.append(Constraint.of({c[t - 1]: 1}, EQ, 0))

        for p, (graph, order) in enumerate(zip(graphs, orders)):
            if graph.has_edge(order[i], order[j]):
                rows.append(Constraint.of({y[i, j]: 1, d[p]: 1}, GE, 1))
            else:
                rows.append(Constraint.of({y[i, j]: 1, d[p]: -1}, LE, 0))

    ilp = Ilp(tuple(variables), tuple(rows))
    ilp = normalize(Ilp(ilp.variables, ilp.constraints + domain_rows(ilp, range(ilp.n))))

    y0 = frozenset(range(s + 1))
    pd = ProtrusionDecomposition(y0, tuple(parts), 5, max(len(parts), len(y0)))

    logger.debug(
        "Generated or-composition of %(t)d graphs on %(n)d vertices: %(vars)d variables, %(rows)d rows",
        {"t": t, "n": n, "vars": ilp.n, "rows": ilp.m},
    )

    return ilp, pd


def _random_row(rng: random.Random, support: Sequence[int], planted: Sequence[int]) -> Constraint:
    coeffs = {index: rng.choice(COEFFICIENTS) for index in support}
    rhs = sum(coeff * planted[index] for index, coeff in coeffs.items()) + rng.choice(PERTURBATIONS)
    return Constraint.of(coeffs, LE, rhs)


def gen_random_protrusion(k: int, r: int, d: int, parts: int, seed: int) -> tuple[Ilp, ProtrusionDecomposition]:
    """
    A random instance with a shared part of k variables and `parts` parts
    hanging off it. Each part grows as a partial (r-1)-tree from a bag of at
    most r shared variables, so it touches at most r of them and its closure
    has treewidth at most r - 1. Row right-hand sides are set around a
    planted point, so roughly half the instances are feasible.
    """
    if r < 1:
        raise IlpError(f"protrusion order must be at least 1, got {r}")
    if d < 2:
        raise IlpError(f"domain size must be at least 2, got {d}")
    if k < 0 or parts < 0:
        raise IlpError("shared size and part count must be non-negative")

    rng = random.Random(seed)
    domain = DomainInterval(0, d - 1)

    variables = [Variable(f"z{i}", domain) for i in range(k)]
    planted = [rng.randrange(d) for _ in range(k)]
    rows = []

    for _ in range(rng.randint(0, k)):
        support = rng.sample(range(k), rng.randint(1, min(k, 3)))
        rows.append(_random_row(rng, support, planted))

    layout = []
    for p in range(1, parts + 1):
        boundary = rng.sample(range(k), min(r, k)) if r > 1 else []
        bags = [boundary]
        members = []

        for q in range(rng.randint(1, 3)):
            index = len(variables)
            variables.append(Variable(f"w{p}_{q}", domain))
            planted.append(rng.randrange(d))
            members.append(index)

            bag = rng.choice(bags)
            attached = rng.sample(bag, rng.randint(0, min(len(bag), r - 1)))
            bags.append(attached + [index])
            rows.append(_random_row(rng, [index] + attached, planted))

        layout.append(frozenset(members))

    ilp = Ilp(tuple(variables), tuple(rows))
    pd = ProtrusionDecomposition(frozenset(range(k)), tuple(layout), r, max(parts, k))

    logger.debug(
        "Generated random protrusion instance (seed %(seed)d): %(vars)d variables, %(rows)d rows",
        {"seed": seed, "vars": ilp.n, "rows": ilp.m},
    )

    return ilp, pd
