import random

import networkx as nx
import pytest

from src.caps import Caps
from src.errors import DecompositionError, IlpError, ResourceCapError
from src.gaifman import (
    GaifmanGraph,
    NiceGaifmanDecomposition,
    NiceNode,
    TreeDecomposition,
    build_gaifman,
    decomposition_from_order,
    make_nice,
    minor_min_width,
    nice_decomposition,
    treewidth_exact,
    treewidth_heuristic,
    validate_nice,
    validate_tree_decomposition,
)
from src.generators import gen_subset_sum
from src.ilp import LE, Constraint, make_ilp, normalize, pin_variable

from .factories import random_ilp


def _grid(rows: int, cols: int) -> GaifmanGraph:
    grid = nx.convert_node_labels_to_integers(nx.grid_2d_graph(rows, cols), ordering="sorted")
    return GaifmanGraph(grid.number_of_nodes(), grid.edges)


class TestBuildGaifman:
    def test_every_row_support_is_a_clique(self):
        ilp = make_ilp([(0, 1)] * 4, [Constraint.of({0: 1, 1: 1, 2: 1}, LE, 2), Constraint.of({3: 1}, LE, 0)])
        g = build_gaifman(ilp)

        assert g.edges() == [(0, 1), (0, 2), (1, 2)]
        assert g.components() == [[0, 1, 2], [3]]

    def test_it_rejects_self_loops(self):
        with pytest.raises(IlpError):
            GaifmanGraph(2, [(1, 1)])

    def test_boundary_holds_vertices_with_outside_neighbours(self):
        g = GaifmanGraph(4, [(0, 1), (1, 2), (2, 3)])

        assert g.neighbourhood({1, 2}) == {0, 3}
        assert g.boundary({0, 1, 2}) == {2}

    def test_subgraph_relabels_in_order(self):
        g = GaifmanGraph(4, [(0, 3), (1, 3)])
        sub, mapping = g.subgraph([3, 1])

        assert mapping == {1: 0, 3: 1}
        assert sub.edges() == [(0, 1)]

    def test_pinning_and_normalizing_keep_the_graph(self):
        rng = random.Random(61)

        for _ in range(60):
            ilp = random_ilp(rng, rng.randint(1, 8), 3)
            index = rng.randrange(ilp.n)
            g = build_gaifman(ilp)

            for other in (pin_variable(ilp, index, rng.randint(0, 2)), normalize(ilp)):
                same = build_gaifman(other)
                assert same.n == g.n
                assert same.edges() == g.edges()


class TestTreewidth:
    @pytest.mark.parametrize(
        "graph, width",
        [
            (nx.path_graph(6), 1),
            (nx.cycle_graph(6), 2),
            (nx.complete_graph(5), 4),
            (nx.empty_graph(3), 0),
            (nx.petersen_graph(), 4),
        ],
    )
    def test_exact_width_of_known_graphs(self, graph, width):
        g = GaifmanGraph(graph.number_of_nodes(), graph.edges)
        exact, td = treewidth_exact(g)

        assert exact == width
        assert validate_tree_decomposition(g, td).ok

    def test_exact_width_of_a_grid(self):
        exact, _ = treewidth_exact(_grid(3, 4))

        assert exact == 3

    def test_bounds_bracket_the_exact_width(self):
        rng = random.Random(11)

        for _ in range(30):
            graph = nx.gnp_random_graph(9, 0.4, seed=rng.randrange(1 << 30))
            g = GaifmanGraph(9, graph.edges)
            exact, _ = treewidth_exact(g)
            heuristic, td = treewidth_heuristic(g)

            assert minor_min_width(g) <= exact <= heuristic
            assert validate_tree_decomposition(g, td).ok

    def test_the_cap_applies_per_component(self):
        g = GaifmanGraph(8, [(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (6, 7)])

        width, _ = treewidth_exact(g, Caps(treewidth_vertices=4))
        assert width == 1

        with pytest.raises(ResourceCapError):
            treewidth_exact(g, Caps(treewidth_vertices=3))

    def test_decomposition_from_any_order_is_valid(self):
        g = GaifmanGraph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])

        td = decomposition_from_order(g, [2, 4, 0, 1, 3])

        assert validate_tree_decomposition(g, td).ok


class TestValidateTreeDecomposition:
    def test_it_reports_uncovered_edges(self):
        g = GaifmanGraph(3, [(0, 1), (1, 2)])
        td = TreeDecomposition({0: frozenset({0, 1}), 1: frozenset({2})}, ((0, 1),), 0)

        assert validate_tree_decomposition(g, td).rules() == {"edge"}

    def test_it_reports_disconnected_occurrences(self):
        g = GaifmanGraph(3, [(0, 1), (1, 2)])
        td = TreeDecomposition(
            {0: frozenset({0, 1}), 1: frozenset({2}), 2: frozenset({1, 2})}, ((0, 1), (1, 2)), 0
        )

        assert "connected" in validate_tree_decomposition(g, td).rules()

    def test_it_reports_cycles(self):
        g = GaifmanGraph(2, [(0, 1)])
        td = TreeDecomposition(
            {0: frozenset({0, 1}), 1: frozenset({0, 1}), 2: frozenset({0, 1})}, ((0, 1), (1, 2), (2, 0)), 0
        )

        assert "tree" in validate_tree_decomposition(g, td).rules()


class TestMakeNice:
    def test_a_single_domain_row_gives_a_leaf_and_a_constraint(self):
        ilp = make_ilp([(0, 1)], [Constraint.of({0: 1}, LE, 1)])
        ngd = nice_decomposition(ilp)

        kinds = sorted(node.kind for node in ngd.nodes.values())
        assert kinds == ["constraint", "forget", "leaf"]
        assert validate_nice(ilp, ngd).ok

    def test_the_subset_sum_path_decomposition_validates(self):
        ilp, td = gen_subset_sum([3, 5, -2, 7], 8)
        ngd = make_nice(ilp, td)

        report = validate_nice(ilp, ngd)
        assert report.ok
        assert ngd.width == 2

    def test_random_instances_forget_each_variable_once(self):
        rng = random.Random(5)

        for _ in range(100):
            ilp = normalize(random_ilp(rng, rng.randint(1, 10), 2))
            ngd = nice_decomposition(ilp)
            report = validate_nice(ilp, ngd)

            assert report.ok, report.violations
            kinds = [node.kind for node in ngd.nodes.values()]
            assert kinds.count("forget") == ilp.n
            assert kinds.count("leaf") == kinds.count("join") + 1
            assert kinds.count("constraint") == ilp.m
            assert len(ngd.nodes) <= 4 * ilp.n + ilp.m

    def test_pendants_on_a_clique_stay_within_the_node_bound(self):
        # each pendant sees a different four of the five clique vertices
        rows = [Constraint.of({i: 1 for i in range(5)}, LE, 4)]
        for pendant in range(5):
            rows.append(Constraint.of({5 + pendant: 1, **{i: 1 for i in range(5) if i != pendant}}, LE, 4))
        ilp = make_ilp([(0, 1)] * 10, rows)

        for exact in (False, True):
            ngd = nice_decomposition(ilp, exact=exact)

            assert validate_nice(ilp, ngd).ok
            assert len(ngd.nodes) <= 4 * ilp.n + ilp.m

    def test_validation_flags_too_many_nodes(self):
        ilp = make_ilp([(0, 1)])
        one = frozenset({0})
        nodes = {
            0: NiceNode(0, "leaf", one),
            1: NiceNode(1, "leaf", one),
            2: NiceNode(2, "leaf", one),
            3: NiceNode(3, "join", one, (0, 1)),
            4: NiceNode(4, "join", one, (3, 2)),
            5: NiceNode(5, "forget", frozenset(), (4,), 0),
        }

        report = validate_nice(ilp, NiceGaifmanDecomposition(nodes, 5, {}))

        assert report.rules() == {"size"}

    def test_a_dense_star_of_cliques_validates(self):
        rows = [Constraint.of({0: 1, 1: 1, 2: 1, 3: 1}, LE, 3)]
        for leaf in range(4, 16):
            rows.append(Constraint.of({leaf: 1, 1 + leaf % 3: 1, 0: 1}, LE, 2))
        ilp = make_ilp([(0, 1)] * 16, rows)

        ngd = nice_decomposition(ilp)

        assert validate_nice(ilp, ngd).ok

    def test_every_row_has_one_constraint_node(self):
        ilp, _ = gen_subset_sum([1, 2, 3], 4)
        ngd = nice_decomposition(ilp)

        owners = sorted(node.row for node in ngd.nodes.values() if node.kind == "constraint")
        assert owners == list(range(ilp.m))
        assert all(ilp.constraints[row].support <= ngd.nodes[ngd.rows[row]].bag for row in range(ilp.m))

    def test_it_refuses_unnormalized_instances(self):
        ilp = make_ilp([(0, 1)], [Constraint.of({0: 1}, ">=", 1)])

        with pytest.raises(IlpError):
            nice_decomposition(ilp)

    def test_it_refuses_invalid_tree_decompositions(self):
        ilp = make_ilp([(0, 1)] * 2, [Constraint.of({0: 1, 1: 1}, LE, 1)])
        td = TreeDecomposition({0: frozenset({0}), 1: frozenset({1})}, ((0, 1),), 0)

        with pytest.raises(DecompositionError):
            make_nice(ilp, td)

    def test_validation_flags_a_broken_kind(self):
        ilp = make_ilp([(0, 1)] * 2, [Constraint.of({0: 1, 1: 1}, LE, 1)])
        ngd = nice_decomposition(ilp)
        leaf = next(node for node in ngd.nodes.values() if node.kind == "leaf")
        broken = dict(ngd.nodes)
        broken[leaf.id] = leaf.__class__(leaf.id, "join", leaf.bag)

        report = validate_nice(ilp, ngd.__class__(broken, ngd.root, ngd.rows))

        assert "kind" in report.rules()
