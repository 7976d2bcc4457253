import random
from itertools import combinations

import networkx as nx
import pytest

from src.dp import solve_dp, solve_with_modulator
from src.errors import IlpError
from src.gaifman import build_gaifman, make_nice, nice_decomposition, treewidth_exact, validate_tree_decomposition
from src.generators import gen_hitting_set, gen_or_composition, gen_random_protrusion, gen_subset_sum
from src.ilp import is_normalized
from src.oracle import brute_feasible
from src.protrusion import kernelize
from src.tu import IntMatrix, certify_tu, is_tu_bruteforce, solve_tu_plus_entries

from .factories import has_hitting_set, has_independent_set, subset_sums


def _random_graph(rng: random.Random, n: int) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    graph.add_edges_from(pair for pair in combinations(range(n), 2) if rng.random() < 0.5)
    return graph


class TestSubsetSum:
    def test_it_matches_the_reference(self):
        rng = random.Random(1)

        for _ in range(100):
            items = [rng.randint(-4, 6) for _ in range(rng.randint(1, 5))]
            target = rng.randint(-4, 12)
            ilp, td = gen_subset_sum(items, target)

            assert solve_dp(ilp, make_nice(ilp, td)).feasible == subset_sums(items, target)

    def test_it_matches_the_reference_on_larger_items(self):
        rng = random.Random(2)

        for _ in range(50):
            items = [rng.randint(-5, 50) for _ in range(rng.randint(1, 8))]
            target = rng.randint(-5, 120)
            ilp, td = gen_subset_sum(items, target)

            assert solve_dp(ilp, make_nice(ilp, td)).feasible == subset_sums(items, target)

    def test_the_witness_picks_the_items(self):
        items = [3, 5, 7, 11]
        ilp, td = gen_subset_sum(items, 15)

        witness = solve_dp(ilp, make_nice(ilp, td)).witness

        picked = [item for j, item in enumerate(items, start=1) if witness[ilp.index_of(f"x{j}")]]
        assert sum(picked) == 15

    def test_the_decomposition_is_a_width_two_path(self):
        for items in ([4], [1, 2], [5, -3, 2, 8, 1]):
            ilp, td = gen_subset_sum(items, 3)

            assert is_normalized(ilp)
            assert validate_tree_decomposition(build_gaifman(ilp), td).ok
            assert td.width <= 2
            assert treewidth_exact(build_gaifman(ilp))[0] <= 2

    def test_zero_items_are_allowed(self):
        ilp, td = gen_subset_sum([0, 2], 0)

        assert solve_dp(ilp, make_nice(ilp, td)).feasible

    def test_it_needs_items(self):
        with pytest.raises(IlpError):
            gen_subset_sum([], 0)


class TestHittingSet:
    @pytest.mark.parametrize(
        "universe, sets, k",
        [
            (3, [[1, 2], [2, 3]], 1),
            (3, [[1], [3]], 1),
            (4, [[1, 2], [3, 4], [2, 3]], 2),
            (4, [[1], [2], [3], [4]], 3),
        ],
    )
    def test_it_matches_the_reference(self, universe, sets, k):
        ilp, _ = gen_hitting_set(universe, sets, k)

        assert brute_feasible(ilp).feasible == has_hitting_set(universe, sets, k)

    def test_random_families_agree(self):
        rng = random.Random(5)

        for _ in range(25):
            universe = rng.randint(1, 5)
            sets = [rng.sample(range(1, universe + 1), rng.randint(1, universe)) for _ in range(rng.randint(1, 3))]
            k = rng.randint(0, universe)
            ilp, entries = gen_hitting_set(universe, sets, k)

            assert solve_tu_plus_entries(ilp, entries).feasible == has_hitting_set(universe, sets, k)

    def test_every_small_family_agrees(self):
        for universe in range(1, 4):
            subsets = [list(chosen) for size in range(1, universe + 1) for chosen in combinations(range(1, universe + 1), size)]
            families = [list(family) for count in range(1, 4) for family in combinations(subsets, count)]

            for sets in families:
                for k in range(4):
                    ilp, entries = gen_hitting_set(universe, sets, k)

                    assert len(entries) == universe
                    assert is_tu_bruteforce(IntMatrix.from_ilp(ilp).with_zeroed(entries))
                    assert solve_tu_plus_entries(ilp, entries).feasible == has_hitting_set(universe, sets, k), (sets, k)

    def test_one_entry_per_element(self):
        ilp, entries = gen_hitting_set(4, [[1, 2], [2, 3]], 2)

        assert len(entries) == 4
        assert {ilp.names[col] for _, col in entries} == {"x1", "x2", "x3", "x4"}
        assert all(ilp.constraints[row].coefficient(col) == -2 for row, col in entries)
        assert certify_tu(IntMatrix.from_ilp(ilp).with_zeroed(entries))

    @pytest.mark.parametrize(
        "universe, sets",
        [
            (3, []),
            (3, [[1], []]),
            (3, [[1, 4]]),
            (3, [[0]]),
        ],
    )
    def test_it_rejects_bad_families(self, universe, sets):
        with pytest.raises(IlpError):
            gen_hitting_set(universe, sets, 1)


class TestOrComposition:
    def test_it_is_the_or_of_independent_set(self):
        rng = random.Random(9)

        for _ in range(12):
            n, t, k = rng.randint(2, 3), rng.randint(1, 2), rng.randint(1, 3)
            graphs = [_random_graph(rng, n) for _ in range(t)]
            ilp, pd = gen_or_composition(graphs, k)

            expected = any(has_independent_set(graph, k) for graph in graphs)
            kernel = kernelize(ilp, pd)

            assert solve_dp(kernel.ilp, nice_decomposition(kernel.ilp)).feasible == expected

    def test_branching_on_the_selection_agrees(self):
        rng = random.Random(13)

        for _ in range(10):
            n, t, k = rng.randint(2, 4), rng.randint(1, 3), rng.randint(1, 3)
            graphs = [_random_graph(rng, n) for _ in range(t)]
            ilp, _ = gen_or_composition(graphs, k)
            modulator = [ilp.index_of(f"x{i + 1}") for i in range(n)] + [ilp.index_of("s")]

            expected = any(has_independent_set(graph, k) for graph in graphs)

            assert solve_with_modulator(ilp, modulator).feasible == expected

    def test_the_decomposition_matches_the_layout(self):
        ilp, pd = gen_or_composition([nx.path_graph(4), nx.cycle_graph(4), nx.empty_graph(4)], 2)
        pairs = 6

        assert len(pd.parts) == pairs
        assert all(len(part) == 2 * 3 for part in pd.parts)
        assert pd.y0 == frozenset(range(4 + pairs + 1))
        assert ilp.names[4 + pairs] == "s"
        assert is_normalized(ilp)

    def test_node_labels_do_not_matter(self):
        relabelled = nx.relabel_nodes(nx.path_graph(3), {0: "a", 1: "b", 2: "c"})

        first, _ = gen_or_composition([nx.path_graph(3)], 2)
        second, _ = gen_or_composition([relabelled], 2)

        assert first == second

    def test_it_needs_graphs_of_one_size(self):
        with pytest.raises(IlpError):
            gen_or_composition([nx.path_graph(3), nx.path_graph(4)], 1)

    def test_it_needs_a_graph(self):
        with pytest.raises(IlpError):
            gen_or_composition([], 1)


class TestRandomProtrusion:
    def test_it_is_deterministic(self):
        assert gen_random_protrusion(3, 2, 3, 4, 42) == gen_random_protrusion(3, 2, 3, 4, 42)

    def test_seeds_differ(self):
        assert gen_random_protrusion(3, 2, 3, 4, 1) != gen_random_protrusion(3, 2, 3, 4, 2)

    def test_the_layout_is_as_asked(self):
        ilp, pd = gen_random_protrusion(4, 3, 3, 5, 7)

        assert pd.y0 == frozenset(range(4))
        assert len(pd.parts) == 5
        assert pd.r == 3
        assert pd.alpha == 5
        assert all(variable.domain.size == 3 for variable in ilp.variables)
        assert all(len(part) <= 3 for part in pd.parts)

    def test_it_yields_both_verdicts(self):
        verdicts = {brute_feasible(gen_random_protrusion(2, 2, 2, 2, seed)[0]).feasible for seed in range(30)}

        assert verdicts == {True, False}

    @pytest.mark.parametrize("k, r, d, parts", [(2, 0, 2, 1), (2, 2, 1, 1), (-1, 2, 2, 1), (2, 2, 2, -1)])
    def test_it_validates_parameters(self, k, r, d, parts):
        with pytest.raises(IlpError):
            gen_random_protrusion(k, r, d, parts, 0)
