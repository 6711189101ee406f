"""
Tests for partition refinement and the automorphism search
"""
import pytest

from preprocessor.automorphism import (
    OrderedPartition,
    SearchBudgetExceeded,
    TooLarge,
    VertexPermutation,
    automorphism_generators,
    brute_force_automorphisms,
    refine,
    search_automorphisms,
)
from preprocessor.benchmarks import pigeon
from preprocessor.graph_builder import BuildOptions, ColouredDigraph, build_graph
from preprocessor.symmetry import closure
from tests.conftest import micro_corpus

NO_OPTS = BuildOptions(opt_facts=False, opt_unary=False)


def digraph(n, edges, colours=None):
    return ColouredDigraph(n, tuple(colours or [1] * n), frozenset(edges))


def generated(graph, gens):
    return closure(gens, identity=VertexPermutation.identity(graph.vertex_count))


class TestRefine:
    """Equitable refinement"""

    def test_directed_path_splits_by_signature(self):
        """Test directed path splits by signature"""
        graph = digraph(3, [(0, 1), (1, 2)])
        result = refine(graph, OrderedPartition.unit(3))
        assert result.cells == ((0,), (2,), (1,))

    def test_directed_cycle_unchanged(self):
        """Test directed cycle unchanged"""
        graph = digraph(3, [(0, 1), (1, 2), (2, 0)])
        assert refine(graph, OrderedPartition.unit(3)).cells == ((0, 1, 2),)

    def test_p1_colour_partition_is_equitable(self, p1):
        """Test P1 colour partition is equitable"""
        graph, _ = build_graph(p1, NO_OPTS)
        result = refine(graph, OrderedPartition.by_colour(graph))
        assert result.as_sets() == [{0, 2}, {1, 3}, {4, 5}]

    @pytest.mark.parametrize("name,program", micro_corpus()[:9])
    def test_idempotent_and_finer(self, name, program):
        """Test idempotent and finer"""
        graph, _ = build_graph(program)
        start = OrderedPartition.by_colour(graph)
        once = refine(graph, start)
        assert refine(graph, once) == once
        for cell in once.cells:
            assert any(set(cell) <= set(coarse) for coarse in start.cells)

    def test_invalid_partition_rejected(self):
        """Test invalid partition rejected"""
        with pytest.raises(ValueError):
            OrderedPartition(((0, 1), (1, 2)))


class TestAutomorphismGenerators:
    """Search results"""

    def test_p1_swap(self, p1):
        """Test P1 swap"""
        graph, _ = build_graph(p1, NO_OPTS)
        group = generated(graph, automorphism_generators(graph))
        assert len(group) == 2
        assert VertexPermutation((2, 3, 0, 1, 5, 4)) in group

    def test_distinct_colours_give_no_generators(self):
        """Test distinct colours give no generators"""
        graph = digraph(3, [(0, 1), (1, 2), (2, 0)], colours=[1, 2, 3])
        assert automorphism_generators(graph) == []

    def test_directed_cycle_order_three(self):
        """Test directed cycle order three"""
        graph = digraph(3, [(0, 1), (1, 2), (2, 0)])
        result = search_automorphisms(graph)
        assert len(generated(graph, result.generators)) == 3
        assert result.group_size == 3

    def test_generators_preserve_edges_and_colours(self):
        """Test generators preserve edges and colours"""
        graph, _ = build_graph(pigeon(4))
        for gamma in automorphism_generators(graph):
            assert gamma.is_automorphism_of(graph)
            assert not gamma.is_identity

    def test_group_size_pigeon(self):
        """Test group size pigeon"""
        graph, _ = build_graph(pigeon(4))
        assert search_automorphisms(graph).group_size == 24 * 6

    def test_deterministic(self):
        """Test that repeated searches give identical generators"""
        graph, _ = build_graph(pigeon(4))
        assert automorphism_generators(graph) == automorphism_generators(graph)

    def test_budget_exceeded(self):
        """Test budget exceeded"""
        graph, _ = build_graph(pigeon(4))
        with pytest.raises(SearchBudgetExceeded) as excinfo:
            automorphism_generators(graph, node_budget=2)
        assert excinfo.value.budget == 2

    def test_empty_graph(self):
        """Test empty graph"""
        result = search_automorphisms(digraph(0, []))
        assert result.generators == []
        assert result.group_size == 1


class TestBruteForce:
    """Exhaustive oracle"""

    def test_single_vertex(self):
        """Test single vertex"""
        assert brute_force_automorphisms(digraph(1, [])) == [VertexPermutation((0,))]

    def test_two_isolated_vertices(self):
        """Test two isolated vertices"""
        assert brute_force_automorphisms(digraph(2, [])) == [
            VertexPermutation((0, 1)),
            VertexPermutation((1, 0)),
        ]

    def test_p1_with_unary_optimisation(self, p1):
        """Test P1 with unary optimisation"""
        graph, _ = build_graph(p1)
        assert len(brute_force_automorphisms(graph)) == 2

    def test_guard(self):
        """Test that brute force refuses graphs above its vertex limit"""
        with pytest.raises(TooLarge):
            brute_force_automorphisms(digraph(11, []))

    def test_search_matches_brute_force_on_small_graphs(self):
        """Test search matches brute force on small graphs"""
        checked = 0
        for name, program in micro_corpus():
            for options in (BuildOptions(), NO_OPTS):
                graph, _ = build_graph(program, options)
                if graph.vertex_count > 10:
                    continue
                expected = set(brute_force_automorphisms(graph))
                assert generated(graph, automorphism_generators(graph)) == expected, name
                checked += 1
        assert checked >= 3

    @pytest.mark.parametrize("edges,colours", [
        ([(0, 1), (1, 2), (2, 3), (3, 0)], [1, 1, 1, 1]),
        ([(0, 1), (1, 0), (2, 3), (3, 2)], [1, 1, 1, 1]),
        ([(0, 1), (0, 2), (0, 3), (4, 1), (4, 2), (4, 3)], [1, 2, 2, 2, 1]),
        ([(0, 1), (2, 3), (4, 5)], [1, 2, 1, 2, 1, 2]),
        ([(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)], [1, 1, 1, 1, 1, 1]),
    ])
    def test_search_matches_brute_force_handmade(self, edges, colours):
        """Test search matches brute force handmade"""
        graph = digraph(len(colours), edges, colours)
        assert generated(graph, automorphism_generators(graph)) == set(brute_force_automorphisms(graph))
