import json
import random
from fractions import Fraction

import pytest

from indturan.errors import (
    EmptyGraph,
    EmptyQuery,
    InvalidPartition,
    Multigraph,
)
from indturan.graph import (
    Graph,
    Host,
    bipartite_between,
    bipartition,
    bits,
    common_neighborhood,
    degree_stats,
    dumps_graph,
    graph_from_json_dict,
    graph_to_json_dict,
    induced_subgraph,
    is_injective,
    is_k_almost_regular,
    loads_graph,
    mask_of,
    to_dot,
)


def path(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


class TestGraphBasics:
    def test_edges_normalized_and_counted(self):
        g = Graph(4, [(2, 0), (0, 2), (1, 3)])
        assert g.m == 2
        assert g.has_edge(0, 2) and g.has_edge(2, 0)
        assert g.edge_list() == [(0, 2), (1, 3)]

    def test_degrees_and_neighbors(self):
        g = path(4)
        assert [g.degree(v) for v in range(4)] == [1, 2, 2, 1]
        assert g.neighbors(1) == (0, 2)

    def test_loop_rejected(self):
        with pytest.raises(Multigraph):
            Graph(3, [(1, 1)])

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            Graph(2, [(0, 2)])

    def test_equality_and_hash(self):
        assert Graph(3, [(0, 1)]) == Graph(3, [(1, 0)])
        assert len({Graph(3, [(0, 1)]), Graph(3, [(0, 1)])}) == 1

    def test_mask_helpers(self):
        assert mask_of([0, 2]) == 0b101
        assert list(bits(0b1011)) == [0, 1, 3]


class TestNeighborhoods:
    def test_common_neighborhood_excludes_query(self):
        g = Graph(4, [(0, 1), (0, 2), (1, 2), (2, 3)])
        assert common_neighborhood(g, [0, 1]) == {2}

    def test_common_neighborhood_empty_query(self):
        with pytest.raises(EmptyQuery):
            common_neighborhood(Graph(2, [(0, 1)]), [])

    def test_common_neighborhood_of_twins(self):
        g = Graph(5, [(0, 2), (1, 2), (0, 3), (1, 3), (0, 4)])
        assert common_neighborhood(g, [0, 1]) == {2, 3}


class TestInducedSubgraph:
    def test_keeps_internal_edges_only(self):
        g = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
        sub, idx = induced_subgraph(g, [1, 2, 4])
        assert sub.n == 3 and idx == (1, 2, 4)
        assert sub.edge_list() == [(0, 1)]

    def test_random_degree_consistency(self):
        rng = random.Random(5)
        for _ in range(25):
            n = rng.randrange(2, 9)
            edges = [(u, v) for u in range(n) for v in range(u + 1, n)
                     if rng.random() < 0.4]
            g = Graph(n, edges)
            keep = sorted(rng.sample(range(n), rng.randrange(1, n + 1)))
            sub, idx = induced_subgraph(g, keep)
            for i, u in enumerate(idx):
                expect = sum(1 for v in idx if v != u and g.has_edge(u, v))
                assert sub.degree(i) == expect


class TestBipartiteBetween:
    def test_keeps_cross_edges_only(self):
        g = Graph(4, [(0, 1), (0, 2), (1, 3), (2, 3), (0, 3)])
        cross, idx = bipartite_between(g, [0, 3], [1, 2])
        assert idx == (0, 3, 1, 2)
        # cross edges: 0-1, 0-2, 1-3, 2-3; internal 0-3 dropped
        assert cross.m == 4
        assert not cross.has_edge(0, 1)  # images of 0 and 3

    def test_overlap_rejected(self):
        with pytest.raises(InvalidPartition):
            bipartite_between(Graph(3, []), [0, 1], [1, 2])


class TestDegreeStats:
    def test_stats(self):
        g = Graph(4, [(0, 1), (0, 2), (0, 3)])
        assert degree_stats(g) == (1, 3, Fraction(3, 2))

    def test_empty_graph(self):
        with pytest.raises(EmptyGraph):
            degree_stats(Graph(0, []))

    def test_almost_regular(self):
        star = Graph(4, [(0, 1), (0, 2), (0, 3)])
        assert is_k_almost_regular(star, Fraction(3))
        assert not is_k_almost_regular(star, Fraction(2))
        assert is_k_almost_regular(Graph(3, []), Fraction(1))


class TestBipartition:
    def test_even_cycle(self):
        g = Graph(6, [(i, (i + 1) % 6) for i in range(6)])
        parts = bipartition(g)
        assert parts is not None
        a, b = parts
        assert sorted(a + b) == list(range(6))
        assert all(not g.has_edge(u, v) for side in (a, b)
                   for u in side for v in side if u < v)

    def test_odd_cycle(self):
        assert bipartition(Graph(5, [(i, (i + 1) % 5) for i in range(5)])) is None

    def test_disconnected(self):
        parts = bipartition(Graph(4, [(0, 1), (2, 3)]))
        assert parts is not None


class TestHost:
    def test_partition_validated(self):
        g = path(4)
        h = Host(g, 2, ((0, 2), (1, 3)))
        assert h.partition == ((0, 2), (1, 3))
        with pytest.raises(InvalidPartition):
            Host(g, 2, ((0, 1), (1, 3)))
        with pytest.raises(InvalidPartition):
            Host(g, 2, ((0, 1), (2,)))

    def test_s_validated(self):
        with pytest.raises(ValueError):
            Host(path(2), 0)


class TestJson:
    def test_round_trip_with_roots_and_partition(self):
        g = path(4)
        text = dumps_graph(g, roots=[0, 3], partition=((0, 2), (1, 3)))
        g2, roots, part = loads_graph(text)
        assert g2 == g and roots == (0, 3) and part == ((0, 2), (1, 3))

    def test_sorted_keys(self):
        d = graph_to_json_dict(path(3))
        assert json.dumps(d, sort_keys=True) == json.dumps(
            graph_from_json_dict(d) and d, sort_keys=True)

    def test_is_injective(self):
        assert is_injective((0, 2, 1))
        assert not is_injective((0, 2, 2))


class TestDot:
    def test_roots_doublecircled(self):
        text = to_dot(path(3), roots=[0])
        assert "doublecircle" in text and text.startswith("graph")
