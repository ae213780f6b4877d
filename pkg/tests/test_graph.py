import numpy as np
import pytest
from hypothesis import given

from cographedit.errors import DimensionError, DomainError
from cographedit.graph import (Graph, WeightMatrix, apply_edits, complement, diff_pairs, distance,
                               edit_cost, edit_set, format_graph, induced_subgraph, members,
                               normalized_distance, parse_graph, parse_weights, read_graph,
                               write_graph)
from oracles import graphs


def test_from_edges_and_queries():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    assert g.m == 3
    assert g.has_edge(1, 0) and not g.has_edge(0, 2)
    assert g.degree(1) == 2
    assert list(g.edges()) == [(0, 1), (1, 2), (2, 3)]
    assert g.density() == pytest.approx(0.5)


def test_invalid_graphs_rejected():
    with pytest.raises(DomainError):
        Graph.from_edges(3, [(0, 0)])
    with pytest.raises(DomainError):
        Graph.from_edges(3, [(0, 3)])
    with pytest.raises(DomainError):
        Graph(2, (0b10, 0))
    with pytest.raises(DimensionError):
        Graph(3, (0, 0))


def test_edit_set_canonical():
    assert edit_set([(3, 1), (1, 3), (0, 2)]) == frozenset({(1, 3), (0, 2)})
    with pytest.raises(DomainError):
        edit_set([(2, 2)])


def test_edit_cost_weighted():
    w = WeightMatrix.from_triples(3, [(0, 1, 2.5)])
    assert edit_cost({(0, 1), (1, 2)}, w) == 3.5
    assert edit_cost({(0, 1), (1, 2)}) == 2.0


def test_weights_validation():
    with pytest.raises(DomainError):
        WeightMatrix([[0, 1], [2, 0]])
    with pytest.raises(DomainError):
        WeightMatrix([[0, -1], [-1, 0]])
    with pytest.raises(DimensionError):
        WeightMatrix(np.ones((2, 3)))
    w = WeightMatrix([[5, 1], [1, 7]])
    assert w[0, 0] == 0.0 and w.total() == 1.0


def test_distance_needs_same_n():
    with pytest.raises(DimensionError):
        distance(Graph.empty(2), Graph.empty(3))


def test_normalized_distance():
    assert normalized_distance(Graph.empty(4), Graph.complete(4)) == 1.0
    with pytest.raises(DomainError):
        normalized_distance(Graph.empty(1), Graph.empty(1))


def test_induced_subgraph_renumbers():
    g = Graph.from_edges(5, [(1, 3), (3, 4), (0, 2)])
    h = induced_subgraph(g, 0b11010)
    assert h.n == 3 and set(h.edges()) == {(0, 1), (1, 2)}


def test_members_order():
    assert members(0b10110) == [1, 2, 4]


def test_graph_text_roundtrip(tmp_path):
    g = Graph.from_edges(5, [(0, 4), (1, 2)])
    p = tmp_path / "g.txt"
    write_graph(g, p)
    assert read_graph(p) == g
    assert parse_graph("# comment\n3 1\n0 2\n") == Graph.from_edges(3, [(0, 2)])


@pytest.mark.parametrize("text", ["", "3\n", "3 2\n0 1\n", "3 1\n0 x\n", "3 2\n0 1\n1 0\n"])
def test_parse_graph_errors(text):
    with pytest.raises(DomainError):
        parse_graph(text)


def test_parse_weights():
    w = parse_weights("0 1 2.5\n# skip\n1 2 0\n", 3)
    assert w[1, 0] == 2.5 and w[1, 2] == 0.0 and w[0, 2] == 1.0
    with pytest.raises(DomainError):
        parse_weights("0 0 1\n", 3)
    with pytest.raises(DomainError):
        parse_weights("0 1\n", 3)


@given(graphs(max_n=8), graphs(max_n=8))
def test_diff_apply_roundtrip(g, h):
    if g.n != h.n:
        return
    f = diff_pairs(g, h)
    assert apply_edits(g, f) == h
    assert len(f) == distance(g, h)


@given(graphs(max_n=8))
def test_complement_involution(g):
    assert complement(complement(g)) == g
    assert g.m + complement(g).m == g.n * (g.n - 1) // 2


@given(graphs(max_n=8))
def test_matrix_roundtrip(g):
    assert Graph.from_matrix(g.to_matrix()) == g
    assert parse_graph(format_graph(g)) == g
