import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cographedit.cotree import (Cotree, build_cotree, canonical, cotree_to_graph, find_induced_p4,
                                from_record, is_canonical, is_cograph, leaf, parallel, parse_term,
                                series, to_record, to_term)
from cographedit.errors import DomainError, NotCograph
from cographedit.graph import Graph, complement
from oracles import graphs, has_p4


def p4():
    return Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])


def test_p4_witness():
    assert find_induced_p4(p4()) == (0, 1, 2, 3)


def test_witness_is_induced_path():
    g = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
    a, b, c, d = find_induced_p4(g)
    assert g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(c, d)
    assert not (g.has_edge(a, c) or g.has_edge(b, d) or g.has_edge(a, d))


def test_build_cotree_rejects_p4():
    with pytest.raises(NotCograph) as e:
        build_cotree(p4())
    assert e.value.witness == (0, 1, 2, 3)


def test_build_cotree_examples():
    assert build_cotree(Graph.empty(1)) == leaf(0)
    assert to_term(build_cotree(Graph.complete(3))) == "S(0,1,2)"
    assert to_term(build_cotree(Graph.empty(3))) == "P(0,1,2)"
    # paw: triangle 0,1,2 plus pendant 3 on 0
    paw = Graph.from_edges(4, [(0, 1), (0, 2), (1, 2), (0, 3)])
    assert to_term(build_cotree(paw)) == "S(0,P(S(1,2),3))"
    with pytest.raises(DomainError):
        build_cotree(Graph.empty(0))


def test_canonical_flattens_and_sorts():
    t = series(leaf(3), series(leaf(1), parallel(leaf(2))), parallel(leaf(0), leaf(4)))
    c = canonical(t)
    assert to_term(c) == "S(P(0,4),1,2,3)"
    assert is_canonical(c) and not is_canonical(t)


def test_term_parse_errors():
    for bad in ("S(0,", "X(0,1)", "S(0,1))", "S(0 1)", ""):
        with pytest.raises(DomainError):
            parse_term(bad)


def test_record_roundtrip():
    t = parse_term("S(P(0,2),1)")
    assert to_record(leaf(5)) == {"leaf": 5}
    assert from_record(to_record(t)) == t
    with pytest.raises(DomainError):
        from_record({"type": "bogus", "children": []})


def test_cotree_to_graph_lca_rule():
    g = cotree_to_graph(parse_term("S(P(0,2),P(1,3))"))
    assert set(g.edges()) == {(0, 1), (0, 3), (1, 2), (2, 3)}
    with pytest.raises(DomainError):
        cotree_to_graph(series(leaf(0), leaf(0)))


@st.composite
def cotrees(draw, max_leaves=12):
    n = draw(st.integers(1, max_leaves))
    verts = draw(st.permutations(range(n)))
    nodes = [leaf(v) for v in verts]
    while len(nodes) > 1:
        k = draw(st.integers(2, len(nodes)))
        kind = draw(st.sampled_from(["series", "parallel"]))
        nodes = [Cotree(kind, None, tuple(nodes[:k]))] + nodes[k:]
    return nodes[0]


@given(cotrees())
def test_cotree_graph_roundtrip(t):
    g = cotree_to_graph(t)
    assert build_cotree(g) == canonical(t)
    assert parse_term(to_term(t)) == t


@settings(max_examples=300)
@given(graphs(max_n=9))
def test_recognition_matches_brute_force(g):
    assert is_cograph(g) == (not has_p4(g))
    if g.n and is_cograph(g):
        assert cotree_to_graph(build_cotree(g), g.n) == g


@given(graphs(min_n=1, max_n=9))
def test_complement_swaps_labels(g):
    if not is_cograph(g):
        return
    t = build_cotree(g)
    tc = build_cotree(complement(g))

    def flip(x):
        if x.is_leaf:
            return x
        kind = "series" if x.kind == "parallel" else "parallel"
        return Cotree(kind, None, tuple(flip(c) for c in x.children))

    assert tc == flip(t)
