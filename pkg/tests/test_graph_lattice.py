import pytest
from hypothesis import given, settings

from conftest import graphs
from raagaut import oracles
from raagaut.graph_lattice import (
    Graph,
    GraphError,
    GraphParseError,
    UnknownVertexError,
    admissible_closure,
    admissible_set,
    closure,
    components,
    compressed_automorphisms,
    dominated_vertices,
    enumerate_lattice,
    fixture_names,
    graph_automorphisms,
    h_closure,
    is_balanced,
    isomorphism_type,
    load_fixture,
    orthogonal_complement,
    out_set,
    total_order,
    vertex_classification,
)


def names(Y):
    return set(Y.names())


# -- parsing ---------------------------------------------------------------

def test_line_format_round_trip():
    g = load_fixture("GD")
    assert Graph.parse(g.to_text()) == g
    assert Graph.parse(g.to_json()) == g


def test_comments_and_blank_lines_are_ignored():
    g = Graph.parse("# header\n\nvertices: a b c  # three\nedge: a b\n")
    assert g.edges() == [("a", "b")]


def test_empty_text_is_the_empty_graph():
    assert len(Graph.parse("")) == 0


@pytest.mark.parametrize("text", [
    "edge: a b\n",
    "vertices: a b\nedge: a\n",
    "vertices: a b\nvertices: c\n",
    "vertices: a b\nloop: a\n",
    "vertices a b\n",
    "{not json",
])
def test_malformed_graph_text(text):
    with pytest.raises(GraphParseError):
        Graph.parse(text)


def test_bad_vertices_and_edges():
    with pytest.raises(GraphError):
        Graph(["a", "a"])
    with pytest.raises(GraphError):
        Graph(["a", "b"], [("a", "a")])
    with pytest.raises(GraphError):
        Graph(["1x"])
    with pytest.raises(UnknownVertexError):
        Graph(["a"], [("a", "z")])


def test_bundled_fixtures():
    assert {"GA", "GD", "GO", "P4", "C5", "P3_P3", "GD_edge_point", "EE_points"} <= set(fixture_names())
    with pytest.raises(GraphError):
        load_fixture("nope")


def test_dot_export_lists_every_edge():
    dot = load_fixture("P4").to_dot()
    assert dot.count("--") == 3 and dot.startswith("graph G {")


# -- closure operators -----------------------------------------------------

def test_empty_set_conventions():
    g = load_fixture("P4")
    assert names(admissible_set(g, [])) == set(g.vertices)
    assert names(orthogonal_complement(g, [])) == set(g.vertices)


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=5))
def test_operators_match_definitions(g):
    p = oracles.PlainGraph.of(g)
    for Y in p.all_subsets():
        assert names(orthogonal_complement(g, Y)) == p.perp(Y)
        assert names(closure(g, Y)) == p.cl(Y)
        assert names(admissible_set(g, Y)) == p.adm(Y)


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=5))
def test_lattices_match_definitions(g):
    p = oracles.PlainGraph.of(g)
    assert {frozenset(Y.names()) for Y in enumerate_lattice(g, "K").elements} == p.admissible_family()
    assert {frozenset(Y.names()) for Y in enumerate_lattice(g, "L").elements} == p.closed_family()
    for Y in p.all_subsets():
        assert names(admissible_closure(g, Y)) == p.adm_closure(Y)


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=5))
def test_closures_are_closure_operators(g):
    p = oracles.PlainGraph.of(g)
    for Y in p.all_subsets():
        c = names(closure(g, Y))
        a = names(admissible_closure(g, Y))
        assert Y <= c and names(closure(g, c)) == c
        assert Y <= a and names(admissible_closure(g, a)) == a


def test_lattice_hasse_edges_are_covers():
    lat = enumerate_lattice(load_fixture("GA"), "K")
    for lo, hi in lat.hasse:
        assert set(lat.elements[lo]) < set(lat.elements[hi])
    assert len(lat.to_dot().splitlines()) > len(lat)


# -- classes and order -----------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(graphs(max_n=6))
def test_classes_match_definition(g):
    p = oracles.PlainGraph.of(g)
    got = sorted(sorted(c.names()) for c in vertex_classification(g).classes)
    assert got == sorted(sorted(c) for c in p.classes())


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=6))
def test_total_order_reverses_admissible_inclusion(g):
    order = total_order(g)
    pos = {v: i for i, v in enumerate(order)}
    assert sorted(order) == sorted(g.vertices)
    adm = {v: names(admissible_set(g, [v])) for v in g.vertices}
    for x in g.vertices:
        for y in g.vertices:
            if adm[x] < adm[y]:
                assert pos[y] < pos[x]


def test_tie_breaks_must_be_a_permutation():
    g = load_fixture("GO")
    assert total_order(g, list("abcdefg")) == list("gbafedc")
    with pytest.raises(GraphError):
        total_order(g, list("abc"))


def test_heights_start_at_minimal_admissible_sets():
    vc = vertex_classification(load_fixture("GO"))
    assert [len(level) for level in vc.b_sets] == [2, 2]
    assert vc.tag_of("a") == "diamond" and vc.tag_of("g") == "singleton"


# -- domination, balance, components ---------------------------------------

@settings(max_examples=60, deadline=None)
@given(graphs(max_n=6))
def test_domination_matches_definition(g):
    p = oracles.PlainGraph.of(g)
    dom = {y for x in g.vertices for y in g.vertices if x != y and p.dominates(x, y)}
    assert names(dominated_vertices(g)) == dom


def test_unbalanced_tree_witness(gd):
    bal = is_balanced(gd)
    assert not bal
    assert (bal.witness.vertex, bal.witness.a, bal.witness.b) == ("v", "a", "b")
    assert names(out_set(gd, "v")) == {"a", "b"}


def test_star_is_balanced():
    s = Graph(["c", "x", "y", "z"], [("c", "x"), ("c", "y"), ("c", "z")])
    assert is_balanced(s).balanced
    assert names(dominated_vertices(s)) == {"x", "y", "z"}


def test_components_of_complement_of_star(gd):
    comps = {frozenset(C.names()) for C in components(gd, orthogonal_complement(gd, ["v"]))}
    assert comps == {frozenset("ars"), frozenset("bt")}


def test_h_closure_contains_and_is_idempotent(ga):
    for x in ga.vertices:
        for y in ga.vertices:
            h = h_closure(ga, x, [y])
            assert y in h
            assert h_closure(ga, x, h) == h


def test_isomorphic_components_are_grouped():
    it = isomorphism_type(load_fixture("P3_P3"))
    assert len(it.groups) == 1 and it.groups[0].multiplicity == 2
    assert len(it.isolated) == 0


# -- automorphisms of the graph --------------------------------------------

@pytest.mark.parametrize("name", ["GA", "GO", "GD", "C5", "P4"])
def test_automorphism_count_identity(name):
    g = load_fixture(name)
    p = oracles.PlainGraph.of(g)
    assert len(graph_automorphisms(g)) == p.automorphism_count()
    assert p.automorphism_count() == p.class_factorial_product() * len(compressed_automorphisms(g))


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=6))
def test_graph_automorphisms_match_brute_force(g):
    p = oracles.PlainGraph.of(g)
    auts = graph_automorphisms(g)
    assert len(auts) == p.automorphism_count()
    assert len(auts) == p.class_factorial_product() * len(compressed_automorphisms(g))
