import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graph_and_word, graphs
from raagaut import oracles
from raagaut.graph_lattice import Graph, UnknownVertexError, load_fixture
from raagaut.words import (
    NotCyclicallyMinimalError,
    Word,
    WordError,
    block_decomposition,
    centralizer_basis,
    conjugate_generator_form,
    cyclic_decomposition,
    equal,
    greatest_left_divisor,
    greatest_right_divisor,
    is_cyclically_minimal,
    length,
    normalize,
    root,
    support,
)


def to_oracle(g, codes):
    return tuple((g.vertices[c >> 1], 1 if c & 1 else -1) for c in codes)


def w(g, text):
    return Word.parse(g, text)


@pytest.fixture
def p4():
    return load_fixture("P4")


# -- parsing and printing --------------------------------------------------

def test_parse_powers_and_identity(p4):
    assert w(p4, "a^3 b^-2").codes == (1, 1, 1, 2, 2)
    assert len(w(p4, "1")) == 0 and str(w(p4, "")) == "1"
    assert str(w(p4, "a b^-1")) == "a b^-1"


def test_bad_tokens(p4):
    with pytest.raises(WordError):
        w(p4, "a^x")
    with pytest.raises(UnknownVertexError):
        w(p4, "z")


# -- normal forms ----------------------------------------------------------

def test_commuting_letters_sort_and_cancel(p4):
    assert str(normalize(w(p4, "c b a a^-1"))) == "b c"
    assert str(normalize(w(p4, "b a a^-1 c a"))) == "b c a"
    assert equal(w(p4, "a b a^-1"), w(p4, "b"))
    assert not equal(w(p4, "a c a^-1"), w(p4, "c"))
    assert length(w(p4, "d c d^-1 c^-1")) == 0
    assert length(w(p4, "d a d^-1 a^-1")) == 4


@settings(max_examples=150, deadline=None)
@given(graph_and_word(max_n=4, max_len=7))
def test_normal_form_matches_exhaustive_rewriting(gw):
    g, codes = gw
    o = oracles.WordOracle(oracles.PlainGraph.of(g))
    nf = normalize(Word(g, codes))
    assert to_oracle(g, nf.codes) == o.nf(to_oracle(g, codes))


@settings(max_examples=100, deadline=None)
@given(graph_and_word(max_n=5, max_len=8))
def test_group_laws(gw):
    g, codes = gw
    u = Word(g, codes)
    assert normalize(u * u.inverse()).is_identity()
    assert normalize(normalize(u)) == normalize(u)
    assert len(normalize(u)) <= len(u)
    assert set(support(u)) <= set(g.vertices)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_equal_is_an_equivalence(data):
    g = data.draw(graphs(max_n=4))
    words = [Word(g, data.draw(st.lists(st.integers(0, 2 * len(g) - 1), max_size=5))) for _ in range(3)]
    u, v, x = words
    assert equal(u, u)
    assert equal(u, v) == equal(v, u)
    if equal(u, v) and equal(v, x):
        assert equal(u, x)
    assert equal(u * v, normalize(u) * normalize(v))


# -- divisors ----------------------------------------------------------------

@settings(max_examples=100, deadline=None)
@given(graph_and_word(max_n=4, max_len=6), st.data())
def test_greatest_left_divisor_matches_search(gw, data):
    g, codes = gw
    Y = data.draw(st.sets(st.sampled_from(g.vertices)))
    o = oracles.WordOracle(oracles.PlainGraph.of(g))
    d = greatest_left_divisor(Word(g, codes), Y)
    assert to_oracle(g, d.codes) == o.greatest_left_divisor(to_oracle(g, codes), Y)


@settings(max_examples=100, deadline=None)
@given(graph_and_word(max_n=5, max_len=8), st.data())
def test_right_divisor_is_mirror_of_left(gw, data):
    g, codes = gw
    Y = data.draw(st.sets(st.sampled_from(g.vertices)))
    u = Word(g, codes)
    d = greatest_right_divisor(u, Y)
    assert d == greatest_left_divisor(u.inverse(), Y).inverse()
    assert len(normalize(u * d.inverse())) == len(normalize(u)) - len(d)


# -- cyclic reduction, blocks, roots -----------------------------------------

@settings(max_examples=100, deadline=None)
@given(graph_and_word(max_n=4, max_len=7))
def test_cyclic_decomposition(gw):
    g, codes = gw
    o = oracles.WordOracle(oracles.PlainGraph.of(g))
    u, core = cyclic_decomposition(Word(g, codes))
    assert equal(u.inverse() * core * u, Word(g, codes))
    assert is_cyclically_minimal(core)
    assert oracles.is_cyclically_minimal(o, to_oracle(g, core.codes))
    assert len(core) == len(oracles.cyclic_core(o, to_oracle(g, codes)))


@settings(max_examples=100, deadline=None)
@given(graph_and_word(max_n=4, max_len=7))
def test_blocks_and_roots(gw):
    g, codes = gw
    o = oracles.WordOracle(oracles.PlainGraph.of(g))
    bd = block_decomposition(Word(g, codes))
    assert bd.reassemble() == normalize(Word(g, codes))
    got = {frozenset(b.support.names()) for b in bd.blocks}
    assert got == {frozenset(b) for b in oracles.blocks(o.g, to_oracle(g, bd.core.codes))}
    r, n = root(Word(g, codes))
    assert normalize(r) ** n == normalize(Word(g, codes))
    assert n == oracles.root_exponent(o, to_oracle(g, codes))


def test_root_of_power_in_free_factor():
    g = Graph(["a", "b"])
    r, n = root(w(g, "b a b a b a"))
    assert n == 3 and equal(r, w(g, "b a"))


def test_root_combines_commuting_blocks():
    g = Graph(["a", "b", "c"], [("a", "c"), ("b", "c")])
    r, n = root(w(g, "a b a b c c"))
    assert n == 2 and equal(r ** 2, w(g, "a b a b c c"))


# -- centralisers --------------------------------------------------------------

@settings(max_examples=80, deadline=None)
@given(graph_and_word(max_n=5, max_len=7))
def test_centralizer_generators_commute(gw):
    g, codes = gw
    _, core = cyclic_decomposition(Word(g, codes))
    basis = centralizer_basis(core)
    for z in basis.generators():
        assert equal(core * z, z * core)


def test_centralizer_needs_cyclic_minimality(p4):
    with pytest.raises(NotCyclicallyMinimalError):
        centralizer_basis(w(p4, "c a c^-1"))


def test_conjugate_generator_form(p4):
    f, e = conjugate_generator_form(w(p4, "c d^-1 a^-1 d c^-1"), "a")
    assert e == -1 and equal(f.inverse() * w(p4, "a^-1") * f, w(p4, "c d^-1 a^-1 d c^-1"))
    assert conjugate_generator_form(w(p4, "a b"), "a") is None
