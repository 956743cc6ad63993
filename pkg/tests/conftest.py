import itertools

import pytest
from hypothesis import strategies as st

from raagaut.graph_lattice import Graph, load_fixture


@st.composite
def graphs(draw, min_n=1, max_n=5):
    n = draw(st.integers(min_n, max_n))
    names = [f"v{i}" for i in range(n)]
    pairs = list(itertools.combinations(names, 2))
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(names, [p for p, keep in zip(pairs, chosen) if keep])


def codes_for(g, max_len=7):
    return st.lists(st.integers(0, 2 * len(g) - 1), max_size=max_len).map(tuple)


@st.composite
def graph_and_word(draw, max_n=4, max_len=7):
    g = draw(graphs(max_n=max_n))
    return g, draw(codes_for(g, max_len))


@pytest.fixture
def gd():
    return load_fixture("GD")


@pytest.fixture
def ga():
    return load_fixture("GA")
