import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from raagaut.automorphisms import (
    Automorphism,
    AutomorphismError,
    GeneratorSymbol,
    InvalidGeneratorError,
    MembershipError,
    UnbalancedGraphError,
    apply,
    balanced_factorization,
    check_tame,
    classify,
    commutation_case,
    compose,
    conj_length,
    factor_conjugating,
    format_symbols,
    generator_family,
    invert,
    is_tame,
    parse_symbols,
    rewrite_tame,
    search_st_conj_split,
)
from raagaut.graph_lattice import Graph, UnknownVertexError, load_fixture
from raagaut.words import Word, equal

OBSTRUCTION = "lc({a,r,s},v) tr(v,a) tr(v,b) tr(v,a^-1)"


def aut(g, text):
    return Automorphism.parse(g, text)


def sample_word(g, fams, rng, max_len=5):
    gens = [s for f in fams for s in generator_family(g, f)]
    return [s if rng.random() < 0.5 else s.inverse() for s in (rng.choice(gens) for _ in range(rng.randint(1, max_len)))]


def mixed_symbols(g):
    out = [GeneratorSymbol("inv", (v,)) for v in g.vertices]
    out += [GeneratorSymbol("tr", ((x, s), (y, 1))) for x in g.vertices for y in g.vertices for s in (1, -1)
            if x != y and _valid(g, GeneratorSymbol("tr", ((x, s), (y, 1))))]
    return out + generator_family(g, "LInn")


def _valid(g, sym):
    try:
        Automorphism(g, [sym])
        return True
    except InvalidGeneratorError:
        return False


# -- parsing and evaluation ------------------------------------------------

def test_obstruction_images(gd):
    phi = aut(gd, OBSTRUCTION)
    u = Word.parse(gd, "v a^-1 b a")
    for z in "bct":
        assert str(phi.image(z)) == z
    assert equal(phi.image("v"), u)
    for z in "ars":
        assert equal(phi.image(z), u.inverse() * Word.parse(gd, z) * u)


@pytest.mark.parametrize("text, error", [
    ("tr(a,v)", InvalidGeneratorError),
    ("lc({a,r},v)", InvalidGeneratorError),
    ("inv(z)", UnknownVertexError),
    ("foo(a)", AutomorphismError),
    ("tr(v,a", AutomorphismError),
    ("tr(v)", AutomorphismError),
])
def test_rejected_symbols(gd, text, error):
    with pytest.raises(error):
        aut(gd, text)


@pytest.mark.parametrize("name", ["GD", "GA", "P3_P3"])
def test_symbol_text_round_trips(name):
    g = load_fixture(name)
    for fam in ("LInn", "LInn_C", "LInn_N", "LInn_A", "LInn_T"):
        for s in generator_family(g, fam):
            assert parse_symbols(g, str(s)) == [s]
            assert parse_symbols(g, str(s.inverse())) == [s.inverse()]


def test_composition_applies_left_factor_first(gd):
    phi, psi = aut(gd, "tr(v,a)"), aut(gd, "inv(a)")
    both = compose(phi, psi)
    assert str(both.image("v")) == "v a^-1"
    assert both == phi * psi == aut(gd, "tr(v,a) inv(a)")


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["GD", "GA", "P4", "C5"]))
def test_symbol_words_act_as_homomorphisms(seed, name):
    g = load_fixture(name)
    rng = random.Random(seed)
    gens = mixed_symbols(g)
    word = [rng.choice(gens) for _ in range(rng.randint(1, 4))]
    word = [s if rng.random() < 0.5 else s.inverse() for s in word]
    phi = Automorphism(g, word)
    u = Word(g, [rng.randrange(2 * len(g)) for _ in range(5)])
    v = Word(g, [rng.randrange(2 * len(g)) for _ in range(5)])
    assert equal(apply(phi, u * v), apply(phi, u) * apply(phi, v))
    assert compose(phi, invert(phi)).is_identity()
    assert compose(invert(phi), phi).is_identity()


# -- classification ----------------------------------------------------------

def test_inner_automorphism_classifies_as_inner(gd):
    r = classify(aut(gd, 'inner("a b")'))
    for key in ("conjugating", "Inn", "Conj_V", "Conj_N", "St_conj_K", "tame"):
        assert r[key].status == "yes", key
    # conjugation moves the admissible parabolics, so it is not in their stabiliser
    assert r["St_K"].status == r["Conj_S"].status == "no"


def test_transvection_is_not_conjugating(gd):
    r = classify(aut(gd, "tr(v,a)"))
    assert r["conjugating"].status == "no"
    assert r["St_K"].status == "yes"
    assert "conjugating" in r.to_text() and "Inn" in r.to_dict()


def test_tame_verdict_gives_exponent_witness(gd):
    assert check_tame(aut(gd, "lc({b,t},v)")).certificate == ("v", "b", 1)
    assert not is_tame(gd, GeneratorSymbol("ext", (("b", "t"), ("v", 1))))


def test_conjugation_length(gd):
    assert conj_length(aut(gd, "lc({b,t},v)")) == 2
    assert conj_length(Automorphism.identity(gd)) == 0


# -- factorisation -------------------------------------------------------------

@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["GD", "GA"]), st.sampled_from(["LInn", "LInn_V", "LInn_N", "LInn_S"]))
def test_factor_round_trip(seed, name, fam):
    g = load_fixture(name)
    phi = Automorphism(g, sample_word(g, [fam], random.Random(seed)))
    word = factor_conjugating(phi, fam)
    assert Automorphism(g, word) == phi


def test_factoring_a_transvection_is_refused(gd):
    with pytest.raises(MembershipError):
        factor_conjugating(aut(gd, "tr(v,a)"))
    with pytest.raises(AutomorphismError):
        factor_conjugating(aut(gd, "tr(v,a)"), "LInn_Q")


# -- commuting conjugations past transvections -------------------------------

def test_case_four_drops_the_star_of_the_new_letter(ga):
    alpha = GeneratorSymbol("ext", (("b", "f"), ("d", 1)))
    tau = GeneratorSymbol("tr", (("d", 1), ("a", 1)))
    case, word = commutation_case(ga, alpha, tau)
    assert case == "iv"
    assert format_symbols(word) == "tr(d,a) ext({f},a) ext({b,f},d)"
    assert Automorphism(ga, [alpha, tau]) == Automorphism(ga, word)


def test_case_one_commutes(gd):
    alpha = GeneratorSymbol("ext", (("a", "r", "s"), ("v", 1)))
    tau = GeneratorSymbol("tr", (("s", 1), ("r", 1)))
    assert commutation_case(gd, alpha, tau) == ("i", [tau, alpha])


def test_no_case_when_letter_lies_in_the_conjugated_set(gd):
    alpha = GeneratorSymbol("ext", (("a", "r", "s"), ("v", 1)))
    with pytest.raises(AutomorphismError):
        commutation_case(gd, alpha, GeneratorSymbol("tr", (("v", 1), ("a", 1))))


@pytest.mark.parametrize("name", ["GA", "GD"])
def test_rewrite_moves_transvections_left(name):
    g = load_fixture(name)
    rng = random.Random(3)
    tame = [s for s in generator_family(g, "LInn_T")]
    trs = [s for s in mixed_symbols(g) if s.kind == "tr"]
    done = 0
    for _ in range(200):
        a, t = rng.choice(tame), rng.choice(trs)
        try:
            out = rewrite_tame(g, a, t)
        except AutomorphismError:
            continue
        done += 1
        assert Automorphism(g, [a, t]) == Automorphism(g, out)
        assert all(s.kind in ("ctr", "tr") for s in out[:1]) or out == [a]
    assert done > 50


# -- stabiliser and conjugating parts ------------------------------------------

def test_balanced_factorization_splits_both_parts():
    p4 = load_fixture("P4")
    syms = parse_symbols(p4, "lc({d},b) tr(a,b) lc({a},c)^-1 tr(d,c^-1)")
    bf = balanced_factorization(p4, syms)
    assert bf.st_part and bf.conj_part
    assert Automorphism(p4, list(bf.st_part) + list(bf.conj_part)) == Automorphism(p4, syms)
    assert classify(Automorphism(p4, bf.st_part))["St_K"].status == "yes"
    assert classify(Automorphism(p4, bf.conj_part))["conjugating"].status == "yes"


def test_transvection_words_on_cycle_have_no_conjugating_part():
    c5 = load_fixture("C5")
    syms = [s for s in mixed_symbols(c5) if s.kind in ("tr", "inv")][:4]
    bf = balanced_factorization(c5, syms)
    assert Automorphism(c5, bf.st_part) == Automorphism(c5, syms)
    assert Automorphism(c5, bf.conj_part).is_identity()


def test_unbalanced_graph_is_refused(gd):
    with pytest.raises(UnbalancedGraphError) as info:
        balanced_factorization(gd, parse_symbols(gd, OBSTRUCTION))
    w = info.value.witness
    assert (w.vertex, w.a, w.b) == ("v", "a", "b")


def test_split_search_is_bounded_evidence(gd):
    v = search_st_conj_split(aut(gd, OBSTRUCTION))
    assert v.status == "unknown" and v.label() == "unknown(3)"
    found = search_st_conj_split(aut(gd, 'tr(v,a) inner("a b")'))
    assert found.status == "yes"


def test_disconnected_graph_is_refused():
    g = Graph(["a", "b", "c"], [("a", "b")])
    with pytest.raises(AutomorphismError):
        balanced_factorization(g, [])
