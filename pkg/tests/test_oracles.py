"""Sanity checks on the brute-force references themselves."""

from raagaut import oracles

PATH = oracles.PlainGraph(["a", "b", "c"], [("a", "b"), ("b", "c")])


def test_equivalence_class_uses_only_commutations_and_cancellation():
    cls = oracles.equivalence_class(PATH, (("a", 1), ("b", 1), ("c", 1)))
    assert (("b", 1), ("a", 1), ("c", 1)) in cls
    assert (("a", 1), ("c", 1), ("b", 1)) in cls
    assert (("c", 1), ("a", 1), ("b", 1)) not in cls


def test_normal_form_is_least_geodesic():
    o = oracles.WordOracle(PATH)
    assert o.nf((("c", 1), ("b", 1), ("a", 1), ("a", -1))) == (("b", 1), ("c", 1))
    assert o.nf((("a", 1), ("c", 1), ("a", -1))) == (("a", 1), ("c", 1), ("a", -1))


def test_ball_sizes_of_free_abelian_and_free_groups():
    assert len(oracles.WordOracle(oracles.PlainGraph(["a", "b"], [("a", "b")])).ball(2)) == 13
    assert len(oracles.WordOracle(oracles.PlainGraph(["a", "b"], [])).ball(2)) == 17


def test_roots_and_cores():
    o = oracles.WordOracle(oracles.PlainGraph(["a", "b"], []))
    w = (("b", -1),) + (("a", 1), ("b", 1)) * 2 + (("b", 1),)
    assert len(oracles.cyclic_core(o, w)) == 4
    assert oracles.root_exponent(o, w) == 2


def test_graph_helpers():
    assert PATH.adm({"a"}) == {"a", "b", "c"}
    assert PATH.adm({"b"}) == {"b"}
    assert PATH.dominates("a", "c") and PATH.dominates("c", "a")
    assert not PATH.dominates("b", "a")
    assert PATH.automorphism_count() == 2 == PATH.class_factorial_product()
    assert [sorted(c) for c in PATH.components({"b"})] == [["a"], ["c"]]
