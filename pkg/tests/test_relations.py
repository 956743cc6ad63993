import dataclasses
import json

import pytest

from raagaut.automorphisms import Automorphism, GeneratorSymbol
from raagaut.graph_lattice import Graph, load_fixture
from raagaut.relations import (
    FAMILIES,
    IsolatedVertexError,
    RelationError,
    compare_r11_readings,
    direct_product_projection,
    emit_presentation,
    fr_generators,
    instantiate_relators,
    verify_families,
    verify_relator,
)

EDGE_EDGE = Graph(["a", "b", "c", "d"], [("a", "b"), ("c", "d")])


@pytest.mark.parametrize("name", ["GD", "P3_P3", "EE_points"])
def test_every_instance_verifies(name):
    rep = verify_families(load_fixture(name))
    assert rep.total > 100
    assert rep.failures == []


def test_family_selection_and_ranges():
    g = load_fixture("P3_P3")
    fams = {r.family for r in instantiate_relators(g, "R1-R3,W")}
    assert fams <= {"R1", "R2", "R3", "W"} and "W" in fams
    assert set(verify_families(g, ["S1", "S2"]).counts()) <= {"S1", "S2"}
    with pytest.raises(RelationError):
        instantiate_relators(g, "R99")


def test_families_on_a_connected_graph_are_empty(gd):
    # the component relators need at least two components
    assert verify_families(gd, "R1-R11").total == 0


def test_corrupted_instances_fail():
    g = load_fixture("P3_P3")
    bad = 0
    for r in instantiate_relators(g)[:300]:
        extra = GeneratorSymbol("inv", (g.vertices[0],))
        broken = dataclasses.replace(r, rhs=r.rhs + (extra,))
        assert verify_relator(r)
        bad += not verify_relator(broken)
    assert bad == 300


def test_sign_sensitive_families_only_pair_letters_of_one_sign():
    g = load_fixture("EE_points")
    r3 = instantiate_relators(g, "R3")
    assert r3 and all(verify_relator(r) for r in r3)
    for r in r3:
        x, y = (v for _, v in r.bindings)
        assert x.endswith("^-1") == y.endswith("^-1")
    s7 = instantiate_relators(g, "S7")
    assert s7 and all(verify_relator(r) for r in s7)
    for r in s7:
        label, b = (v for _, v in r.bindings)
        moving = label.rsplit('"', 2)[-2]
        assert moving.endswith("^-1") == b.endswith("^-1")


def test_r11_per_letter_reading_holds():
    for name in ("P3_P3", "GD_edge_point"):
        readings = compare_r11_readings(load_fixture(name))
        n, ok = readings["per-letter"]
        assert n > 0 and ok == n
        n, ok = readings["uniform-eps1"]
        assert ok < n


def test_report_tsv_and_counts():
    rep = verify_families(load_fixture("P3_P3"), "W,D")
    lines = rep.to_tsv().splitlines()
    assert lines[0] == "family\tbindings\tverdict"
    assert len(lines) == rep.total + 1
    assert all(n == ok for n, ok in rep.counts().values())


def test_families_constant_lists_every_tag():
    assert FAMILIES[0] == "R1" and "sigma" in FAMILIES and FAMILIES[-1] == "S9"


# -- kernel generators and the presentation ----------------------------------

def test_kernel_generators_of_two_edges():
    gens = fr_generators(EDGE_EDGE)
    assert len(gens) == 8
    assert {str(s) for s in gens} >= {"lc({a,b},c)", "lc({c,d},b^-1)"}


def test_kernel_generators_need_no_isolated_vertices():
    with pytest.raises(IsolatedVertexError):
        fr_generators(load_fixture("EE_points"))


def test_kernel_generators_project_trivially():
    g = load_fixture("P3_P3")
    for s in fr_generators(g):
        images = direct_product_projection(g, Automorphism(g, [s]))
        assert images == [(2 * i + 1,) for i in range(len(g))]


@pytest.mark.parametrize("name", ["P3_P3", "GD_edge_point", "EE_points"])
def test_presentation_is_closed(name):
    pres = emit_presentation(load_fixture(name))
    names = pres.generator_names()
    assert len(names) == len(set(names))
    assert pres.unknown_symbols() == set()
    assert all(verify_relator(r) for r in pres.relators)
    data = json.loads(pres.to_json())
    assert data["generators"] == names
    assert pres.to_text().startswith("< ")


def test_presentation_placeholders_name_factor_relators():
    pres = emit_presentation(load_fixture("GD_edge_point"))
    assert pres.placeholders and all(p.startswith("R_") for p in pres.placeholders)
