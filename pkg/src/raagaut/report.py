"""Graph analysis tables shared by the CLI text, TSV and JSON outputs."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .graph_lattice import (
    Graph,
    admissible_set,
    closure,
    compressed_automorphisms,
    dominated_vertices,
    enumerate_lattice,
    graph_automorphisms,
    is_balanced,
    isomorphism_type,
    orthogonal_complement,
    out_set,
    total_order,
    vertex_classification,
)


def _set(vs) -> str:
    return "{" + ",".join(vs.names() if hasattr(vs, "names") else vs) + "}"


@dataclass
class Analysis:
    graph: Graph
    rows: list       # (section, key, value) triples, all strings

    def sections(self) -> dict:
        out: dict = {}
        for sec, key, val in self.rows:
            out.setdefault(sec, []).append((key, val))
        return out

    def to_text(self) -> str:
        lines = []
        for sec, items in self.sections().items():
            lines.append(f"[{sec}]")
            width = max((len(k) for k, _ in items), default=0)
            for k, v in items:
                lines.append(f"  {k:<{width}}  {v}")
        return "\n".join(lines) + "\n"

    def to_tsv(self) -> str:
        return "section\tkey\tvalue\n" + "".join(f"{s}\t{k}\t{v}\n" for s, k, v in self.rows)

    def to_json(self) -> str:
        return json.dumps({s: dict(items) for s, items in self.sections().items()}, indent=2)


def analyze(g: Graph, tie_breaks=None) -> Analysis:
    rows = []
    for v in g.vertices:
        rows.append(("perp", v, _set(orthogonal_complement(g, [v]))))
    for v in g.vertices:
        rows.append(("cl", v, _set(closure(g, [v]))))
    for v in g.vertices:
        rows.append(("adm", v, _set(admissible_set(g, [v]))))
    kx = sorted({admissible_set(g, [v]).names() for v in g.vertices}, key=lambda t: (len(t), t))
    rows.append(("lattice", "K_X", " ".join(_set(t) for t in kx)))
    rows.append(("lattice", "|K|", str(len(enumerate_lattice(g, "K")))))
    rows.append(("lattice", "|L|", str(len(enumerate_lattice(g, "L")))))
    vc = vertex_classification(g)
    for c, tag in zip(vc.classes, vc.tags):
        rep = c.names()[0]
        rows.append(("classes", _set(c), f"{tag} height={vc.heights.get(rep, 0)}"))
    for h, level in enumerate(vc.b_sets):
        rows.append(("heights", f"B{h}", " ".join(_set(Y) for Y in level)))
    rows.append(("order", "ascending", " ".join(total_order(g, tie_breaks))))
    dom = dominated_vertices(g)
    rows.append(("domination", "Dom", _set(dom)))
    for v in dom.names():
        rows.append(("domination", f"out({v})", _set(out_set(g, v))))
    bal = is_balanced(g)
    if bal.balanced:
        rows.append(("balance", "balanced", "yes"))
    else:
        w = bal.witness
        comps = " ".join(_set(c) for c in w.components)
        rows.append(("balance", "balanced", f"no witness=({w.vertex},{w.a},{w.b}) components={comps}"))
    it = isomorphism_type(g)
    rows.append(("components", "isolated", str(it.isolated_count)))
    for k, grp in enumerate(it.groups, 1):
        rows.append(("components", f"type{k}", f"{_set(grp.representative)} x{grp.multiplicity}"))
    rows.append(("automorphisms", "|Aut(graph)|", str(len(graph_automorphisms(g)))))
    rows.append(("automorphisms", "|Aut_comp(graph)|", str(len(compressed_automorphisms(g)))))
    return Analysis(g, rows)
