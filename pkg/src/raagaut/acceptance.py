"""Acceptance suite: worked examples reproduced exactly, plus exhaustive and
sampled property sweeps cross-checked against :mod:`raagaut.oracles`.

Each criterion returns a :class:`CriterionResult`; :func:`run_all` runs the
fourteen of them in order.  Sampled checks draw from ``random.Random(seed)``.
"""

from __future__ import annotations

import collections
import itertools
import random
import time
from dataclasses import dataclass

from . import oracles
from .automorphisms import (
    Automorphism,
    AutomorphismError,
    DescentError,
    GeneratorSymbol,
    InvalidGeneratorError,
    UnbalancedGraphError,
    balanced_factorization,
    classify,
    commutation_case,
    conjugate_composite,
    factor_conjugating,
    generator_family,
    is_tame,
    push_composite,
    search_st_conj_split,
    symbol_images,
)
from .graph_lattice import (
    Graph,
    admissible_closure,
    admissible_set,
    bits,
    closure,
    components,
    compressed_automorphisms,
    dominates,
    graph_automorphisms,
    h_closure_mask,
    is_balanced,
    load_fixture,
    orthogonal_complement,
    out_set,
    total_order,
    vertex_classification,
)
from .relations import verify_families
from .words import (
    Word,
    block_codes,
    cyclic_codes,
    equal,
    left_divisor_codes,
    normal_codes,
    root_codes,
)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:2d} {self.title}: {self.detail} ({self.seconds:.1f}s)"


class _Checks:
    """Collects named boolean checks and keeps the first few failures."""

    def __init__(self):
        self.n = 0
        self.failed: list = []

    def __call__(self, ok: bool, what) -> bool:
        self.n += 1
        if not ok:
            self.failed.append(what)
        return ok

    @property
    def ok(self) -> bool:
        return not self.failed

    def summary(self, unit: str = "checks") -> str:
        head = f"{self.n - len(self.failed)}/{self.n} {unit}"
        if self.failed:
            head += "; first failures: " + "; ".join(str(f) for f in self.failed[:3])
        return head


def _s(g: Graph, Y) -> frozenset:
    return frozenset(Y.names() if hasattr(Y, "names") else Y)


def _fs(text: str) -> frozenset:
    return frozenset(text)


# ---------------------------------------------------------------------------
# 1-5: worked examples
# ---------------------------------------------------------------------------

def criterion_1() -> tuple:
    g = load_fixture("GA")
    p = oracles.PlainGraph.of(g)
    adm = {v: _s(g, admissible_set(g, [v])) for v in g.vertices}
    cl = {v: _s(g, closure(g, [v])) for v in g.vertices}
    perp = {v: _s(g, orthogonal_complement(g, [v])) for v in g.vertices}
    # library and oracle must agree before the stated values are compared
    c = _Checks()
    for v in g.vertices:
        c(adm[v] == p.adm({v}) and cl[v] == p.cl({v}) and perp[v] == p.perp({v}), f"oracle mismatch at {v}")
    items = [
        ("a(a)={a}=cl(a)", adm["a"] == _fs("a") == cl["a"]),
        ("d^=g^={a,c,d,e,g,h}", perp["d"] == perp["g"] == _fs("acdegh")),
        ("a(d)=a(g)={a,d,g}=cl(d)=cl(g)", adm["d"] == adm["g"] == cl["d"] == cl["g"] == _fs("adg")),
        ("cl(b)={a,b}, cl(i)={a,i}", cl["b"] == _fs("ab") and cl["i"] == _fs("ai")),
        ("i^\\i=b^\\b", perp["i"] - {"i"} == perp["b"] - {"b"}),
        ("a(i)=a(b)={a,b,d,g,i}=cl(b)+cl(d)+cl(i)",
         adm["i"] == adm["b"] == _fs("abdgi") == cl["b"] | cl["d"] | cl["i"]),
        ("cl(c)={a,c}, cl(h)={a,h}, c^\\c=h^\\h",
         cl["c"] == _fs("ac") and cl["h"] == _fs("ah") and perp["c"] - {"c"} == perp["h"] - {"h"}),
        ("a(c)=a(h)={a,c,h}=cl(c)+cl(h)", adm["c"] == adm["h"] == _fs("ach") == cl["c"] | cl["h"]),
        ("a(e)={e}=cl(e)", adm["e"] == _fs("e") == cl["e"]),
        ("cl(f)={e,f}, a(f)={a,d,e,f,g}=cl(d)+cl(f)",
         cl["f"] == _fs("ef") and adm["f"] == _fs("adefg") == cl["d"] | cl["f"]),
    ]
    for name, ok in items:
        c(ok, name)
    return c.ok, f"{len(items)} stated values, " + c.summary()


def criterion_2() -> tuple:
    g = load_fixture("P4")
    p = oracles.PlainGraph.of(g)
    c = _Checks()
    c(_s(g, admissible_set(g, ["a"])) == _fs("abc"), "a(a)={a,b,c}")
    c(_s(g, admissible_set(g, ["b"])) == _fs("b"), "a(b)={b}")
    c(_s(g, admissible_set(g, ["a", "d"])) == _fs("bc"), "a({a,d})={b,c}")
    c(_s(g, admissible_closure(g, ["a", "d"])) == _fs("abcd"), "cl_a({a,d})=X")
    c(p.adm({"a", "d"}) == {"b", "c"} and p.adm_closure({"a", "d"}) == set("abcd"), "oracle agrees")
    return c.ok, c.summary()


def criterion_3() -> tuple:
    g = load_fixture("GO")
    vc = vertex_classification(g)
    adm = {v: _s(g, admissible_set(g, [v])) for v in g.vertices}
    c = _Checks()
    classes = {_s(g, k) for k in vc.classes}
    c(classes == {_fs("ab"), _fs("cd"), _fs("ef"), _fs("g")}, f"classes {sorted(map(sorted, classes))}")
    c(oracles.PlainGraph.of(g).classes() == [set(k) for k in ("ab", "cd", "ef", "g")], "oracle classes")
    b = [{_s(g, Y) for Y in level} for level in vc.b_sets]
    c(len(b) == 2, f"{len(b)} height levels")
    c(b[0] == {adm["c"], adm["e"]}, "B0={a(c),a(e)}")
    c(len(b) > 1 and b[1] == {adm["a"], adm["g"]}, "B1={a(a),a(g)}")
    c(vc.heights == {"a": 1, "b": 1, "g": 1, "c": 0, "d": 0, "e": 0, "f": 0}, f"heights {vc.heights}")
    order = total_order(g, list("abcdefg"))
    c(order == list("gbafedc"), f"order {' '.join(order)}")
    return c.ok, c.summary()


def criterion_4() -> tuple:
    g = load_fixture("GD")
    c = _Checks()
    kx = {_s(g, admissible_set(g, [v])) for v in g.vertices}
    want = {_fs("abcv"), _fs("ars"), _fs("bct"), _fs("a"), _fs("b"), _fs("c"), _fs("r")}
    c(kx == want, f"K_X {sorted(map(sorted, kx))}")
    comps = {_s(g, C) for C in components(g, orthogonal_complement(g, ["v"]))}
    c(comps == {_fs("ars"), _fs("bt")}, f"components {sorted(map(sorted, comps))}")
    c(dominates(g, "a", "v"), "a dominates v")
    c(_s(g, out_set(g, "v")) == _fs("ab"), "out(v)={a,b}")
    bal = is_balanced(g)
    w = bal.witness
    c(not bal.balanced and w is not None and (w.vertex, w.a, w.b) == ("v", "a", "b"), f"balance {bal}")
    return c.ok, c.summary()


def _gd_obstruction() -> Automorphism:
    g = load_fixture("GD")
    return Automorphism.parse(g, "lc({a,r,s},v) tr(v,a) tr(v,b) tr(v,a^-1)")


def criterion_5() -> tuple:
    phi = _gd_obstruction()
    g = phi.graph
    c = _Checks()
    u = Word.parse(g, "v a^-1 b a")
    for z in "bct":
        c(equal(phi.image(z), Word.parse(g, z)), f"{z} fixed")
    c(equal(phi.image("v"), u), f"v -> {phi.image('v')}")
    for z in "ars":
        c(equal(phi.image(z), u.inverse() * Word.parse(g, z) * u), f"{z} -> {phi.image(z)}")
    return c.ok, c.summary()


# ---------------------------------------------------------------------------
# 6-7: relators and commutation rules
# ---------------------------------------------------------------------------

def criterion_6() -> tuple:
    t0 = time.perf_counter()
    total = passed = 0
    parts = []
    bad = []
    for name in ("GD", "GA", "GD_edge_point", "P3_P3"):
        rep = verify_families(load_fixture(name))
        total += rep.total
        passed += rep.total - len(rep.failures)
        parts.append(f"{name} {rep.total}")
        bad += [f"{name}:{r.family} {r.binding_text()}" for r in rep.failures[:2]]
    secs = time.perf_counter() - t0
    ok = total >= 1000 and passed == total and secs < 300
    detail = f"{passed}/{total} instances ({', '.join(parts)})"
    if bad:
        detail += "; failures: " + "; ".join(bad[:3])
    return ok, detail


def _letters(g: Graph) -> list:
    return [(v, s) for v in g.vertices for s in (1, -1)]


def _valid(g: Graph, sym: GeneratorSymbol) -> bool:
    try:
        symbol_images(g, sym)
        return True
    except InvalidGeneratorError:
        return False


def _ext_symbols(g: Graph) -> list:
    out = []
    for y in g.vertices:
        comps = g.perp_components(g._idx(y))
        for k in range(1, len(comps) + 1):
            for cs in itertools.combinations(comps, k):
                m = 0
                for c in cs:
                    m |= c
                out.append(GeneratorSymbol("ext", (tuple(g.names(m)), (y, 1))))
    return out


def _transvections(g: Graph) -> list:
    out = []
    for x, y in itertools.product(_letters(g), repeat=2):
        s = GeneratorSymbol("tr", (x, y))
        if x[0] != y[0] and _valid(g, s):
            out.append(s)
    return out


def _composites(g: Graph, max_len: int = 2) -> list:
    out = []
    for v in _letters(g):
        ok = [l for l in _letters(g) if l[0] != v[0] and _valid(g, GeneratorSymbol("tr", (v, l)))]
        for k in range(1, max_len + 1):
            for w in itertools.product(ok, repeat=k):
                codes = [2 * g._idx(a) + (1 if s > 0 else 0) for a, s in w]
                if len(normal_codes(g, codes)) == k:
                    out.append(GeneratorSymbol("ctr", (v, tuple(w))))
    return out


def criterion_7() -> tuple:
    c = _Checks()
    cases: collections.Counter = collections.Counter()
    for name in ("GA", "GD"):
        g = load_fixture(name)
        exts, trs = _ext_symbols(g), _transvections(g)
        for a in exts:
            L = set(a.args[0])
            y = a.args[1][0]
            for t in trs:
                (v, _), (x, _) = t.args
                outside = v == y and x in L
                try:
                    case, word = commutation_case(g, a, t)
                except DescentError as exc:
                    c(False, f"{name} {a} {t}: {exc}")
                    continue
                except AutomorphismError:
                    c(outside, f"{name} {a} {t}: no case")
                    cases["outside"] += 1
                    continue
                cases[case] += 1
                c(not outside and Automorphism(g, [a, t]) == Automorphism(g, word), f"{name} {a} {t}: case {case}")
        for a in (e for e in exts if is_tame(g, e)):
            for t in _composites(g):
                v = t.args[0]
                try:
                    if v[0] != a.args[1][0]:
                        t2 = conjugate_composite(g, a, t)
                        symbol_images(g, t2)
                        cases["moved past"] += 1
                        c(Automorphism(g, [a, t]) == Automorphism(g, [t2, a]), f"{name} {a} {t}: conjugated")
                    elif v == a.args[1]:
                        w = push_composite(g, a, t)
                        cases["pushed"] += 1
                        c(Automorphism(g, [a, t]) == Automorphism(g, w)
                          and all(is_tame(g, s) for s in w[1:]), f"{name} {a} {t}: pushed")
                except AutomorphismError as exc:
                    c(False, f"{name} {a} {t}: {exc}")
    counts = ", ".join(f"{k} {cases[k]}" for k in ("i", "ii", "iii", "iv", "moved past", "pushed"))
    detail = f"{c.summary('instances')} ({counts}; {cases['outside']} outside the hypotheses, all with v=y and x in L)"
    return c.ok, detail


# ---------------------------------------------------------------------------
# 8: word calculus against brute force
# ---------------------------------------------------------------------------

def _to_oracle(g: Graph, codes) -> tuple:
    return tuple((g.vertices[c >> 1], 1 if c & 1 else -1) for c in codes)


def _to_codes(g: Graph, word) -> tuple:
    return tuple(2 * g._idx(v) + (1 if s > 0 else 0) for v, s in word)


def _small_graphs(max_n: int) -> list:
    import networkx as nx

    out = []
    for h in nx.graph_atlas_g():
        n = h.number_of_nodes()
        if n > max_n:
            break
        names = [f"v{i}" for i in range(n)]
        out.append(Graph(names, [(names[u], names[v]) for u, v in h.edges()]))
    return out


def _random_graph(rng: random.Random, n: int) -> Graph:
    names = [f"v{i}" for i in range(n)]
    return Graph(names, [(names[i], names[j]) for i, j in itertools.combinations(range(n), 2) if rng.random() < 0.5])


def _check_words(g: Graph, o: oracles.WordOracle, words, c: _Checks, rng: random.Random):
    """normalize and equal on every word; returns the distinct elements seen."""
    elements = {}
    tag = g.edges()
    for w in words:
        codes = _to_codes(g, w)
        nf = _to_codes(g, o.nf(w))
        mine = normal_codes(g, codes)
        c(mine == nf, (tag, "nf", w))
        elements.setdefault(nf, w)
    pool = list(elements)
    for nf, w in elements.items():
        other = pool[rng.randrange(len(pool))]
        u = Word(g, _to_codes(g, w))
        c(equal(u, Word(g, nf)) and equal(u, Word(g, other)) == (other == nf), (tag, "equal", w))
    return list(elements)


def _check_elements(g: Graph, o: oracles.WordOracle, elements, c: _Checks):
    """gd, cyclic, block and root on each element given by its normal form codes."""
    p = o.g
    tag = g.edges()
    n = len(g)
    for nf in elements:
        w = _to_oracle(g, nf)
        divs = o.left_divisors(w)
        for ymask in range(1 << n):
            Y = {g.vertices[i] for i in range(n) if ymask >> i & 1}
            cands = [d for d in divs if {v for v, _ in d} <= Y]
            best = max(cands, key=len)
            greatest = all(d in o.left_divisors(best) for d in cands)
            mine, _ = left_divisor_codes(g, nf, ymask)
            c(greatest and mine == _to_codes(g, best), (tag, "gd", w, ymask))
        u, core = cyclic_codes(g, nf)
        ow_u, ow_core = _to_oracle(g, u), _to_oracle(g, core)
        c(o.mul(o.inv(ow_u), ow_core, ow_u) == w and oracles.is_cyclically_minimal(o, ow_core)
          and len(core) == len(oracles.cyclic_core(o, w)), (tag, "cyclic", w))
        bl = block_codes(g, core)
        c({frozenset(v for v, _ in _to_oracle(g, b)) for b in bl} == {frozenset(b) for b in oracles.blocks(p, ow_core)}
          and o.nf(tuple(l for b in bl for l in _to_oracle(g, b))) == ow_core, (tag, "blocks", w))
        r, k = root_codes(g, nf)
        c(o.nf(_to_oracle(g, r) * k) == w and k == oracles.root_exponent(o, w), (tag, "root", w))


def criterion_8(seed: int = 0, small_len: int = 6, small_elem_len: int = 4,
                random_count: int = 200, random_len: int = 4, random_long: int = 40,
                random_elem_len: int = 3) -> tuple:
    rng = random.Random(seed)
    c = _Checks()
    small = _small_graphs(4)
    for g in small:
        o = oracles.WordOracle(oracles.PlainGraph.of(g))
        els = _check_words(g, o, oracles.all_words(_letters(g), small_len), c, rng)
        _check_elements(g, o, [e for e in els if len(e) <= small_elem_len], c)
    for _ in range(random_count):
        g = _random_graph(rng, 5)
        o = oracles.WordOracle(oracles.PlainGraph.of(g))
        letters = _letters(g)
        longer = [tuple(rng.choice(letters) for _ in range(rng.randint(random_len + 1, 6))) for _ in range(random_long)]
        els = _check_words(g, o, itertools.chain(oracles.all_words(letters, random_len), longer), c, rng)
        _check_elements(g, o, [e for e in els if len(e) <= random_elem_len]
                        + [e for e in els if len(e) > random_len], c)
    scope = (f"{len(small)} graphs on <=4 vertices: all words of length <={small_len}, element functions on "
             f"elements of length <={small_elem_len}; {random_count} random 5-vertex graphs: all words of "
             f"length <={random_len} plus {random_long} random words of length {random_len + 1}-6")
    return c.ok, f"{c.summary()} [{scope}]"


# ---------------------------------------------------------------------------
# 9 and 12: lemma suites over all small graphs
# ---------------------------------------------------------------------------

def _lemma_checks(g: Graph, p: oracles.PlainGraph, c: _Checks):
    n = len(g)
    full = (1 << n) - 1
    tag = g.edges()
    perp = [g.perp(1 << i) for i in range(n)]
    adm = [g.adm1(i) for i in range(n)]
    cl = [g.cl(1 << i) for i in range(n)]
    link = [perp[i] & ~(1 << i) for i in range(n)]

    def comm(u, v):
        return perp[u] >> v & 1

    for U in range(1 << n):
        names = set(g.names(U))
        c(g.adm(U) == g.mask(p.adm(names)) and g.cl(U) == g.mask(p.cl(names)), f"{tag} oracle {names}")
        # a(U) is the union of a(y) over its members
        union = 0
        for y in bits(g.adm(U)):
            union |= adm[y]
        c(union == g.adm(U), f"{tag} ad9 {names}")
        for V in range(1 << n):
            if U & ~V == 0:
                c(g.adm(V) & ~g.adm(U) == 0, f"{tag} ad1 {U} {V}")
            c(g.adm(U) & g.adm(V) == g.adm(U | V), f"{tag} ad10 {U} {V}")
    same = [[x for x in range(n) if adm[x] == adm[z]] for z in range(n)]
    klass = [sum(1 << z for z in range(n) if perp[x] & ~(1 << x | 1 << z) == perp[z] & ~(1 << x | 1 << z))
             for x in range(n)]
    kperp = [sum(1 << z for z in range(n) if perp[z] == perp[x]) for x in range(n)]
    kdiam = [sum(1 << z for z in range(n) if link[z] == link[x]) for x in range(n)]
    k_min = [all(adm[x] & ~adm[y] == 0 for y in range(n) if adm[y] & ~adm[x] == 0) for x in range(n)]
    k_max = [all(adm[y] & ~adm[x] == 0 for y in range(n) if adm[x] & ~adm[y] == 0) for x in range(n)]
    l_min = [all(cl[x] & ~cl[y] == 0 for y in range(n) if cl[y] & ~cl[x] == 0) for x in range(n)]
    for x in range(n):
        c(adm[x] == sum(1 << y for y in range(n) if link[x] & ~perp[y] == 0), f"{tag} admot(i) {x}")
        for y in range(n):
            c(bool(adm[x] >> y & 1) == (cl[y] & ~adm[x] == 0), f"{tag} admot(ii) {x} {y}")
        c(cl[x] == adm[x] & perp[x], f"{tag} ad2 {x}")
        clique = all(comm(u, v) for u in bits(perp[x]) for v in bits(perp[x]))
        c((perp[x] & ~adm[x] == 0) == clique, f"{tag} ad3 {x}")
        if cl[x] == adm[x]:
            c(all(cl[y] == adm[y] for y in bits(adm[x])), f"{tag} ad13 {x}")
        c(set(same[x]) == set(bits(klass[x])), f"{tag} ad1(i) {x}")
        lower = 0
        for y in bits(adm[x]):
            if adm[y] != adm[x] and adm[y] & ~adm[x] == 0:
                lower |= adm[y]
        c(klass[x] == adm[x] & ~lower, f"{tag} ad1(ii) {x}")
        if cl[x] == adm[x]:
            c(klass[x] == kperp[x], f"{tag} ad2 perp {x}")
        else:
            c(cl[x] & ~adm[x] == 0 and klass[x] == kdiam[x], f"{tag} ad2 diamond {x}")
        c(k_min[x] == (klass[x] == adm[x]), f"{tag} admin {x}")
        if k_min[x]:
            c(l_min[x] and all(cl[y] == kperp[y] for y in bits(adm[x])), f"{tag} admin(i,ii) {x}")
        for z in range(n):
            if z == x:
                continue
            if link[x] & ~link[z] == 0:
                c(adm[z] & ~adm[x] == 0, f"{tag} ad5 {x} {z}")
            if perp[x] & ~perp[z] == 0:
                c(adm[z] & ~adm[x] == 0, f"{tag} ad6 {x} {z}")
            c((adm[z] & ~adm[x] == 0) == (link[x] & ~perp[z] == 0), f"{tag} ad12 {x} {z}")
            c((adm[x] == adm[z]) == (perp[x] == perp[z] or link[x] == link[z]), f"{tag} ad7 {x} {z}")
            if adm[x] >> z & 1:
                c(adm[z] & ~adm[x] == 0, f"{tag} ad8 {x} {z}")
            if comm(x, z):
                c(all(comm(u, v) for u in bits(adm[x]) for v in bits(adm[z])), f"{tag} ad11 {x} {z}")
        # closure H_x on single vertices
        for y in range(n):
            hy = h_closure_mask(g, x, 1 << y)
            if perp[x] >> y & 1:
                c(hy == 1 << y, f"{tag} hel(i) {x} {y}")
            else:
                for z in range(n):
                    if z != x and k_max[z] and adm[y] & ~adm[z] == 0:
                        c(hy == h_closure_mask(g, x, 1 << z), f"{tag} hel(ii) {x} {y} {z}")
    for y in range(n):
        comps_y = g.components_mask(perp[y])
        for C in comps_y:
            for x in range(n):
                if adm[x] & ~(C | perp[y]) and adm[x] & C:
                    c(bool(adm[x] >> y & 1), f"{tag} fixad {x} {y} {C}")
                if not g.dominates_idx(x, y):
                    continue
                comps_x = g.components_mask(perp[x])
                if not C >> x & 1:
                    c(C in comps_x, f"{tag} xycomps(i) {x} {y} {C}")
                else:
                    meet = 0
                    for D in comps_x:
                        if D & C:
                            meet |= D
                    c(C == (meet | perp[x]) & ~perp[y] & full, f"{tag} xycomps(ii) {x} {y} {C}")


def criterion_9() -> tuple:
    c = _Checks()
    graphs = _small_graphs(6)
    for g in graphs:
        _lemma_checks(g, oracles.PlainGraph.of(g), c)
    return c.ok, f"{len(graphs)} graphs up to isomorphism, {c.summary()}"


def criterion_12() -> tuple:
    graphs = _small_graphs(6)
    bad = []
    checked = 0
    for g in graphs:
        if g.dominated_mask():
            continue
        checked += 1
        p = oracles.PlainGraph.of(g)
        if any(p.dominates(x, y) for x in g.vertices for y in g.vertices if x != y):
            bad.append(f"{g.edges()}: domination disagrees with oracle")
        for x in g.vertices:
            if p.adm({x}) != p.cl({x}):
                bad.append(f"{g.edges()}: {x}")
    ok = not bad
    detail = f"{checked} of {len(graphs)} graphs have no dominated vertex, {len(bad)} counterexamples"
    return ok, detail + (f": {bad[:3]}" if bad else "")


# ---------------------------------------------------------------------------
# 10-11: factorisation and classification
# ---------------------------------------------------------------------------

def _random_product(g: Graph, gens: list, rng: random.Random) -> list:
    return [(s if rng.random() < 0.5 else s.inverse()) for s in (rng.choice(gens) for _ in range(rng.randint(1, 6)))]


def criterion_10(seed: int = 0, samples: int = 500) -> tuple:
    rng = random.Random(seed)
    c = _Checks()
    targets = [(name, fam) for name in ("GD", "GA") for fam in ("LInn", "LInn_V", "LInn_N")]
    for k in range(samples):
        name, fam = targets[k % len(targets)]
        g = load_fixture(name)
        gens = generator_family(g, fam)
        word = _random_product(g, gens, rng)
        phi = Automorphism(g, word)
        try:
            back = factor_conjugating(phi, fam)
            c(Automorphism(g, back) == phi, f"{name} {fam} {word}")
        except AutomorphismError as exc:
            c(False, f"{name} {fam} {word}: {exc}")
    return c.ok, c.summary("round trips")


def criterion_11(seed: int = 0, samples: int = 500) -> tuple:
    rng = random.Random(seed)
    c = _Checks()
    unknown = 0
    unbounded = 0
    decided = 0
    for k in range(samples):
        g = load_fixture(("GD", "GA")[k % 2])
        phi = Automorphism(g, _random_product(g, generator_family(g, "LInn"), rng))
        r = classify(phi)
        conj, st, cs, cv, cc = (r[k] for k in ("conjugating", "St_K", "Conj_S", "Conj_V", "Conj_C"))
        verdicts = (conj, st, cs, cv, cc)
        for v in verdicts:
            if not v.decisive:
                unknown += 1
                unbounded += v.bound is None
        if all(v.decisive for v in (conj, st, cs)):
            decided += 1
            c(bool(cs) == (bool(st) and bool(conj)), f"Conj_S on {phi}")
        if all(v.decisive for v in (st, cv, cc)):
            decided += 1
            c(bool(cc) == (bool(cv) and bool(st)), f"Conj_C on {phi}")
    rate = unknown / (5 * samples)
    ok = c.ok and rate <= 0.05 and unbounded == 0
    return ok, f"{c.summary('decisive comparisons')}, unknown verdicts {100 * rate:.1f}% ({unbounded} unbounded)"


# ---------------------------------------------------------------------------
# 13-14: automorphism count and the unbalanced obstruction
# ---------------------------------------------------------------------------

def criterion_13() -> tuple:
    c = _Checks()
    parts = []
    for name in ("GA", "GO", "GD", "C5"):
        g = load_fixture(name)
        p = oracles.PlainGraph.of(g)
        total = p.automorphism_count()
        lhs = p.class_factorial_product() * len(compressed_automorphisms(g))
        c(total == lhs == len(graph_automorphisms(g)), f"{name}: {total} vs {lhs}")
        parts.append(f"{name} {total}")
    return c.ok, f"{c.summary('graphs')} (|Aut|: {', '.join(parts)})"


def criterion_14() -> tuple:
    phi = _gd_obstruction()
    c = _Checks()
    v = search_st_conj_split(phi)
    c(v.status == "unknown" and v.bound is not None, f"split search returned {v.label()}")
    try:
        balanced_factorization(phi.graph, phi.symbols)
        c(False, "balanced_factorization accepted GD")
    except UnbalancedGraphError as exc:
        w = exc.witness
        c((w.vertex, w.a, w.b) == ("v", "a", "b"), f"witness {w}")
    return c.ok, f"split search {v.label()} (explored {v.certificate.get('explored') if v.certificate else '?'}), " \
                 f"balanced factorisation refused with witness (v,a,b); {c.summary()}"


CRITERIA = (
    (1, "GA admissible and closure values", criterion_1),
    (2, "P4 admissible sets and closure", criterion_2),
    (3, "GO classes, heights and order", criterion_3),
    (4, "GD lattice, components and balance", criterion_4),
    (5, "GD obstruction automorphism images", criterion_5),
    (6, "relator suite", criterion_6),
    (7, "commutation rules for conjugations and transvections", criterion_7),
    (8, "word calculus against brute force", criterion_8),
    (9, "admissible-set lemma suite", criterion_9),
    (10, "factorisation round trips", criterion_10),
    (11, "classification coherence", criterion_11),
    (12, "no domination implies a(x)=cl(x)", criterion_12),
    (13, "automorphism count identity", criterion_13),
    (14, "unbalanced negative control", criterion_14),
)

_SEEDED = {8, 10, 11}


def run_criterion(number: int, seed: int = 0) -> CriterionResult:
    _, title, fn = CRITERIA[number - 1]
    t0 = time.perf_counter()
    try:
        ok, detail = fn(seed) if number in _SEEDED else fn()
    except Exception as exc:  # a crash is a failed criterion, reported with its cause
        ok, detail = False, f"raised {type(exc).__name__}: {exc}"
    return CriterionResult(number, title, ok, detail, time.perf_counter() - t0)


def run_all(seed: int = 0) -> list:
    return [run_criterion(n, seed) for n, _, _ in CRITERIA]
