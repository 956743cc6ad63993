"""Relator families for the presentation of the automorphism group over the
connected components of the graph, and their machine verification.

Components with at least two vertices are numbered 1, 2, ... in order of
their least vertex; isolated vertices are referred to by name.  Isomorphism
classes of components (for the swap generators ``omega``) are numbered as in
:func:`raagaut.graph_lattice.isomorphism_type`, with class 0 the isolated
vertices.  Commutators are ``[p, q] = p^-1 q^-1 p q``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations, product

from .automorphisms import (
    Automorphism,
    ComponentStructure,
    GeneratorSymbol,
    InvalidGeneratorError,
    format_symbols,
    omega_permutation,
    symbol_images,
    whitehead_hat,
)
from .graph_lattice import Graph, bits, compressed_automorphisms, isomorphism_type
from .words import invert_codes, normal_codes

FAMILIES = ("R1", "R2", "R3", "R4", "R5", "R6", "R7", "R8", "R9", "R10", "R11",
            "W", "D", "symm", "sigma", "eq-whaut",
            "S1", "S2", "S3", "S4", "S5", "S6", "S7", "S8", "S9")

DEFAULT_BOUND = 2


class RelationError(ValueError):
    pass


class IsolatedVertexError(RelationError):
    pass


@dataclass(frozen=True)
class RelatorInstance:
    family: str
    bindings: tuple          # (name, value) pairs
    lhs: tuple               # GeneratorSymbols
    rhs: tuple = ()
    graph: Graph = field(default=None, compare=False, repr=False)

    def binding_text(self) -> str:
        return " ".join(f"{k}={v}" for k, v in self.bindings)

    def text(self) -> str:
        return f"{format_symbols(self.lhs) or '1'} = {format_symbols(self.rhs) or '1'}"


def verify_relator(inst: RelatorInstance, graph: Graph | None = None) -> bool:
    g = graph or inst.graph
    if g is None:
        raise RelationError("relator instance carries no graph")
    return Automorphism(g, inst.lhs).images == Automorphism(g, inst.rhs).images


# ---------------------------------------------------------------------------
# symbol helpers
# ---------------------------------------------------------------------------

def _inv(word) -> tuple:
    return tuple(s.inverse() for s in reversed(word))


def _comm(p, q) -> tuple:
    return _inv(p) + _inv(q) + tuple(p) + tuple(q)


def _tr(x, y) -> GeneratorSymbol:
    return GeneratorSymbol("tr", (x, y))


def _lstr(letter) -> str:
    return letter[0] if letter[1] > 0 else f"{letter[0]}^-1"


def _wstr(word) -> str:
    return " ".join(_lstr(l) for l in word) if word else "1"


def _neg(letter) -> tuple:
    return (letter[0], -letter[1])


def _winv(word) -> tuple:
    return tuple(_neg(l) for l in reversed(word))


class Structure:
    """Component bookkeeping for one graph."""

    def __init__(self, g: Graph):
        self.g = g
        self.cs = ComponentStructure.of(g)
        self.it = isomorphism_type(g)
        self.J = list(range(1, len(self.cs.components) + 1))
        self.isolated = [g.vertices[i] for i in self.cs.isolated]
        self.iso_letters = [(v, s) for v in self.isolated for s in (1, -1)]
        self.letters = [(v, s) for v in g.vertices for s in (1, -1)]
        self.comp_names = {j: tuple(g.names(self.cs.component(j))) for j in self.J}
        self._comp_of = {}
        for j in self.J:
            for v in self.comp_names[j]:
                self._comp_of[v] = j

    def breve(self, letter_or_vertex) -> tuple:
        v = letter_or_vertex[0] if isinstance(letter_or_vertex, tuple) else letter_or_vertex
        j = self._comp_of.get(v)
        return ("J", j) if j is not None else ("S", v)

    def comp(self, v: str):
        return self._comp_of.get(v)

    def lc(self, j: int, y) -> GeneratorSymbol:
        return GeneratorSymbol("lc", (self.comp_names[j], y))

    def gamma(self, word, j: int) -> GeneratorSymbol:
        return GeneratorSymbol("gammaj", (tuple(word), j))

    # -- generator sets ----------------------------------------------------
    def tr_ext(self) -> list:
        return [_tr(x, y) for x in self.iso_letters for y in self.letters if y[0] != x[0]]

    def linn_ext(self) -> list:
        return [self.lc(j, y) for j in self.J for y in self.letters if self.comp(y[0]) != j]

    def first_copies(self) -> list:
        """(class index, vertex names of the first copy) for every isomorphism class."""
        out = []
        if self.isolated:
            out.append((0, (self.it.isolated.names()[0],)))
        for i, grp in enumerate(self.it.groups, 1):
            out.append((i, grp.representative.names()))
        return out

    def p_int(self, names) -> list:
        g = self.g
        mask = g.mask(names)
        out = [GeneratorSymbol("inv", (v,)) for v in names]
        if len(names) > 1:
            for x, y in product([(v, s) for v in names for s in (1, -1)], repeat=2):
                if x[0] == y[0]:
                    continue
                sym = _tr(x, y)
                try:
                    symbol_images(g, sym)
                except InvalidGeneratorError:
                    continue
                out.append(sym)
            for v in names:
                i = g._idx(v)
                for c in g.perp_components(i):
                    if c & ~mask:
                        continue
                    for s in (1, -1):
                        out.append(GeneratorSymbol("lc", (tuple(g.names(c)), (v, s))))
        return out

    def p_comp(self, names) -> list:
        """Compressed graph automorphisms of one component, acting on its first copy."""
        if len(names) < 2:
            return []
        sub = self.g.induced(names)
        out = []
        for a in compressed_automorphisms(sub):
            if a.is_identity():
                continue
            mapping = [(v, a(v)) for v in sub.vertices]
            full = [(v, v) for v in self.g.vertices if v not in names]
            out.append(GeneratorSymbol("gaut", (tuple(sorted(mapping + full, key=lambda p: self.g._idx(p[0]))),)))
        return out

    def p_factor(self, cls: int) -> list:
        names = dict(self.first_copies())[cls]
        return self.p_int(names) + self.p_comp(names)

    def multiplicity(self, cls: int) -> int:
        return len(self.isolated) if cls == 0 else self.it.groups[cls - 1].multiplicity

    def p_symm(self, cls: int) -> list:
        m = self.multiplicity(cls)
        return [GeneratorSymbol("omega", (cls, a, b)) for a, b in combinations(range(1, m + 1), 2)]

    def omega(self, cls: int, a: int, b: int) -> tuple:
        """Word for the swap of copies a and b; the identity when they coincide."""
        if a == b:
            return ()
        return (GeneratorSymbol("omega", (cls, min(a, b), max(a, b))),)

    def isolated_copy(self, v: str) -> int:
        return self.isolated.index(v) + 1

    def words_in(self, j: int, bound: int) -> list:
        """Nonempty normal forms of length at most ``bound`` supported in component j."""
        g = self.g
        codes = [2 * g._idx(v) + e for v in self.comp_names[j] for e in (1, 0)]
        seen = set()
        for k in range(1, bound + 1):
            for w in product(codes, repeat=k):
                nf = normal_codes(g, w)
                if len(nf) == k:
                    seen.add(nf)
        return [tuple((g.vertices[c >> 1], 1 if c & 1 else -1) for c in w) for w in sorted(seen, key=lambda w: (len(w), w))]


# ---------------------------------------------------------------------------
# R1 - R11
# ---------------------------------------------------------------------------

def _inst(st: Structure, family: str, bindings: dict, lhs, rhs=()) -> RelatorInstance:
    def fmt(v):
        if isinstance(v, tuple) and len(v) == 2 and isinstance(v[1], int) and isinstance(v[0], str):
            return _lstr(v)
        if isinstance(v, tuple) and all(isinstance(l, tuple) for l in v):
            return _wstr(v)
        return str(v)

    return RelatorInstance(family, tuple((k, fmt(v)) for k, v in bindings.items()), tuple(lhs), tuple(rhs), st.g)


def _r1(st):
    out = []
    trs = st.tr_ext()
    for t1, t2 in product(trs, repeat=2):
        x, y = t1.args
        u, v = t2.args
        bx, by, bu, bv = (st.breve(z) for z in (x, y, u, v))
        case_i = u == _neg(x)
        case_ii = bx != bu and bx != bv and by != bu
        if case_i or case_ii:
            out.append(_inst(st, "R1", {"x": x, "y": y, "u": u, "v": v}, _comm([t1], [t2])))
    return out


def _r2(st):
    out = []
    for x, u in product(st.iso_letters, repeat=2):
        if st.breve(x) == st.breve(u):
            continue
        for y in st.letters:
            if y[0] == x[0] or st.breve(y) == st.breve(u):
                continue
            lhs = _comm([_tr(x, y).inverse()], [_tr(u, x).inverse()])
            out.append(_inst(st, "R2", {"x": x, "y": y, "u": u}, lhs, [_tr(u, y).inverse()]))
    return out


def _r3(st):
    out = []
    z = st.isolated[0] if st.isolated else None
    for x, y in product(st.iso_letters, repeat=2):
        # the right-hand side is sign-blind, so the letters must share a sign
        if x[0] == y[0] or x[1] != y[1]:
            continue
        i, j = st.isolated_copy(x[0]), st.isolated_copy(y[0])
        lhs = [_tr(x, y).inverse(), _tr(y, x), _tr(_neg(x), y)]
        iota = GeneratorSymbol("inv", (z,))
        if j == 1:
            rhs = list(st.omega(0, i, 1)) + [iota]
        else:
            rhs = list(st.omega(0, i, j)) + list(st.omega(0, 1, j)) + [iota] + list(st.omega(0, 1, j))
        out.append(_inst(st, "R3", {"x": x, "y": y}, lhs, rhs))
    return out


def _r4(st):
    out = []
    for i, j in product(st.J, repeat=2):
        if i == j:
            continue
        for x, y in product(st.letters, repeat=2):
            if st.breve(x) in (("J", i), ("J", j)) or st.breve(y) in (("J", i), ("J", j)):
                continue
            out.append(_inst(st, "R4", {"i": i, "j": j, "x": x, "y": y}, _comm([st.lc(i, x)], [st.lc(j, y)])))
    return out


def _r5(st):
    out = []
    for i, j in product(st.J, repeat=2):
        if i == j:
            continue
        for x in st.letters:
            if st.comp(x[0]) != i:
                continue
            for y in st.letters:
                if st.comp(y[0]) in (i, j):
                    continue
                lhs = _comm([st.lc(j, x)], [st.lc(i, y), st.lc(j, y)])
                out.append(_inst(st, "R5", {"i": i, "j": j, "x": x, "y": y}, lhs))
    return out


def _r6(st):
    out = []
    for t in st.tr_ext():
        x, y = t.args
        for a in st.linn_ext():
            l, z = a.args[0], a.args[1]
            lj = st.comp(l[0])
            if st.breve(y) == ("J", lj) or st.breve(x) == st.breve(z):
                continue
            out.append(_inst(st, "R6", {"x": x, "y": y, "l": lj, "z": z}, _comm([t], [a])))
    return out


def _r7(st):
    out = []
    for t in st.tr_ext():
        x, y = t.args
        for l in st.J:
            if st.breve(y) == ("J", l):
                continue
            lhs = _comm([t.inverse()], [st.lc(l, x).inverse()])
            out.append(_inst(st, "R7", {"x": x, "y": y, "l": l}, lhs, [st.lc(l, y).inverse()]))
    return out


def _r8(st):
    out = []
    for t in st.tr_ext():
        x, y = t.args
        i = st.comp(y[0])
        if i is None:
            continue
        for z in st.letters:
            if st.comp(z[0]) == i or z[0] == x[0]:
                continue
            lhs = _comm([t], [st.lc(i, z), _tr(x, z)])
            out.append(_inst(st, "R8", {"x": x, "y": y, "i": i, "z": z}, lhs))
    return out


def _r9(st):
    out = []
    for t in st.tr_ext():
        x, y = t.args
        i = st.comp(y[0])
        if i is None:
            continue
        lhs = [t, st.lc(i, x)]
        rhs = [st.lc(i, x), _tr(_neg(x), y).inverse(), st.gamma((y,), i).inverse()]
        out.append(_inst(st, "R9", {"x": x, "y": y, "i": i}, lhs, rhs))
    return out


def _commuting_disjoint_pairs(st, bound):
    g = st.g
    for i in st.J:
        ws = st.words_in(i, bound)
        for y, z in combinations(ws, 2):
            ym, zm = g.mask(v for v, _ in y), g.mask(v for v, _ in z)
            if ym & zm:
                continue
            if any(not g.adj[a] & (1 << b) for a in bits(ym) for b in bits(zm)):
                continue
            yield i, y, z


def _r10(st, bound):
    out = []
    g = st.g
    for x in st.iso_letters:
        for u in g.vertices:
            if u == x[0]:
                continue
            out.append(_inst(st, "R10", {"case": "i", "x": x, "u": (u, 1)},
                             [_tr(x, (u, 1)).inverse()], [_tr(x, (u, -1))]))
    for j in st.J:
        for u in g.vertices:
            if st.comp(u) == j:
                continue
            out.append(_inst(st, "R10", {"case": "iii", "j": j, "u": (u, 1)},
                             [st.lc(j, (u, 1)).inverse()], [st.lc(j, (u, -1))]))
    pairs = list(_commuting_disjoint_pairs(st, bound))
    for x in st.iso_letters:
        for i, y, z in pairs:
            lhs = _comm([GeneratorSymbol("ctr", (x, y))], [GeneratorSymbol("ctr", (x, z))])
            out.append(_inst(st, "R10", {"case": "ii", "x": x, "y": y, "z": z}, lhs))
    for j in st.J:
        for i, y, z in pairs:
            if i == j:
                continue
            lhs = _comm([st.gamma(y, j)], [st.gamma(z, j)])
            out.append(_inst(st, "R10", {"case": "iv", "j": j, "y": y, "z": z}, lhs))
    return out


def _theta_list(st) -> list:
    out = []
    for cls, names in st.first_copies():
        out += st.p_int(names) + st.p_comp(names) + st.p_symm(cls)
    return out


def _image_word(g: Graph, theta: GeneratorSymbol, letter) -> tuple:
    img = symbol_images(g, theta)[g._idx(letter[0])]
    codes = img if letter[1] > 0 else invert_codes(img)
    return tuple((g.vertices[c >> 1], 1 if c & 1 else -1) for c in codes)


def _r11(st, per_letter: bool = True):
    out = []
    g = st.g
    tag = "R11" if per_letter else "R11-eps1"
    for theta in _theta_list(st):
        if per_letter:
            for t in st.tr_ext():
                x, y = t.args
                zw = _image_word(g, theta, x)
                if len(zw) != 1:
                    continue
                z = zw[0]
                ys = _image_word(g, theta, y)
                rhs = [theta] + [_tr(z, l) for l in reversed(ys)]
                out.append(_inst(st, tag, {"case": "i", "theta": theta, "x": x, "y": y}, [t, theta], rhs))
        images = symbol_images(g, theta)
        for j in st.J:
            cmask = g.mask(st.comp_names[j])
            tgt = {st.comp(g.vertices[images[k][0] >> 1]) for k in bits(cmask) if len(images[k]) >= 1}
            if len(tgt) != 1:
                continue
            i = tgt.pop()
            if i is None:
                continue
            if g.mask(v for k in bits(cmask) for v in [g.vertices[c >> 1] for c in images[k]]) & ~g.mask(st.comp_names[i]):
                continue
            for y in st.letters:
                if st.comp(y[0]) == j:
                    continue
                ys = _image_word(g, theta, y)
                if per_letter:
                    tail = [st.lc(i, l) for l in reversed(ys)]
                else:
                    e1 = ys[0][1] if ys else 1
                    tail = [st.lc(i, l) if e1 > 0 else st.lc(i, l).inverse() for l in reversed(ys)]
                out.append(_inst(st, tag, {"case": "ii", "theta": theta, "j": j, "i": i, "y": y},
                                 [st.lc(j, y), theta], [theta] + tail))
    return out


# ---------------------------------------------------------------------------
# wreath, direct-product, symmetric-group and sigma relators
# ---------------------------------------------------------------------------

def _w(st):
    out = []
    for cls, _ in st.first_copies():
        m = st.multiplicity(cls)
        if m < 2:
            continue
        P = st.p_factor(cls)
        for a, b in combinations(range(2, m + 1), 2):
            for p in P:
                out.append(_inst(st, "W", {"class": cls, "kind": 1, "a": a, "b": b, "p": p},
                                 _comm(st.omega(cls, a, b), [p])))
        for a in range(2, m + 1):
            w = st.omega(cls, 1, a)
            for p, q in product(P, repeat=2):
                out.append(_inst(st, "W", {"class": cls, "kind": 2, "a": a, "p": p, "q": q},
                                 _comm([p], w + (q,) + w)))
        for a, b in combinations(range(2, m + 1), 2):
            wa, wb = st.omega(cls, 1, a), st.omega(cls, 1, b)
            for p, q in product(P, repeat=2):
                out.append(_inst(st, "W", {"class": cls, "kind": 3, "a": a, "b": b, "p": p, "q": q},
                                 _comm(wa + (p,) + wa, wb + (q,) + wb)))
    return out


def _d(st):
    out = []
    classes = [c for c, _ in st.first_copies()]
    gens = {c: st.p_factor(c) + st.p_symm(c) for c in classes}
    for i, j in combinations(classes, 2):
        for p, q in product(gens[i], gens[j]):
            out.append(_inst(st, "D", {"i": i, "j": j, "p": p, "q": q}, _comm([p], [q])))
    return out


def symmetric_relators(st, cls: int) -> list:
    """Relators of the symmetric group on all transpositions of the copies."""
    m = st.multiplicity(cls)
    out = []
    pairs = list(combinations(range(1, m + 1), 2))
    for a, b in pairs:
        w = st.omega(cls, a, b)
        out.append(_inst(st, "symm", {"class": cls, "t": f"({a} {b})"}, w + w))
    for (a, b), (c, d) in combinations(pairs, 2):
        if {a, b} & {c, d}:
            shared = ({a, b} & {c, d}).pop()
            p = ({a, b} - {shared}).pop()
            q = ({c, d} - {shared}).pop()
            lhs = st.omega(cls, p, shared) + st.omega(cls, shared, q) + st.omega(cls, p, shared)
            out.append(_inst(st, "symm", {"class": cls, "t": f"({p} {shared})({shared} {q})"}, lhs, st.omega(cls, p, q)))
        else:
            w = st.omega(cls, a, b) + st.omega(cls, c, d)
            out.append(_inst(st, "symm", {"class": cls, "t": f"({a} {b})({c} {d})"}, w + w))
    return out


def _symm(st):
    out = []
    for cls, _ in st.first_copies():
        out += symmetric_relators(st, cls)
    return out


def _sigma(st):
    g = st.g
    out = []
    for c in g._classes()[0]:
        for xi, yi in product(bits(c), repeat=2):
            if xi == yi:
                continue
            x, y = g.vertices[xi], g.vertices[yi]
            lhs = [GeneratorSymbol("inv", (x,)), _tr((x, 1), (y, 1)).inverse(), _tr((y, 1), (x, 1)), _tr((x, -1), (y, 1))]
            mapping = tuple((v, y if v == x else x if v == y else v) for v in g.vertices)
            out.append(_inst(st, "sigma", {"x": x, "y": y}, lhs, [GeneratorSymbol("gaut", (mapping,))]))
    return out


# ---------------------------------------------------------------------------
# Whitehead automorphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WhiteheadPair:
    A: frozenset     # component numbers and isolated letters
    a: tuple         # word

    def hat(self, st: Structure):
        return whitehead_hat(st.g, st.cs, self.a)

    def symbol(self) -> GeneratorSymbol:
        items = sorted(self.A, key=lambda t: (0, t, 0) if isinstance(t, int) else (1, t[0], -t[1]))
        return GeneratorSymbol("wh", (tuple(items), self.a))

    def label(self) -> str:
        return str(self.symbol())


def is_valid_whitehead(st: Structure, A, a) -> bool:
    try:
        hat = whitehead_hat(st.g, st.cs, a)
    except InvalidGeneratorError:
        return False
    if hat not in A:
        return False
    if isinstance(hat, tuple) and _neg(hat) in A:
        return False
    return True


def whitehead_image(g: Graph, A, a) -> list:
    """Product of composite conjugations and transvections representing (A, a)."""
    st = Structure(g)
    if not is_valid_whitehead(st, A, a):
        raise InvalidGeneratorError(f"({sorted(map(str, A))}, {_wstr(a)}) is not a valid Whitehead pair")
    hat = whitehead_hat(g, st.cs, a)
    out = []
    for j in sorted(t for t in A if isinstance(t, int)):
        if j != hat:
            out += [st.lc(j, l) for l in reversed(a)]
    for y in sorted((t for t in A if isinstance(t, tuple)), key=lambda t: (t[0], -t[1])):
        if y != tuple(a[0]) or len(a) != 1:
            out += [_tr(y, l) for l in reversed(a)]
    return out


def _elements(st: Structure) -> list:
    return list(st.J) + list(st.iso_letters)


def _whitehead_elements(st: Structure, bound: int) -> list:
    out = []
    for j in st.J:
        out += st.words_in(j, bound)
    out += [(l,) for l in st.iso_letters]
    return out


def whitehead_pairs(st: Structure, bound: int) -> list:
    elems = _elements(st)
    subsets = [frozenset(c) for k in range(len(elems) + 1) for c in combinations(elems, k)]
    out = []
    for a in _whitehead_elements(st, bound):
        for A in subsets:
            if is_valid_whitehead(st, A, a):
                out.append(WhiteheadPair(A, a))
    return out


def _is_iso(st, a) -> bool:
    return len(a) == 1 and a[0][0] in st.isolated


def _swap_letter(A, old, new):
    return frozenset((A - {old}) | {new})


def _s_inst(st, tag, binds, lhs_pairs, rhs_pairs, lhs_extra=(), rhs_extra=(), rhs_prefix=()):
    g = st.g
    lhs = [s for p in lhs_pairs for s in whitehead_image(g, p.A, p.a)] + list(lhs_extra)
    rhs = list(rhs_prefix) + [s for p in rhs_pairs for s in whitehead_image(g, p.A, p.a)] + list(rhs_extra)
    return _inst(st, tag, binds, lhs, rhs)


def _eq_whaut(st, pairs):
    return [_inst(st, "eq-whaut", {"pair": p.label()}, [p.symbol()], whitehead_image(st.g, p.A, p.a)) for p in pairs]


def _s1(st, pairs):
    out = []
    g = st.g
    for p in pairs:
        ai = _winv(p.a)
        if _is_iso(st, p.a):
            q = WhiteheadPair(_swap_letter(p.A, p.a[0], ai[0]), ai)
            case = "S"
        else:
            q = WhiteheadPair(p.A, ai)
            case = "J"
        lhs = _inv(whitehead_image(g, p.A, p.a))
        out.append(_inst(st, "S1", {"case": case, "pair": p.label()}, lhs, whitehead_image(g, q.A, q.a)))
    return out


def _s_pairs(st, pairs):
    """Families S2-S5, S8, S9 over ordered pairs of Whitehead automorphisms."""
    out = []
    g = st.g
    for p, q in product(pairs, repeat=2):
        A, a, B, b = p.A, p.a, q.A, q.a
        ah, bh = p.hat(st), q.hat(st)
        a_iso, b_iso = _is_iso(st, a), _is_iso(st, b)
        binds = {"A": p.label(), "B": q.label()}
        ainv = _neg(a[0]) if a_iso else None
        binv = _neg(b[0]) if b_iso else None
        if not A & B:
            s2 = ((not a_iso and not b_iso)
                  or (a_iso and b_iso and ainv not in B and binv not in A)
                  or (not a_iso and b_iso and binv not in A))
            if s2:
                out.append(_s_inst(st, "S2", binds, [p, q], [q, p]))
            s3 = ((a_iso and b_iso and ainv not in B and binv in A)
                  or (not a_iso and b_iso and binv in A))
            if s3:
                r = WhiteheadPair((A | B) - {b[0]}, a)
                if is_valid_whitehead(st, r.A, r.a):
                    out.append(_s_inst(st, "S3", binds, [p, q], [q, r]))
        if a == b and a_iso and A & B == {a[0]}:
            out.append(_s_inst(st, "S4", binds, [p, q], [WhiteheadPair(A | B, a)]))
        if not a_iso and not b_iso and ah == bh:
            if A & B == {ah}:
                out.append(_s_inst(st, "S5", dict(binds, case="i"), [p, q], [q, p]))
                if a == b:
                    out.append(_s_inst(st, "S5", dict(binds, case="ii"), [p, q], [WhiteheadPair(A | B, a)]))
            if A == B:
                ba = tuple((g.vertices[c >> 1], 1 if c & 1 else -1)
                           for c in normal_codes(g, [2 * g._idx(v) + (1 if s > 0 else 0) for v, s in b + a]))
                if ba:
                    out.append(_s_inst(st, "S5", dict(binds, case="iii"), [p, q], [WhiteheadPair(A, ba)]))
        if A <= B and bh not in A and ((not a_iso) or (ainv in B)):
            out.append(_s_inst(st, "S8", binds, [p, q], [q, p]))
        if A <= B and not a_iso and b_iso and b[0] in A:
            ai = _winv(a)
            r = WhiteheadPair((B - A) | {ah, binv}, ai)
            if is_valid_whitehead(st, r.A, r.a):
                gam = st.gamma(ai, ah)
                out.append(_s_inst(st, "S9", binds, [p, q], [q, r], rhs_extra=[gam]))
    return out


def _psi_generators(st) -> list:
    return _theta_list(st)


def _psi_act(st, phi: GeneratorSymbol, p: WhiteheadPair):
    """(A phi, a phi) for phi preserving the component decomposition, or None."""
    g = st.g
    images = symbol_images(g, phi)
    newA = set()
    for t in p.A:
        if isinstance(t, int):
            names = st.comp_names[t]
            targets = {st.comp(g.vertices[c >> 1]) for v in names for c in images[g._idx(v)]}
            if len(targets) != 1 or None in targets:
                return None
            newA.add(targets.pop())
        else:
            w = _image_word(g, phi, t)
            if len(w) != 1:
                return None
            newA.add(w[0])
    codes = [2 * g._idx(v) + (1 if s > 0 else 0) for v, s in p.a]
    img = []
    for c in codes:
        x = images[c >> 1]
        img.extend(x if c & 1 else invert_codes(x))
    nf = normal_codes(g, img)
    a = tuple((g.vertices[c >> 1], 1 if c & 1 else -1) for c in nf)
    if not is_valid_whitehead(st, frozenset(newA), a):
        return None
    return WhiteheadPair(frozenset(newA), a)


def _s6(st, pairs):
    out = []
    for phi in _psi_generators(st):
        for p in pairs:
            q = _psi_act(st, phi, p)
            if q is None:
                continue
            lhs = [phi.inverse()] + whitehead_image(st.g, p.A, p.a) + [phi]
            out.append(_inst(st, "S6", {"phi": phi, "pair": p.label()}, lhs, whitehead_image(st.g, q.A, q.a)))
    return out


def _s7(st, pairs):
    out = []
    if not st.isolated:
        return out
    v = st.isolated[0]
    for p in pairs:
        A, a = p.A, p.a
        if not _is_iso(st, a):
            continue
        s = st.isolated_copy(a[0][0])
        for b in st.iso_letters:
            bname = b[0]
            t = st.isolated_copy(bname)
            if t == s or b[1] != a[0][1] or b not in A or _neg(b) in A:
                continue
            q = WhiteheadPair(_swap_letter(A, a[0], _neg(a[0])), (b,))
            r = WhiteheadPair(_swap_letter(A, b, _neg(b)), a)
            if not (is_valid_whitehead(st, q.A, q.a) and is_valid_whitehead(st, r.A, r.a)):
                continue
            rho = (list(st.omega(0, 1, s)) + [GeneratorSymbol("inv", (v,))]
                   + list(st.omega(0, 1, s)) + list(st.omega(0, s, t)))
            out.append(_s_inst(st, "S7", {"A": p.label(), "b": b}, [p, q], [r], rhs_prefix=rho))
    return out


# ---------------------------------------------------------------------------
# instantiation
# ---------------------------------------------------------------------------

def pair_bound(bound: int) -> int:
    """Word length for Whitehead elements in relators involving two pairs."""
    return max(1, bound - 1)


def instantiate_relators(g: Graph, families=None, bounds: int = DEFAULT_BOUND) -> list:
    fams = _expand_families(families)
    st = Structure(g)
    out: list = []
    simple = {"R1": _r1, "R2": _r2, "R3": _r3, "R4": _r4, "R5": _r5, "R6": _r6, "R7": _r7,
              "R8": _r8, "R9": _r9, "W": _w, "D": _d, "symm": _symm, "sigma": _sigma}
    for f in fams:
        if f in simple:
            out += simple[f](st)
        elif f == "R10":
            out += _r10(st, bounds)
        elif f == "R11":
            out += _r11(st)
    if any(f.startswith("S") and f != "sigma" and f != "symm" or f == "eq-whaut" for f in fams):
        single = whitehead_pairs(st, bounds)
        double = whitehead_pairs(st, pair_bound(bounds)) if pair_bound(bounds) != bounds else single
        if "eq-whaut" in fams:
            out += _eq_whaut(st, single)
        if "S1" in fams:
            out += _s1(st, single)
        pair_fams = {"S2", "S3", "S4", "S5", "S8", "S9"} & set(fams)
        if pair_fams:
            out += [r for r in _s_pairs(st, double) if r.family in pair_fams]
        if "S6" in fams:
            out += _s6(st, double)
        if "S7" in fams:
            out += _s7(st, double)
    return out


def _expand_families(families) -> list:
    if families is None:
        return list(FAMILIES)
    if isinstance(families, str):
        families = [f.strip() for f in families.split(",") if f.strip()]
    out = []
    for f in families:
        if "-" in f and f[0] in "RS" and f.count("-") == 1 and f.split("-")[1][:1] in "RS":
            lo, hi = f.split("-")
            letter = lo[0]
            if hi[0] != letter:
                raise RelationError(f"bad family range {f!r}")
            out += [f"{letter}{k}" for k in range(int(lo[1:]), int(hi[1:]) + 1)]
        elif f in FAMILIES:
            out.append(f)
        else:
            raise RelationError(f"unknown relator family {f!r}")
    return out


@dataclass
class VerificationReport:
    results: list     # (instance, passed)

    @property
    def total(self) -> int:
        return len(self.results)

    @property
    def failures(self) -> list:
        return [r for r, ok in self.results if not ok]

    def counts(self) -> dict:
        out: dict = {}
        for r, ok in self.results:
            c = out.setdefault(r.family, [0, 0])
            c[0] += 1
            c[1] += ok
        return out

    def to_tsv(self) -> str:
        lines = ["family\tbindings\tverdict"]
        for r, ok in self.results:
            lines.append(f"{r.family}\t{r.binding_text()}\t{'pass' if ok else 'fail'}")
        return "\n".join(lines) + "\n"


def verify_families(g: Graph, families=None, bounds: int = DEFAULT_BOUND) -> VerificationReport:
    return VerificationReport([(r, verify_relator(r)) for r in instantiate_relators(g, families, bounds)])


def compare_r11_readings(g: Graph) -> dict:
    """Pass counts for the per-letter and the uniform-exponent readings of R11(ii)."""
    st = Structure(g)
    out = {}
    for name, flag in (("per-letter", True), ("uniform-eps1", False)):
        insts = [r for r in _r11(st, flag) if dict(r.bindings).get("case") == "ii"]
        out[name] = (len(insts), sum(verify_relator(r) for r in insts))
    return out


def verify_s_relator(g: Graph, tag: str, bindings: dict) -> bool:
    """Check one Whitehead relator given explicit pairs.

    ``bindings`` holds ``A``/``a`` (and ``B``/``b`` for two-pair relators) as
    iterables of component numbers or letters and words; ``phi`` for S6.
    """
    st = Structure(g)
    p = WhiteheadPair(frozenset(bindings["A"]), tuple(bindings["a"]))
    if not is_valid_whitehead(st, p.A, p.a):
        raise InvalidGeneratorError("first Whitehead pair is not valid")
    if tag == "S1":
        insts = _s1(st, [p])
    elif tag == "S6":
        q = _psi_act(st, bindings["phi"], p)
        if q is None:
            raise RelationError("automorphism does not act on the Whitehead pair")
        insts = [_inst(st, "S6", {}, [bindings["phi"].inverse()] + whitehead_image(g, p.A, p.a) + [bindings["phi"]],
                       whitehead_image(g, q.A, q.a))]
    elif tag == "S7":
        insts = [r for r in _s7(st, [p]) if dict(r.bindings)["b"] == bindings["b"][0][0]]
    else:
        q = WhiteheadPair(frozenset(bindings["B"]), tuple(bindings["b"]))
        if not is_valid_whitehead(st, q.A, q.a):
            raise InvalidGeneratorError("second Whitehead pair is not valid")
        insts = [r for r in _s_pairs(st, [p, q]) if r.family == tag
                 and dict(r.bindings)["A"] == p.label() and dict(r.bindings)["B"] == q.label()]
        if "case" in bindings:
            insts = [r for r in insts if dict(r.bindings).get("case") == bindings["case"]]
    if not insts:
        raise RelationError(f"side conditions of {tag} do not hold for these pairs")
    return all(verify_relator(r) for r in insts)


# ---------------------------------------------------------------------------
# presentation
# ---------------------------------------------------------------------------

@dataclass
class Presentation:
    graph: Graph
    generators: list                 # GeneratorSymbols
    relators: list                   # RelatorInstances
    placeholders: list               # names of factor relator sets supplied elsewhere
    abbreviations: dict              # symbol text -> expansion over generators

    def generator_names(self) -> list:
        return [str(s) for s in self.generators]

    def to_text(self) -> str:
        lines = ["< " + ", ".join(self.generator_names()), "|"]
        for p in self.placeholders:
            lines.append(f"  {p}")
        for r in self.relators:
            lines.append(f"  {r.family}: {r.text()}")
        lines.append(">")
        if self.abbreviations:
            lines.append("where")
            for k, v in self.abbreviations.items():
                lines.append(f"  {k} = {format_symbols(v)}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps({
            "generators": self.generator_names(),
            "placeholders": self.placeholders,
            "relators": [{"family": r.family, "bindings": dict(r.bindings),
                          "lhs": format_symbols(r.lhs), "rhs": format_symbols(r.rhs)} for r in self.relators],
            "abbreviations": {k: format_symbols(v) for k, v in self.abbreviations.items()},
        }, indent=2)

    def unknown_symbols(self) -> set:
        known = {str(s.inverse() if s.exp < 0 else s) for s in self.generators} | set(self.abbreviations)
        out = set()
        for r in self.relators:
            for s in r.lhs + r.rhs:
                base = s if s.exp > 0 else s.inverse()
                if str(base) not in known:
                    out.add(str(base))
        return out


def _abbreviation(st: Structure, sym: GeneratorSymbol, gens: set):
    """Expansion of a non-generator symbol over generators (or None if it is one)."""
    g = st.g
    base = sym if sym.exp > 0 else sym.inverse()
    if str(base) in gens:
        return None
    if base.kind == "ctr":
        x, w = base.args
        return [_tr(x, l) for l in reversed(w)]
    if base.kind == "gammaj":
        w, j = base.args
        comp = set(st.comp_names[j])
        if not any(v in comp for v, _ in w):
            return [st.lc(j, l) for l in reversed(w)]
        out = []
        for l in reversed(w):
            x = g._idx(l[0])
            for c in g.perp_components(x):
                if g.vertices[min(bits(c))] in comp:
                    out.append(GeneratorSymbol("lc", (tuple(g.names(c)), l)))
        return out
    if base.kind in ("tr", "lc", "inv", "gaut"):
        return _conjugate_from_first_copy(st, base)
    return None


def _copy_of(st: Structure, v: str):
    """(class, copy number) of the component holding vertex v."""
    if v in st.isolated:
        return 0, st.isolated_copy(v)
    for cls, grp in enumerate(st.it.groups, 1):
        for k, mem in enumerate(grp.members, 1):
            if v in mem:
                return cls, k
    raise RelationError(f"vertex {v} not found")


def _conjugate_from_first_copy(st: Structure, sym: GeneratorSymbol):
    """Write a generator living on copy k as omega_{1,k} s omega_{1,k} with s on the first copy."""
    g = st.g
    vs = set()
    if sym.kind == "inv":
        vs = {sym.args[0]}
    elif sym.kind == "tr":
        vs = {sym.args[0][0], sym.args[1][0]}
    elif sym.kind == "lc":
        vs = set(sym.args[0]) | {sym.args[1][0]}
    copies = {_copy_of(st, v) for v in vs}
    if len(copies) != 1:
        return None
    cls, k = copies.pop()
    if k == 1:
        return None
    perm = omega_permutation(g, cls, 1, k)

    def mv(v):
        return g.vertices[perm[g._idx(v)]]

    if sym.kind == "inv":
        s1 = GeneratorSymbol("inv", (mv(sym.args[0]),))
    elif sym.kind == "tr":
        (x, e), (y, f) = sym.args
        s1 = _tr((mv(x), e), (mv(y), f))
    else:
        C, (x, e) = sym.args
        s1 = GeneratorSymbol("lc", (tuple(g.names(g.mask(mv(v) for v in C))), (mv(x), e)))
    w = list(st.omega(cls, 1, k))
    return w + [s1] + w


def emit_presentation(g: Graph, families=None, bounds: int = DEFAULT_BOUND, per_factor=None) -> Presentation:
    """Generators and relators of the presentation over the connected components.

    ``per_factor`` optionally maps a class index to a list of relators (symbol
    words) for the automorphism group of its first copy; missing classes are
    emitted as named placeholders.
    """
    st = Structure(g)
    gens: list = []
    for cls, names in st.first_copies():
        gens += st.p_comp(names) + st.p_symm(cls)
    for cls, names in st.first_copies():
        gens += st.p_int(names)
    gens += st.tr_ext() + st.linn_ext()
    seen, uniq = set(), []
    for s in gens:
        if str(s) not in seen:
            seen.add(str(s))
            uniq.append(s)
    gens = uniq
    fams = ["symm", "W", "D"] + [f"R{k}" for k in range(1, 12)]
    if families is not None:
        fams = [f for f in fams if f in _expand_families(families)]
    relators = instantiate_relators(g, fams, bounds)
    placeholders = []
    per_factor = per_factor or {}
    for cls, names in st.first_copies():
        if cls in per_factor:
            for k, word in enumerate(per_factor[cls]):
                relators.append(_inst(st, "factor", {"class": cls, "index": k}, word))
        else:
            placeholders.append(f"R_{cls}: relators of Aut(G({{{','.join(names)}}}))")
    abbreviations = {}
    names_set = {str(s) for s in gens}
    todo = [s for r in relators for s in r.lhs + r.rhs]
    while todo:
        s = todo.pop()
        base = s if s.exp > 0 else s.inverse()
        key = str(base)
        if key in names_set or key in abbreviations:
            continue
        exp = _abbreviation(st, base, names_set)
        if exp is None:
            continue
        abbreviations[key] = exp
        todo.extend(exp)
    return Presentation(g, gens, relators, placeholders, abbreviations)


def fr_generators(g: Graph) -> list:
    """Generators of the kernel of the map to the automorphisms of the direct product of components."""
    st = Structure(g)
    if st.isolated:
        raise IsolatedVertexError(f"graph has isolated vertices: {', '.join(st.isolated)}")
    return st.linn_ext()


def direct_product_projection(g: Graph, phi: Automorphism) -> list:
    """Images of the vertices in the direct product of the component groups."""
    st = Structure(g)
    out = []
    for i, img in enumerate(phi.images):
        v = g.vertices[i]
        j = st.comp(v)
        keep = [c for c in img if st.comp(g.vertices[c >> 1]) == j] if j is not None else \
            [c for c in img if g.vertices[c >> 1] == v]
        out.append(normal_codes(g, keep))
    return out
