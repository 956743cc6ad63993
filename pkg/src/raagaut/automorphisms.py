"""Automorphisms of a partially commutative group given by generator words.

An :class:`Automorphism` pairs a word over :class:`GeneratorSymbol` with the
endomorphism it induces, stored as one normal form per vertex.  Composition
is left to right: ``x (phi psi) = (x phi) psi``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .graph_lattice import (
    Graph,
    bits,
    enumerate_lattice,
    h_closure_mask,
    is_balanced,
    isomorphism_type,
    popcount,
    sol_masks,
)
from .words import (
    NormalForm,
    Word,
    canonical,
    cyclic_codes,
    exponent_sum,
    format_codes,
    free_reduce,
    invert_codes,
    left_divisor_codes,
    normal_codes,
    parse_codes,
    support_mask,
)


class AutomorphismError(ValueError):
    pass


class InvalidGeneratorError(AutomorphismError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class MembershipError(AutomorphismError):
    pass


class DescentError(AutomorphismError):
    pass


class UnbalancedGraphError(AutomorphismError):
    def __init__(self, message: str, witness):
        super().__init__(message)
        self.witness = witness


# ---------------------------------------------------------------------------
# component bookkeeping shared with the relator module
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComponentStructure:
    """Non-isolated components (numbered from 1) and isolated vertices."""

    graph: Graph
    components: tuple   # masks of non-isolated components
    isolated: tuple     # vertex indices

    @classmethod
    def of(cls, g: Graph) -> "ComponentStructure":
        key = "component_structure"
        if key not in g._memo:
            comps = g.components_mask()
            g._memo[key] = cls(
                g,
                tuple(c for c in comps if popcount(c) > 1),
                tuple(min(bits(c)) for c in comps if popcount(c) == 1),
            )
        return g._memo[key]

    def component(self, j: int) -> int:
        if not 1 <= j <= len(self.components):
            raise AutomorphismError(f"no non-isolated component number {j}")
        return self.components[j - 1]

    def component_of_vertex(self, i: int) -> int:
        """Component number of a vertex, or 0 if it is isolated."""
        for j, c in enumerate(self.components, 1):
            if c >> i & 1:
                return j
        return 0


# ---------------------------------------------------------------------------
# symbols
# ---------------------------------------------------------------------------

KINDS = ("inv", "tr", "lc", "agg", "coll", "norm", "ext", "ctr",
         "gammaj", "inner", "gaut", "omega", "wh")


def _letter_str(letter) -> str:
    v, s = letter
    return v if s > 0 else f"{v}^-1"


def _word_str(word) -> str:
    return " ".join(_letter_str(l) for l in word) if word else "1"


@dataclass(frozen=True)
class GeneratorSymbol:
    """A named generator with parameters and a formal exponent of +1 or -1.

    Parameter layout by kind (letters are ``(vertex, sign)`` pairs, words are
    tuples of letters, sets are tuples of vertex names in graph order):

    ``inv``: (x,); ``tr``: (x_letter, y_letter); ``lc``/``agg``/``ext``:
    (set, letter); ``coll``: (u, letter); ``norm``: (y, letter); ``ctr``:
    (letter, word); ``gammaj``: (word, j); ``inner``: (word,); ``gaut``:
    (tuple of (vertex, image) pairs,); ``omega``: (j, a, b); ``wh``:
    (A, word) with A a tuple of component numbers and letters.
    """

    kind: str
    args: tuple
    exp: int = 1

    def inverse(self) -> "GeneratorSymbol":
        return GeneratorSymbol(self.kind, self.args, -self.exp)

    def __str__(self):
        k, a = self.kind, self.args
        if k == "inv":
            body = a[0]
        elif k == "tr":
            body = f"{_letter_str(a[0])},{_letter_str(a[1])}"
        elif k in ("lc", "agg", "ext"):
            body = "{" + ",".join(a[0]) + "}," + _letter_str(a[1])
        elif k in ("coll", "norm"):
            body = f"{a[0]},{_letter_str(a[1])}"
        elif k == "ctr":
            body = f'{_letter_str(a[0])},"{_word_str(a[1])}"'
        elif k == "gammaj":
            body = f'"{_word_str(a[0])}",{a[1]}'
        elif k == "inner":
            body = f'"{_word_str(a[0])}"'
        elif k == "gaut":
            body = "".join("(" + " ".join(c) + ")" for c in _cycles(dict(a[0])))
        elif k == "omega":
            body = ",".join(str(x) for x in a)
        elif k == "wh":
            items = [str(x) if isinstance(x, int) else _letter_str(x) for x in a[0]]
            body = "{" + ",".join(items) + "}," + f'"{_word_str(a[1])}"'
        else:
            body = ",".join(map(str, a))
        return f"{k}({body})" + ("^-1" if self.exp < 0 else "")


def _cycles(mapping: dict) -> list:
    seen, out = set(), []
    for v in mapping:
        if v in seen or mapping[v] == v:
            continue
        cyc, w = [], v
        while w not in seen:
            seen.add(w)
            cyc.append(w)
            w = mapping[w]
        out.append(cyc)
    return out


def format_symbols(symbols: Iterable[GeneratorSymbol]) -> str:
    return " ".join(str(s) for s in symbols)


# -- parsing ---------------------------------------------------------------

_HEAD = re.compile(r"\s*([a-z]+)\(")


def _split_top(body: str) -> list:
    parts, depth, quote, cur = [], 0, False, []
    for ch in body:
        if ch == '"':
            quote = not quote
        elif not quote and ch in "({":
            depth += 1
        elif not quote and ch in ")}":
            depth -= 1
        if ch == "," and depth == 0 and not quote:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if cur or parts:
        parts.append("".join(cur).strip())
    return parts


def _close(text: str, start: int) -> int:
    """Index just past the parenthesis matching the one before ``start``."""
    depth, quote = 1, False
    for i in range(start, len(text)):
        ch = text[i]
        if ch == '"':
            quote = not quote
        elif not quote and ch in "({":
            depth += 1
        elif not quote and ch in ")}":
            depth -= 1
            if depth == 0:
                return i + 1
    raise AutomorphismError(f"unbalanced parentheses in {text!r}")


def _unquote(s: str) -> str:
    s = s.strip()
    if len(s) >= 2 and s[0] == s[-1] == '"':
        return s[1:-1]
    return s


def _parse_letter(g: Graph, s: str) -> tuple:
    codes = parse_codes(g, _unquote(s))
    if len(codes) != 1:
        raise AutomorphismError(f"expected a single letter, got {s!r}")
    c = codes[0]
    return (g.vertices[c >> 1], 1 if c & 1 else -1)


def _parse_word(g: Graph, s: str) -> tuple:
    return tuple((g.vertices[c >> 1], 1 if c & 1 else -1) for c in parse_codes(g, _unquote(s)))


def _parse_set(g: Graph, s: str) -> tuple:
    s = s.strip()
    if not (s.startswith("{") and s.endswith("}")):
        raise AutomorphismError(f"expected a set in braces, got {s!r}")
    names = [t.strip() for t in s[1:-1].split(",") if t.strip()]
    return tuple(g.names(g.mask(names)))


def _parse_vertex(g: Graph, s: str) -> str:
    s = s.strip()
    g._idx(s)
    return s


def _parse_symbol_body(g: Graph, kind: str, body: str) -> tuple:
    a = _split_top(body)

    def need(n):
        if len(a) != n:
            raise AutomorphismError(f"{kind} takes {n} arguments, got {len(a)}")

    if kind == "inv":
        need(1)
        return (_parse_vertex(g, a[0]),)
    if kind == "tr":
        need(2)
        return (_parse_letter(g, a[0]), _parse_letter(g, a[1]))
    if kind in ("lc", "agg", "ext"):
        need(2)
        return (_parse_set(g, a[0]), _parse_letter(g, a[1]))
    if kind in ("coll", "norm"):
        need(2)
        return (_parse_vertex(g, a[0]), _parse_letter(g, a[1]))
    if kind == "ctr":
        need(2)
        return (_parse_letter(g, a[0]), _parse_word(g, a[1]))
    if kind == "gammaj":
        need(2)
        return (_parse_word(g, a[0]), int(a[1]))
    if kind == "inner":
        need(1)
        return (_parse_word(g, a[0]),)
    if kind == "gaut":
        mapping = {v: v for v in g.vertices}
        text = body.strip()
        for cyc in re.findall(r"\(([^()]*)\)", text):
            names = cyc.split()
            for v in names:
                g._idx(v)
            for u, w in zip(names, names[1:] + names[:1]):
                mapping[u] = w
        if re.sub(r"\(([^()]*)\)", "", text).strip():
            raise AutomorphismError(f"bad cycle notation {text!r}")
        return (tuple(mapping.items()),)
    if kind == "omega":
        need(3)
        return tuple(int(x) for x in a)
    if kind == "wh":
        need(2)
        s = a[0].strip()
        if not (s.startswith("{") and s.endswith("}")):
            raise AutomorphismError("wh expects a set {...} as first argument")
        items = []
        for t in (t.strip() for t in s[1:-1].split(",")):
            if not t:
                continue
            items.append(int(t) if t.isdigit() else _parse_letter(g, t))
        return (tuple(items), _parse_word(g, a[1]))
    raise AutomorphismError(f"unknown generator kind {kind!r}")


def parse_symbols(g: Graph, text: str) -> list:
    """Parse a whitespace-separated generator word such as ``tr(v,a) lc({a,r,s},v)^-1``."""
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _HEAD.match(text, pos)
        if not m:
            raise AutomorphismError(f"cannot parse generator at {text[pos:pos + 20]!r}")
        kind = m.group(1)
        if kind not in KINDS:
            raise AutomorphismError(f"unknown generator kind {kind!r}")
        end = _close(text, m.end())
        args = _parse_symbol_body(g, kind, text[m.end():end - 1])
        exp = 1
        if text.startswith("^-1", end):
            exp, end = -1, end + 3
        out.append(GeneratorSymbol(kind, args, exp))
        pos = end
    return out


# ---------------------------------------------------------------------------
# evaluation of symbols
# ---------------------------------------------------------------------------

def _lcode(g: Graph, letter) -> int:
    v, s = letter
    return 2 * g._idx(v) + (1 if s > 0 else 0)


def _wcodes(g: Graph, word) -> tuple:
    return tuple(_lcode(g, l) for l in word)


def _identity_images(g: Graph) -> list:
    return [(2 * i + 1,) for i in range(len(g))]


def _conj_set(g: Graph, mask: int, by: Sequence[int]) -> list:
    """Images of the map conjugating every vertex of ``mask`` by the word ``by``."""
    inv = invert_codes(by)
    out = _identity_images(g)
    for i in bits(mask):
        out[i] = normal_codes(g, inv + (2 * i + 1,) + tuple(by))
    return out


def _check_tr(g: Graph, x: int, y: int):
    if x == y:
        raise InvalidGeneratorError(f"transvection needs distinct vertices, got {g.vertices[x]} twice")
    bad = g.adj[x] & ~g.star[y]
    if bad:
        u = min(bits(bad))
        raise InvalidGeneratorError(
            f"{g.vertices[u]} commutes with {g.vertices[x]} but not with {g.vertices[y]}",
            witness=g.vertices[u],
        )


def _check_component_union(g: Graph, mask: int, x: int, what: str, single: bool):
    comps = g.perp_components(x)
    if single:
        if mask not in comps:
            raise InvalidGeneratorError(
                f"{g.vset(mask)!r} is not a component of the graph minus the star of {g.vertices[x]}",
                witness=[g.vset(c) for c in comps])
    else:
        if mask & g.star[x] or any(c & mask and c & ~mask for c in comps):
            raise InvalidGeneratorError(
                f"{g.vset(mask)!r} is not a union of components of the graph minus the star of {g.vertices[x]}",
                witness=[g.vset(c) for c in comps])


def collected_mask(g: Graph, u: int, x: int) -> int:
    if not g.dominates_idx(x, u):
        raise InvalidGeneratorError(f"{g.vertices[x]} does not dominate {g.vertices[u]}")
    mask = g.class_mask(u) & ~(1 << x)
    comps = set(g.perp_components(x))
    for v in bits(mask):
        if 1 << v not in comps:
            raise InvalidGeneratorError(f"{{{g.vertices[v]}}} is not a component of the graph minus the star of {g.vertices[x]}")
    return mask


def normal_mask(g: Graph, y: int, x: int) -> int:
    if g.star[x] >> y & 1:
        raise InvalidGeneratorError(f"{g.vertices[y]} lies in the star of {g.vertices[x]}")
    return h_closure_mask(g, x, 1 << y) & ~g.star[x]


def _inverse_symbol_args(sym: GeneratorSymbol) -> GeneratorSymbol:
    """Base symbol (exponent +1) equal to the inverse of ``sym`` with exponent +1."""
    k, a = sym.kind, sym.args

    def flip(letter):
        return (letter[0], -letter[1])

    def flipw(word):
        return tuple(flip(l) for l in reversed(word))

    if k in ("inv", "omega"):
        return GeneratorSymbol(k, a)
    if k == "tr":
        return GeneratorSymbol(k, (a[0], flip(a[1])))
    if k in ("lc", "agg", "ext", "coll", "norm"):
        return GeneratorSymbol(k, (a[0], flip(a[1])))
    if k == "ctr":
        return GeneratorSymbol(k, (a[0], flipw(a[1])))
    if k == "gammaj":
        return GeneratorSymbol(k, (flipw(a[0]), a[1]))
    if k == "inner":
        return GeneratorSymbol(k, (flipw(a[0]),))
    if k == "gaut":
        return GeneratorSymbol(k, (tuple((w, v) for v, w in a[0]),))
    if k == "wh":
        return GeneratorSymbol("wh", (a[0], flipw(a[1])), 1)
    raise AutomorphismError(f"unknown kind {k!r}")


def whitehead_hat(g: Graph, cs: ComponentStructure, a: tuple):
    """Component number of a word in one non-isolated component, or the
    isolated letter itself."""
    codes = _wcodes(g, a)
    if not codes:
        raise InvalidGeneratorError("Whitehead element must be nontrivial")
    nu = support_mask(codes)
    if len(codes) == 1 and (codes[0] >> 1) in cs.isolated:
        return a[0]
    for j, c in enumerate(cs.components, 1):
        if nu & ~c == 0:
            return j
    raise InvalidGeneratorError(f"{_word_str(a)} is not supported in a single non-isolated component or isolated letter")


def _whitehead_images(g: Graph, A: tuple, a: tuple, check: bool = True) -> list:
    cs = ComponentStructure.of(g)
    hat = whitehead_hat(g, cs, a)
    if check:
        if hat not in A:
            raise InvalidGeneratorError(f"hat of the Whitehead element ({hat}) is not in A")
        if isinstance(hat, tuple) and (hat[0], -hat[1]) in A:
            raise InvalidGeneratorError("Whitehead set contains the inverse of the isolated letter")
    ac = normal_codes(g, _wcodes(g, a))
    inv = invert_codes(ac)
    out = _identity_images(g)
    for item in A:
        if isinstance(item, int):
            if item == hat:
                continue
            for i in bits(cs.component(item)):
                out[i] = normal_codes(g, inv + (2 * i + 1,) + ac)
    for item in A:
        if isinstance(item, tuple):
            if item == hat or (isinstance(hat, tuple) and item == hat):
                continue
            i = g._idx(item[0])
            if i not in cs.isolated:
                raise InvalidGeneratorError(f"{item[0]} is not an isolated vertex")
            both = (item[0], -item[1]) in A
            if both:
                out[i] = normal_codes(g, inv + (2 * i + 1,) + ac)
            elif item[1] > 0:
                out[i] = normal_codes(g, (2 * i + 1,) + ac)
            else:
                out[i] = normal_codes(g, inv + (2 * i + 1,))
    return out


def symbol_images(g: Graph, sym: GeneratorSymbol) -> list:
    """Vertex images of a symbol, validating its parameters."""
    key = ("sym", sym)
    if key in g._memo:
        return g._memo[key]
    if sym.exp < 0:
        if sym.kind == "wh":
            out = _whitehead_images(g, sym.args[0], tuple((v, -s) for v, s in reversed(sym.args[1])), check=False)
            symbol_images(g, sym.inverse())
        else:
            out = symbol_images(g, _inverse_symbol_args(sym))
        g._memo[key] = out
        return out
    k, a = sym.kind, sym.args
    out = _identity_images(g)
    if k == "inv":
        i = g._idx(a[0])
        out[i] = (2 * i,)
    elif k == "tr":
        x, y = _lcode(g, a[0]), _lcode(g, a[1])
        _check_tr(g, x >> 1, y >> 1)
        i = x >> 1
        out[i] = (2 * i + 1, y) if x & 1 else (y ^ 1, 2 * i + 1)
    elif k in ("lc", "agg", "ext", "coll", "norm"):
        h = _lcode(g, a[1])
        x = h >> 1
        if k == "lc":
            mask = g.mask(a[0])
            _check_component_union(g, mask, x, k, single=True)
        elif k == "ext":
            mask = g.mask(a[0])
            _check_component_union(g, mask, x, k, single=False)
        elif k == "agg":
            mask = g.mask(a[0])
            if mask not in g.components_mask(1 << x):
                raise InvalidGeneratorError(f"{g.vset(mask)!r} is not a component of the graph minus {g.vertices[x]}")
        elif k == "coll":
            mask = collected_mask(g, g._idx(a[0]), x)
        else:
            mask = normal_mask(g, g._idx(a[0]), x)
        out = _conj_set(g, mask, (h,))
    elif k == "ctr":
        x = _lcode(g, a[0])
        w = normal_codes(g, _wcodes(g, a[1]))
        for c in w:
            _check_tr(g, x >> 1, c >> 1)
        i = x >> 1
        out[i] = normal_codes(g, ((2 * i + 1,) + w) if x & 1 else (invert_codes(w) + (2 * i + 1,)))
    elif k == "gammaj":
        cs = ComponentStructure.of(g)
        comp = cs.component(a[1])
        w = normal_codes(g, _wcodes(g, a[0]))
        nu = support_mask(w)
        if nu & comp and nu & ~comp:
            raise InvalidGeneratorError("gammaj word must lie inside the component or entirely outside it")
        out = _conj_set(g, comp, w)
    elif k == "inner":
        out = _conj_set(g, g.full, normal_codes(g, _wcodes(g, a[0])))
    elif k == "gaut":
        mapping = dict(a[0])
        perm = [g._idx(mapping.get(v, v)) for v in g.vertices]
        if sorted(perm) != list(range(len(g))):
            raise InvalidGeneratorError("gaut is not a permutation")
        for i in range(len(g)):
            for j in bits(g.adj[i]):
                if not g.adj[perm[i]] >> perm[j] & 1:
                    raise InvalidGeneratorError(
                        f"gaut breaks the edge {g.vertices[i]}-{g.vertices[j]}",
                        witness=(g.vertices[i], g.vertices[j]))
        out = [(2 * perm[i] + 1,) for i in range(len(g))]
    elif k == "omega":
        perm = omega_permutation(g, *a)
        out = [(2 * perm[i] + 1,) for i in range(len(g))]
    elif k == "wh":
        out = _whitehead_images(g, a[0], a[1])
    else:
        raise AutomorphismError(f"unknown kind {k!r}")
    out = [tuple(c) for c in out]
    g._memo[key] = out
    return out


def omega_permutation(g: Graph, j: int, a: int, b: int) -> list:
    """Permutation swapping copies ``a`` and ``b`` of isomorphism class ``j``
    (class 0 is the set of isolated vertices)."""
    it = isomorphism_type(g)
    perm = list(range(len(g)))
    if j == 0:
        iso = list(it.isolated)
        if not (1 <= a <= len(iso) and 1 <= b <= len(iso)) or a == b:
            raise InvalidGeneratorError(f"omega(0,{a},{b}) needs two distinct isolated vertices")
        p, q = g._idx(iso[a - 1]), g._idx(iso[b - 1])
        perm[p], perm[q] = q, p
        return perm
    if not 1 <= j <= len(it.groups):
        raise InvalidGeneratorError(f"no component isomorphism class {j}")
    grp = it.groups[j - 1]
    m = grp.multiplicity
    if not (1 <= a <= m and 1 <= b <= m) or a == b:
        raise InvalidGeneratorError(f"omega({j},{a},{b}) needs two distinct copies among {m}")
    fa, fb = grp.isomorphisms[a - 1], grp.isomorphisms[b - 1]
    for r in grp.representative:
        p, q = g._idx(fa[r]), g._idx(fb[r])
        perm[p], perm[q] = q, p
    return perm


def apply_images(g: Graph, images: Sequence[tuple], codes: Sequence[int]) -> tuple:
    out = []
    for c in codes:
        img = images[c >> 1]
        out.extend(img if c & 1 else invert_codes(img))
    return normal_codes(g, out)


# ---------------------------------------------------------------------------
# automorphisms
# ---------------------------------------------------------------------------

class Automorphism:
    """A symbol word together with the vertex images it induces."""

    __slots__ = ("graph", "symbols", "images", "_inverse_images")

    def __init__(self, graph: Graph, symbols: Iterable[GeneratorSymbol] = (), images=None):
        self.graph = graph
        self.symbols = tuple(symbols)
        if images is None:
            images = _identity_images(graph)
            for s in self.symbols:
                simg = symbol_images(graph, s)
                images = [apply_images(graph, simg, img) for img in images]
        self.images = tuple(tuple(i) for i in images)
        self._inverse_images = None

    @classmethod
    def parse(cls, graph: Graph, text: str) -> "Automorphism":
        return cls(graph, parse_symbols(graph, text))

    @classmethod
    def identity(cls, graph: Graph) -> "Automorphism":
        return cls(graph)

    def __repr__(self):
        return f"Automorphism({format_symbols(self.symbols)!r})"

    def __str__(self):
        return format_symbols(self.symbols) or "id"

    def __eq__(self, other):
        return isinstance(other, Automorphism) and self.graph == other.graph and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __mul__(self, other: "Automorphism") -> "Automorphism":
        return compose(self, other)

    def image(self, vertex: str) -> NormalForm:
        return NormalForm(self.graph, self.images[self.graph._idx(vertex)], trusted=True)

    def image_map(self) -> dict:
        return {v: self.image(v) for v in self.graph.vertices}

    def apply_codes(self, codes: Sequence[int]) -> tuple:
        return apply_images(self.graph, self.images, codes)

    def inverse_images(self) -> tuple:
        if self._inverse_images is None:
            self._inverse_images = invert(self).images
        return self._inverse_images

    def is_identity(self) -> bool:
        return all(img == (2 * i + 1,) for i, img in enumerate(self.images))


def _same_graph(a: Automorphism, b: Automorphism):
    if a.graph != b.graph:
        raise AutomorphismError("automorphisms live on different graphs")


def compose(phi: Automorphism, psi: Automorphism) -> Automorphism:
    """Apply ``phi`` first, then ``psi``."""
    _same_graph(phi, psi)
    g = phi.graph
    return Automorphism(g, phi.symbols + psi.symbols, [apply_images(g, psi.images, img) for img in phi.images])


def invert(phi: Automorphism) -> Automorphism:
    return Automorphism(phi.graph, [s.inverse() for s in reversed(phi.symbols)])


def apply(phi: Automorphism, w) -> NormalForm:
    g = phi.graph
    codes = w.codes if isinstance(w, Word) else parse_codes(g, w)
    return NormalForm(g, phi.apply_codes(codes), trusted=True)


def equal(phi: Automorphism, psi: Automorphism) -> bool:
    _same_graph(phi, psi)
    return phi.images == psi.images


# -- constructors -----------------------------------------------------------

def _L(g: Graph, x) -> tuple:
    if isinstance(x, tuple):
        g._idx(x[0])
        return x
    return _parse_letter(g, x)


def _S(g: Graph, C) -> tuple:
    return tuple(g.names(g.mask(C)))


def _W(g: Graph, w) -> tuple:
    if isinstance(w, Word):
        return tuple((g.vertices[c >> 1], 1 if c & 1 else -1) for c in w.codes)
    if isinstance(w, tuple):
        return w
    return _parse_word(g, w)


def _make(g: Graph, kind: str, args: tuple) -> Automorphism:
    sym = GeneratorSymbol(kind, args)
    symbol_images(g, sym)
    return Automorphism(g, [sym])


def make_inversion(g: Graph, x: str) -> Automorphism:
    return _make(g, "inv", (_parse_vertex(g, x),))


def make_transvection(g: Graph, x, y) -> Automorphism:
    return _make(g, "tr", (_L(g, x), _L(g, y)))


def make_elementary_conjugating(g: Graph, C, x) -> Automorphism:
    return _make(g, "lc", (_S(g, C), _L(g, x)))


def make_aggregate(g: Graph, C, x) -> Automorphism:
    return _make(g, "agg", (_S(g, C), _L(g, x)))


def make_collected(g: Graph, u: str, x) -> Automorphism:
    return _make(g, "coll", (_parse_vertex(g, u), _L(g, x)))


def make_normal(g: Graph, y: str, x) -> Automorphism:
    return _make(g, "norm", (_parse_vertex(g, y), _L(g, x)))


def make_extended(g: Graph, L, x) -> Automorphism:
    return _make(g, "ext", (_S(g, L), _L(g, x)))


def make_composite_transvection(g: Graph, x, w) -> Automorphism:
    return _make(g, "ctr", (_L(g, x), _W(g, w)))


def make_gamma(g: Graph, y, j: int) -> Automorphism:
    return _make(g, "gammaj", (_W(g, y), j))


def make_inner(g: Graph, w) -> Automorphism:
    return _make(g, "inner", (_W(g, w),))


def make_graph_aut(g: Graph, perm) -> Automorphism:
    """``perm`` is a mapping vertex -> image or a cycle string like ``(a b)(c d)``."""
    if isinstance(perm, str):
        return Automorphism(g, parse_symbols(g, f"gaut({perm})"))
    mapping = {v: perm.get(v, v) for v in g.vertices}
    return _make(g, "gaut", (tuple(mapping.items()),))


def make_omega(g: Graph, j: int, a: int, b: int) -> Automorphism:
    return _make(g, "omega", (j, a, b))


def make_whitehead(g: Graph, A, a) -> Automorphism:
    items = tuple(x if isinstance(x, int) else _L(g, x) for x in A)
    return _make(g, "wh", (items, _W(g, a)))


# ---------------------------------------------------------------------------
# conjugation data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConjugationData:
    graph: Graph
    conjugators: tuple   # stripped conjugator codes per vertex
    exponents: tuple

    @property
    def length(self) -> int:
        return sum(len(c) for c in self.conjugators)

    def conjugator(self, x: str) -> NormalForm:
        return NormalForm(self.graph, self.conjugators[self.graph._idx(x)], trusted=True)


def _conj_form(g: Graph, img: tuple, i: int):
    u, core = cyclic_codes(g, img)
    if len(core) != 1 or core[0] >> 1 != i:
        return None
    _, f = left_divisor_codes(g, u, g.star[i])
    return f, (1 if core[0] & 1 else -1)


def conjugation_forms(phi: Automorphism):
    """Per-vertex ``(f, e)`` with ``x phi = f^-1 x^e f``; None if some image is not of that shape."""
    g = phi.graph
    out = []
    for i, img in enumerate(phi.images):
        f = _conj_form(g, img, i)
        if f is None:
            return None
        out.append(f)
    return out


def conjugation_data(phi: Automorphism):
    forms = conjugation_forms(phi)
    if forms is None or any(e < 0 for _, e in forms):
        return None
    return ConjugationData(phi.graph, tuple(f for f, _ in forms), tuple(e for _, e in forms))


def conj_length(phi: Automorphism) -> int:
    cd = conjugation_data(phi)
    if cd is None:
        raise MembershipError("automorphism is not basis-conjugating")
    return cd.length


def _images_conj_length(g: Graph, images) -> int | None:
    total = 0
    for i, img in enumerate(images):
        f = _conj_form(g, img, i)
        if f is None or f[1] < 0:
            return None
        total += len(f[0])
    return total


# -- divisibility and common conjugators --------------------------------------

def _back_letters(g: Graph, w: Sequence[int]) -> dict:
    out, blocked = {}, 0
    n = len(w)
    for k in range(n - 1, -1, -1):
        c = w[k]
        if blocked & ~g.adj[c >> 1] == 0 and c not in out:
            out[c] = k
        blocked |= 1 << (c >> 1)
    return out


def right_gcd(g: Graph, u: Sequence[int], v: Sequence[int]) -> tuple:
    """``(p, q, d)`` with ``u = p d``, ``v = q d`` and d the greatest common right divisor."""
    u, v = list(u), list(v)
    d = []
    while True:
        bu, bv = _back_letters(g, u), _back_letters(g, v)
        common = sorted(set(bu) & set(bv))
        if not common:
            break
        c = common[0]
        del u[bu[c]]
        del v[bv[c]]
        d.append(c)
    return canonical(g, u), canonical(g, v), canonical(g, d[::-1])


def right_lcm(g: Graph, u: Sequence[int], v: Sequence[int]):
    """Least common left multiple having both as right divisors, or None."""
    p, q, d = right_gcd(g, u, v)
    pm, qm = support_mask(p), support_mask(q)
    if pm & qm:
        return None
    for c in p:
        if qm & ~g.adj[c >> 1]:
            return None
    return canonical(g, list(p) + list(q) + list(d))


def is_right_divisor(g: Graph, d: Sequence[int], w: Sequence[int]) -> bool:
    return len(normal_codes(g, tuple(w) + invert_codes(d))) == len(w) - len(d)


def common_conjugator(g: Graph, images, mask: int, forms=None):
    """A word f with ``y phi = f^-1 y f`` for every y in ``mask``, or None.

    Any such f has each stripped conjugator as a right divisor, so it suffices
    to test their least common left multiple.
    """
    if forms is None:
        forms = []
        for i, img in enumerate(images):
            forms.append(_conj_form(g, img, i) if mask >> i & 1 else None)
    acc: tuple = ()
    for i in bits(mask):
        f = forms[i]
        if f is None or f[1] < 0:
            return None
        acc = right_lcm(g, acc, f[0])
        if acc is None:
            return None
    inv = invert_codes(acc)
    for i in bits(mask):
        if normal_codes(g, inv + (2 * i + 1,) + acc) != images[i]:
            return None
    return acc


# ---------------------------------------------------------------------------
# generator families
# ---------------------------------------------------------------------------

def _letters(g: Graph, i: int):
    return [(g.vertices[i], 1), (g.vertices[i], -1)]


def linn_symbols(g: Graph) -> list:
    out = []
    for x in range(len(g)):
        for c in g.perp_components(x):
            for h in _letters(g, x):
                out.append(GeneratorSymbol("lc", (tuple(g.names(c)), h)))
    return out


def _dedupe(g: Graph, syms: Iterable[GeneratorSymbol]) -> list:
    seen, out = set(), []
    for s in syms:
        key = tuple(symbol_images(g, s))
        if key in seen or all(img == (2 * i + 1,) for i, img in enumerate(key)):
            continue
        seen.add(key)
        out.append(s)
    return out


def generator_family(g: Graph, family: str) -> list:
    """Finite generating sets of the conjugating subgroups, as symbols."""
    key = ("family", family)
    if key in g._memo:
        return g._memo[key]
    n = len(g)
    fam = family.upper().replace("LINN_", "").replace("LINN", "")
    if family.upper() == "LINN":
        out = linn_symbols(g)
    elif fam == "S":
        out = [s for s in linn_symbols(g) if len(s.args[0]) == 1]
    elif fam == "C":
        out = [GeneratorSymbol("coll", (g.vertices[u], h))
               for x in range(n) for u in range(n) if g.dominates_idx(x, u)
               for h in _letters(g, x)]
    elif fam == "R":
        cls = g._classes()[0]
        out = []
        for s in linn_symbols(g):
            if len(s.args[0]) == 1:
                continue
            m = g.mask(s.args[0])
            if all(c & ~m == 0 or c & m == 0 for c in cls):
                out.append(s)
    elif fam == "V":
        out = generator_family(g, "LInn_R") + generator_family(g, "LInn_C")
    elif fam == "N":
        out = [GeneratorSymbol("norm", (g.vertices[y], h))
               for x in range(n) for y in range(n) if not g.star[x] >> y & 1
               for h in _letters(g, x)]
    elif fam == "I":
        out = []
        for x in range(n):
            _, sol = sol_masks(g, x)
            out += [GeneratorSymbol("norm", (g.vertices[y], h)) for y in bits(sol) for h in _letters(g, x)]
    elif fam == "T":
        out = []
        for x in range(n):
            comps = [c for c in g.perp_components(x) if not c & g.adm1(x)]
            for c in comps:
                out += [GeneratorSymbol("lc", (tuple(g.names(c)), h)) for h in _letters(g, x)]
    elif fam == "A":
        out = [GeneratorSymbol("agg", (tuple(g.names(c)), h))
               for x in range(n) for c in g.components_mask(1 << x) for h in _letters(g, x)]
    else:
        raise AutomorphismError(f"unknown generator family {family!r}")
    out = _dedupe(g, out)
    g._memo[key] = out
    return out


FAMILY_NAMES = ("LInn", "LInn_S", "LInn_R", "LInn_C", "LInn_V", "LInn_N", "LInn_I", "LInn_T", "LInn_A")


# ---------------------------------------------------------------------------
# membership tests
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    status: str                 # "yes", "no" or "unknown"
    certificate: object = None
    note: str = ""
    bound: int | None = None

    @property
    def decisive(self) -> bool:
        return self.status in ("yes", "no")

    def __bool__(self):
        return self.status == "yes"

    def label(self) -> str:
        return f"unknown({self.bound})" if self.status == "unknown" and self.bound is not None else self.status


YES, NO = "yes", "no"


def _fmt(g: Graph, codes) -> str:
    return format_codes(g, codes)


def check_conjugating(phi: Automorphism) -> Verdict:
    g = phi.graph
    for i, img in enumerate(phi.images):
        f = _conj_form(g, img, i)
        if f is None or f[1] < 0:
            return Verdict(NO, (g.vertices[i], _fmt(g, img)), "image is not a conjugate of the vertex")
    cd = conjugation_data(phi)
    return Verdict(YES, {v: _fmt(g, c) for v, c in zip(g.vertices, cd.conjugators)})


def check_inner(phi: Automorphism) -> Verdict:
    g = phi.graph
    f = common_conjugator(g, phi.images, g.full)
    if f is None:
        return Verdict(NO, None, "no common conjugator (least common multiple test)")
    return Verdict(YES, _fmt(g, f))


def _check_common(phi: Automorphism, masks: dict, what: str) -> Verdict:
    g = phi.graph
    forms = [_conj_form(g, img, i) for i, img in enumerate(phi.images)]
    if any(f is None or f[1] < 0 for f in forms):
        return Verdict(NO, None, "not basis-conjugating")
    cert = {}
    for name, m in masks.items():
        f = common_conjugator(g, phi.images, m, forms)
        if f is None:
            return Verdict(NO, name, f"no common conjugator on the {what} of {name}")
        cert[name] = _fmt(g, f)
    return Verdict(YES, cert)


def check_conj_n(phi: Automorphism) -> Verdict:
    g = phi.graph
    return _check_common(phi, {v: g.adm1(i) for i, v in enumerate(g.vertices)}, "admissible set")


def check_conj_v(phi: Automorphism) -> Verdict:
    g = phi.graph
    masks = {}
    for c in g._classes()[0]:
        masks[g.vertices[min(bits(c))]] = c
    return _check_common(phi, masks, "class")


def check_conj_s(phi: Automorphism) -> Verdict:
    g = phi.graph
    cd = conjugation_data(phi)
    if cd is None:
        return Verdict(NO, None, "not basis-conjugating")
    for i, f in enumerate(cd.conjugators):
        if support_mask(f) & ~g.adm1(i):
            return Verdict(NO, g.vertices[i], f"conjugator {_fmt(g, f)} leaves the admissible set of {g.vertices[i]}")
    return Verdict(YES, {v: _fmt(g, c) for v, c in zip(g.vertices, cd.conjugators)})


def _check_stabilizer(phi: Automorphism, masks: dict) -> Verdict:
    g = phi.graph
    for direction, images in (("forward", phi.images), ("inverse", phi.inverse_images())):
        for name, m in masks.items():
            for i in bits(m):
                if support_mask(images[i]) & ~m:
                    return Verdict(NO, (name, g.vertices[i], direction),
                                   f"{direction} image of {g.vertices[i]} leaves the set of {name}")
    return Verdict(YES, "all forward and inverse images stay inside")


def check_st_k(phi: Automorphism) -> Verdict:
    g = phi.graph
    return _check_stabilizer(phi, {v: g.adm1(i) for i, v in enumerate(g.vertices)})


def check_st_l(phi: Automorphism) -> Verdict:
    g = phi.graph
    return _check_stabilizer(phi, {v: g.star[i] for i, v in enumerate(g.vertices)})


def check_conj_a(phi: Automorphism) -> Verdict:
    """Aggregate subgroup: match exponent sums against aggregate generators,
    then test whether the remainder is inner."""
    g = phi.graph
    cd = conjugation_data(phi)
    if cd is None:
        return Verdict(NO, None, "not basis-conjugating")
    syms = []
    for x in range(len(g)):
        for c in g.components_mask(1 << x):
            outside = c & ~g.star[x]
            sums = {exponent_sum(cd.conjugators[y], x) for y in bits(outside)}
            if len(sums) > 1:
                return Verdict(NO, (g.vertices[x], g.vset(c)), "exponent sums differ inside one component")
            m = sums.pop() if sums else 0
            h = (g.vertices[x], 1 if m > 0 else -1)
            syms += [GeneratorSymbol("agg", (tuple(g.names(c)), h))] * abs(m)
    psi = Automorphism(g, syms)
    rest = compose(phi, invert(psi))
    inner = check_inner(rest)
    if inner:
        return Verdict(YES, {"aggregate_word": format_symbols(syms), "inner": inner.certificate})
    if len(g.components_mask()) <= 1:
        return Verdict(NO, None, "remainder after matching exponent sums is not inner")
    return Verdict("unknown", None, "remainder not inner; exponent-sum test is only complete for connected graphs", bound=0)


def _is_witness_kind(g: Graph, sym: GeneratorSymbol) -> bool:
    if sym.kind in ("inv", "tr", "ctr", "lc", "agg", "coll", "norm", "ext", "gammaj", "inner", "wh"):
        return True
    if sym.kind == "gaut":
        mapping = dict(sym.args[0])
        _, cls_of = g._classes()
        return all(cls_of[g._idx(v)] >> g._idx(w) & 1 for v, w in mapping.items())
    return False


def check_st_conj_k(phi: Automorphism, bound: int | None = None) -> Verdict:
    g = phi.graph
    if all(_is_witness_kind(g, s) for s in phi.symbols):
        return Verdict(YES, "generator word uses inversions, transvections and conjugating generators only")
    lattice = enumerate_lattice(g, "K")
    witnesses = {}
    for Y in lattice.elements:
        m = Y.mask
        for i in bits(m):
            _, core = cyclic_codes(g, phi.images[i])
            if support_mask(core) & ~m:
                return Verdict(NO, (repr(Y), g.vertices[i]), "cyclic core of an image leaves the set")
        f = _search_set_conjugator(phi, m, bound)
        if f is None:
            return Verdict("unknown", repr(Y), "no set conjugator within the search bound", bound=bound or _default_bound(phi))
        witnesses[repr(Y)] = _fmt(g, f)
    return Verdict(YES, witnesses)


def _default_bound(phi: Automorphism) -> int:
    return 2 * sum(len(img) for img in phi.images) + 2


def _search_set_conjugator(phi: Automorphism, m: int, bound: int | None):
    g = phi.graph
    bound = bound if bound is not None else _default_bound(phi)
    inv_images = phi.inverse_images()
    cands = {()}
    for i in bits(m):
        u, _ = cyclic_codes(g, phi.images[i])
        for k in range(len(u) + 1):
            cands.add(tuple(u[k:]))
    cands = sorted((c for c in cands if len(c) <= bound), key=len)
    for f in cands:
        fi = invert_codes(f)
        ok = all(support_mask(normal_codes(g, tuple(f) + phi.images[i] + fi)) & ~m == 0 for i in bits(m))
        if ok:
            ok = all(support_mask(apply_images(g, inv_images, fi + (2 * i + 1,) + tuple(f))) & ~m == 0 for i in bits(m))
        if ok:
            return f
    return None


# ---------------------------------------------------------------------------
# descent factorisation
# ---------------------------------------------------------------------------

def _peel_candidates(g: Graph, forms, family: list) -> list:
    """Order the family so that the moves predicted by the divisor lemma come first."""
    hints = set()
    n = len(g)
    for x in range(n):
        gx = forms[x][0]
        for eps in (1, -1):
            xe = (2 * x + (1 if eps > 0 else 0),)
            lead = normal_codes(g, xe + gx)
            if len(lead) != len(gx) + 1:
                continue
            for y in range(n):
                if g.star[x] >> y & 1:
                    continue
                if is_right_divisor(g, lead, forms[y][0]):
                    hints.add((x, -eps, y))
    first, rest = [], []
    for s in family:
        h = s.args[1]
        x = g._idx(h[0]) if s.kind != "gaut" else None
        moved = support_mask(c for i, img in enumerate(symbol_images(g, s)) if img != (2 * i + 1,) for c in (2 * i + 1,))
        if any(x == hx and h[1] == he and moved >> hy & 1 for hx, he, hy in hints):
            first.append(s)
        else:
            rest.append(s)
    return first + rest


def _lookahead(g: Graph, images, gens, length: int, depth: int):
    """Products of ``depth`` generators that shorten the conjugators."""
    layer = [((), list(images))]
    for _ in range(depth):
        nxt = []
        for moves, imgs in layer:
            for s in gens:
                simg = symbol_images(g, s)
                new = [apply_images(g, imgs, simg[i]) for i in range(len(g))]
                nl = _images_conj_length(g, new)
                if nl is None:
                    continue
                if nl < length:
                    return ((s,) + moves, new, nl)
                nxt.append(((s,) + moves, new))
        layer = nxt
    return None


def descend(phi: Automorphism, family: str, max_steps: int = 10_000, lookahead: int = 1) -> list:
    """Write ``phi`` as a word in the given generator family by length descent.

    Each step picks a generator s with ``|s phi| < |phi|`` and records s^-1.
    With ``lookahead`` above 1, products of up to that many generators are
    tried when no single one shortens.
    """
    g = phi.graph
    gens = generator_family(g, family)
    images = list(phi.images)
    length = _images_conj_length(g, images)
    if length is None:
        raise MembershipError("automorphism is not basis-conjugating")
    word: list = []
    steps = 0
    while length:
        steps += 1
        if steps > max_steps:
            raise DescentError("step limit exceeded")
        forms = [_conj_form(g, img, i) for i, img in enumerate(images)]
        best = None
        for s in _peel_candidates(g, forms, gens):
            simg = symbol_images(g, s)
            new = [apply_images(g, images, simg[i]) for i in range(len(g))]
            nl = _images_conj_length(g, new)
            if nl is not None and nl < length:
                best = ((s,), new, nl)
                break
        for depth in range(2, lookahead + 1):
            if best is not None:
                break
            best = _lookahead(g, images, gens, length, depth)
        if best is None:
            raise DescentError(
                f"no {family} generator shortens the conjugators (length {length}): "
                + ", ".join(f"{v}->{_fmt(g, img)}" for v, img in zip(g.vertices, images)))
        moves, images, length = best
        word.extend(_inverse_symbol_args(s) for s in moves)
    return word


_TARGET_CHECK = {
    "LInn": check_conjugating,
    "LInn_V": check_conj_v,
    "LInn_N": check_conj_n,
    "LInn_S": check_conj_s,
}


def factor_conjugating(phi: Automorphism, target: str = "LInn") -> list:
    """Generator word over the target family evaluating to ``phi``."""
    g = phi.graph
    if target not in FAMILY_NAMES:
        raise AutomorphismError(f"unknown target family {target!r}")
    check = _TARGET_CHECK.get(target, check_conjugating)
    v = check(phi)
    if not v:
        raise MembershipError(f"automorphism is not in the subgroup generated by {target}: {v.note}")
    word = descend(phi, target)
    if Automorphism(g, word).images != phi.images:
        raise DescentError("factorisation does not reproduce the automorphism")
    return word


TAME_LOOKAHEAD = 2


def _descent_verdict(phi: Automorphism, family: str, lookahead: int = 1) -> Verdict:
    try:
        word = descend(phi, family, lookahead=lookahead)
    except (DescentError, MembershipError) as exc:
        return Verdict("unknown", None, f"descent stalled: {exc}", bound=lookahead)
    return Verdict(YES, format_symbols(word))


def check_conj_c(phi: Automorphism, conj_v: Verdict | None = None, conj_s: Verdict | None = None) -> Verdict:
    conj_v = conj_v or check_conj_v(phi)
    conj_s = conj_s or check_conj_s(phi)
    if not conj_v:
        return Verdict(NO, conj_v.certificate, "not vertex-conjugating")
    if not conj_s:
        return Verdict(NO, conj_s.certificate, "not singular")
    return _descent_verdict(phi, "LInn_C")


def check_conj_i(phi: Automorphism, conj_n: Verdict | None = None, conj_s: Verdict | None = None) -> Verdict:
    conj_n = conj_n or check_conj_n(phi)
    conj_s = conj_s or check_conj_s(phi)
    if not conj_n:
        return Verdict(NO, conj_n.certificate, "not normal-conjugating")
    if not conj_s:
        return Verdict(NO, conj_s.certificate, "not singular")
    return _descent_verdict(phi, "LInn_I")


def check_tame(phi: Automorphism) -> Verdict:
    """Membership in the subgroup generated by tame conjugations.

    For x outside the star of y the exponent sum of x in the conjugator of y
    is additive on conjugating automorphisms, and tame generators never
    change it when y lies in the admissible set of x.
    """
    g = phi.graph
    cd = conjugation_data(phi)
    if cd is None:
        return Verdict(NO, None, "not basis-conjugating")
    for x in range(len(g)):
        for y in bits(g.adm1(x) & ~g.star[x]):
            e = exponent_sum(cd.conjugators[y], x)
            if e:
                return Verdict(NO, (g.vertices[x], g.vertices[y], e),
                               f"exponent of {g.vertices[x]} in the conjugator of {g.vertices[y]} is {e}")
    return _descent_verdict(phi, "LInn_T", TAME_LOOKAHEAD)


@dataclass
class ClassificationReport:
    verdicts: dict = field(default_factory=dict)

    ORDER = ("conjugating", "Inn", "Conj_S", "Conj_V", "Conj_C", "Conj_N", "Conj_I",
             "Conj_A", "St_K", "St_L", "St_conj_K", "tame")

    def __getitem__(self, key) -> Verdict:
        return self.verdicts[key]

    def rows(self) -> list:
        return [(k, self.verdicts[k]) for k in self.ORDER if k in self.verdicts]

    def to_text(self) -> str:
        lines = []
        for k, v in self.rows():
            extra = f"  {v.note}" if v.note else ""
            lines.append(f"{k:<12} {v.label()}{extra}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {k: {"status": v.status, "label": v.label(), "certificate": _jsonable(v.certificate), "note": v.note}
                for k, v in self.rows()}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if x is None or isinstance(x, (str, int, float, bool)):
        return x
    return str(x)


def classify(phi: Automorphism, bound: int | None = None) -> ClassificationReport:
    r = ClassificationReport()
    v = r.verdicts
    v["conjugating"] = check_conjugating(phi)
    v["Inn"] = check_inner(phi) if v["conjugating"] else Verdict(NO, None, "not basis-conjugating")
    v["Conj_S"] = check_conj_s(phi)
    v["Conj_V"] = check_conj_v(phi)
    v["Conj_N"] = check_conj_n(phi)
    v["Conj_C"] = check_conj_c(phi, v["Conj_V"], v["Conj_S"])
    v["Conj_I"] = check_conj_i(phi, v["Conj_N"], v["Conj_S"])
    v["Conj_A"] = check_conj_a(phi)
    v["St_K"] = check_st_k(phi)
    v["St_L"] = check_st_l(phi)
    v["St_conj_K"] = check_st_conj_k(phi, bound)
    v["tame"] = check_tame(phi)
    return r


# ---------------------------------------------------------------------------
# commuting conjugating generators past transvections
# ---------------------------------------------------------------------------

def _conj_word_symbols(g: Graph, lmask: int, word: Sequence[tuple]) -> list:
    """Symbols conjugating the vertex set L by ``word``: the last letter acts first.

    Vertices of L commuting with a letter are left out of its factor.
    """
    out = []
    for l in reversed(word):
        m = lmask & ~g.star[g._idx(l[0])]
        if m:
            out.append(GeneratorSymbol("ext", (tuple(g.names(m)), l)))
    return out


def _as_ctr(g: Graph, sym: GeneratorSymbol) -> GeneratorSymbol:
    if sym.kind == "ctr":
        if sym.exp < 0:
            return _inverse_symbol_args(sym)
        return sym
    if sym.kind == "tr":
        base = sym if sym.exp > 0 else _inverse_symbol_args(sym)
        return GeneratorSymbol("ctr", (base.args[0], (base.args[1],)))
    raise AutomorphismError(f"{sym} is not a transvection")


def _as_ext(g: Graph, sym: GeneratorSymbol) -> GeneratorSymbol:
    if sym.kind not in ("ext", "lc"):
        raise AutomorphismError(f"{sym} is not an elementary or extended conjugating generator")
    base = sym if sym.exp > 0 else _inverse_symbol_args(sym)
    return GeneratorSymbol("ext", base.args)


def is_tame(g: Graph, sym: GeneratorSymbol) -> bool:
    e = _as_ext(g, sym)
    return not g.mask(e.args[0]) & g.adm1(g._idx(e.args[1][0]))


def _word_of(g: Graph, codes) -> tuple:
    return tuple((g.vertices[c >> 1], 1 if c & 1 else -1) for c in codes)


def rewrite_tame(g: Graph, alpha: GeneratorSymbol, tau: GeneratorSymbol) -> list:
    """Rewrite ``alpha tau`` as a word whose transvection part comes first.

    ``alpha`` is an elementary or extended conjugating symbol conjugating a
    union L of components by a letter y; ``tau`` is a transvection or a
    composite transvection moving the letter v.
    """
    a = _as_ext(g, alpha)
    t = _as_ctr(g, tau)
    symbol_images(g, a)
    symbol_images(g, t)
    L, ylet = a.args
    lmask = g.mask(L)
    vlet, w = t.args
    y = g._idx(ylet[0])
    v = g._idx(vlet[0])
    wc = normal_codes(g, _wcodes(g, w))
    if v != y:
        # alpha tau = tau' alpha with tau' moving v by the image of w under alpha^-1,
        # conjugated by y when v itself lies in L
        ainv = symbol_images(g, a.inverse())
        b = apply_images(g, ainv, wc)
        if lmask >> v & 1:
            h = _lcode(g, ylet)
            b = normal_codes(g, (h ^ 1,) + b + (h,))
        new_t = GeneratorSymbol("ctr", (vlet, _word_of(g, b)))
        try:
            symbol_images(g, new_t)
        except InvalidGeneratorError as exc:
            raise AutomorphismError(f"rewritten transvection is not valid: {exc}") from None
        if not b:
            out = [alpha]
        else:
            out = [new_t, alpha]
    else:
        if support_mask(wc) & lmask:
            raise AutomorphismError("no rewriting case applies: the transvection word meets the conjugated set")
        if len(wc) > 1 and not is_tame(g, alpha):
            raise AutomorphismError("moving a composite transvection of the conjugating letter needs a tame generator")
        # alpha tau = tau alpha', alpha' conjugating L by (y tau)^delta
        ycodes = ((2 * y + 1,) + wc) if vlet[1] > 0 else (invert_codes(wc) + (2 * y + 1,))
        conj = ycodes if ylet[1] > 0 else invert_codes(ycodes)
        conj = normal_codes(g, conj)
        out = [t] + _conj_word_symbols(g, lmask, _word_of(g, conj))
    lhs = Automorphism(g, [alpha, tau])
    if Automorphism(g, out).images != lhs.images:
        raise DescentError(f"rewrite of {alpha} {tau} failed to preserve the automorphism")
    return out


def _tr_sym(x, y, exp: int = 1) -> GeneratorSymbol:
    return GeneratorSymbol("tr", (x, y), exp)


def commutation_case(g: Graph, alpha: GeneratorSymbol, tau: GeneratorSymbol):
    """Case label and right-hand side for moving a transvection past ``alpha``.

    ``alpha`` conjugates a union L of components of the graph minus the star
    of a vertex y by the positive letter y; ``tau`` moves v by the letter x.
    Returns ``(case, word)`` with ``alpha tau`` equal to ``word``, or raises
    when none of the four cases covers the pair.
    """
    a = _as_ext(g, alpha)
    if alpha.exp < 0 or a.args[1][1] < 0:
        raise AutomorphismError("the conjugating letter must be a positive vertex")
    if tau.kind != "tr" or tau.exp < 0:
        raise AutomorphismError(f"{tau} is not a transvection")
    symbol_images(g, a)
    symbol_images(g, tau)
    L, ylet = a.args
    lmask = g.mask(L)
    y = g._idx(ylet[0])
    vlet, xlet = tau.args
    v, x = g._idx(vlet[0]), g._idx(xlet[0])
    v_in, x_in = bool(lmask >> v & 1), bool(lmask >> x & 1)
    x_perp = bool(g.star[y] >> x & 1)
    if (v_in and (x_in or x_perp)) or (not v_in and v != y and not x_in):
        return "i", [tau, alpha]
    if v_in and not (x_in or x_perp):
        if not g.dominates_idx(y, v):
            raise DescentError(f"{vlet[0]} should be dominated by {ylet[0]}")
        return "ii", [_tr_sym(vlet, ylet), tau, _tr_sym(vlet, ylet, -1), alpha]
    if not v_in and v != y and x_in:
        if not g.dominates_idx(y, v):
            raise DescentError(f"{vlet[0]} should be dominated by {ylet[0]}")
        return "iii", [_tr_sym(vlet, ylet, -1), tau, _tr_sym(vlet, ylet), alpha]
    if v == y and not x_in:
        # L may meet the star of x, where conjugation by x is trivial
        bmask = lmask & ~g.star[x]
        if any(c & bmask and c & ~bmask for c in g.perp_components(x)):
            raise DescentError(f"L minus the star of {xlet[0]} is not a union of its components")
        beta = [GeneratorSymbol("ext", (tuple(g.names(bmask)), xlet))] if bmask else []
        if vlet[1] > 0:
            return "iv", [tau] + beta + [alpha]
        return "iv", [tau, alpha] + [b.inverse() for b in beta]
    raise AutomorphismError("no commutation case applies")


def conjugate_composite(g: Graph, alpha: GeneratorSymbol, ctr: GeneratorSymbol) -> GeneratorSymbol:
    """The composite transvection ``ctr'`` with ``alpha ctr = ctr' alpha``.

    The moved letter must differ from the conjugating letter; each letter a_i
    of the word is replaced by y^e a_i y^-e according to its commutation case.
    """
    a = _as_ext(g, alpha)
    vlet, w = _as_ctr(g, ctr).args
    ylet = a.args[1]
    if vlet[0] == ylet[0]:
        raise AutomorphismError("moved letter equals the conjugating letter")
    h = _lcode(g, ylet)
    out: tuple = ()
    for l in w:
        case, _ = commutation_case(g, a, _tr_sym(vlet, l))
        e = {"i": 0, "ii": -1, "iii": 1}[case]
        c = _lcode(g, l)
        if e == 1:
            out += (h, c, h ^ 1)
        elif e == -1:
            out += (h ^ 1, c, h)
        else:
            out += (c,)
    return GeneratorSymbol("ctr", (vlet, _word_of(g, free_reduce(g, out))))


def push_composite(g: Graph, alpha: GeneratorSymbol, ctr: GeneratorSymbol) -> list:
    """``[ctr, alpha_{L,a_n}, ..., alpha_{L,a_1}, alpha]`` equal to ``alpha ctr``
    when ``alpha`` is tame and moves the letter that ``ctr`` moves."""
    a = _as_ext(g, alpha)
    if not is_tame(g, a):
        raise AutomorphismError(f"{alpha} is not tame")
    t = _as_ctr(g, ctr)
    vlet, w = t.args
    L, ylet = a.args
    if vlet != ylet:
        raise AutomorphismError("the composite transvection must move the conjugating letter")
    lmask = g.mask(L)
    out = [t]
    for l in reversed(w):
        m = lmask & ~g.star[g._idx(l[0])]
        if m:
            out.append(GeneratorSymbol("ext", (tuple(g.names(m)), l)))
    return out + [a]


# ---------------------------------------------------------------------------
# balanced graphs: transvections first, conjugating part second
# ---------------------------------------------------------------------------

def _expand_to_primitives(g: Graph, sym: GeneratorSymbol) -> list:
    """Rewrite a symbol as inversions, transvections, extended conjugations and inner automorphisms."""
    k = sym.kind
    if sym.exp < 0:
        return [s.inverse() for s in reversed(_expand_to_primitives(g, sym.inverse()))]
    if k in ("inv", "tr", "ctr", "inner"):
        return [sym]
    if k in ("lc", "ext"):
        return [GeneratorSymbol("ext", sym.args)]
    if k in ("coll", "norm"):
        h = sym.args[1]
        x = g._idx(h[0])
        mask = collected_mask(g, g._idx(sym.args[0]), x) if k == "coll" else normal_mask(g, g._idx(sym.args[0]), x)
        return [GeneratorSymbol("ext", (tuple(g.names(mask)), h))]
    if k == "agg":
        C, h = sym.args
        x = g._idx(h[0])
        mask = g.mask(C) & ~g.star[x]
        return [GeneratorSymbol("ext", (tuple(g.names(mask)), h))] if mask else []
    if k == "gammaj":
        w, j = sym.args
        comp = ComponentStructure.of(g).component(j)
        out = []
        for l in reversed(w):
            x = g._idx(l[0])
            mask = comp & ~g.star[x]
            if mask:
                out.append(GeneratorSymbol("ext", (tuple(g.names(mask)), l)))
        return out
    raise AutomorphismError(f"{sym} is not in the subgroup generated by inversions, transvections and conjugations")


@dataclass(frozen=True)
class BalancedFactorization:
    st_part: tuple
    conj_part: tuple


def balanced_factorization(g: Graph, symbols: Sequence[GeneratorSymbol]) -> BalancedFactorization:
    """Split a word over inversions, transvections and conjugating generators
    as (stabiliser of admissible parabolics) x (conjugating part)."""
    bal = is_balanced(g)
    if not bal:
        w = bal.witness
        raise UnbalancedGraphError(
            f"graph is not balanced: out({w.vertex}) meets components containing {w.a} and {w.b}", w)
    if len(g.components_mask()) > 1:
        raise AutomorphismError("balanced factorisation needs a connected graph")
    tokens: list = []
    for s in symbols:
        for p in _expand_to_primitives(g, s):
            tokens.extend(_make_tame(g, p))
    st: list = []
    cj: list = []
    for tok in tokens:
        if tok.kind in ("ext", "inner"):
            cj.append(tok)
        elif tok.kind == "inv":
            cj = [_conj_by_inversion(g, c, tok) for c in cj]
            st.append(tok)
        else:
            moved, cj = _push_transvection(g, cj, _as_ctr(g, tok))
            st.extend(moved)
    st = [s for s in st if not (s.kind == "ctr" and not s.args[1])]
    result = BalancedFactorization(tuple(st), tuple(cj))
    total = Automorphism(g, list(st) + list(cj))
    if total.images != Automorphism(g, symbols).images:
        raise DescentError("balanced factorisation does not reproduce the input")
    return result


def _make_tame(g: Graph, sym: GeneratorSymbol) -> list:
    """Replace a non-tame extended conjugation by tame ones, transvections and an inner automorphism."""
    if sym.kind != "ext":
        return [sym]
    if sym.exp < 0:
        return [s.inverse() for s in reversed(_make_tame(g, sym.inverse()))]
    L, h = sym.args
    x = g._idx(h[0])
    lmask = g.mask(L)
    out = []
    for c in g.perp_components(x):
        if not c & lmask:
            continue
        if not c & g.adm1(x):
            out.append(GeneratorSymbol("ext", (tuple(g.names(c)), h)))
        elif popcount(c) == 1 and g.class_mask(x) & c:
            u = g.vertices[min(bits(c))]
            out += [GeneratorSymbol("tr", ((u, 1), h)), GeneratorSymbol("tr", ((u, -1), h))]
        else:
            out += _rewrite_dominated_component(g, c, x, h)
    return out


def _rewrite_dominated_component(g: Graph, c: int, x: int, h: tuple) -> list:
    # conjugating the component c equals the inner automorphism by x with the
    # rest of the graph conjugated back and the class of x handled by transvections
    rest = g.full & ~(c | g.star[x] | g.class_mask(x))
    xl = (g.vertices[x], 1)
    out = [GeneratorSymbol("inner", ((xl,),))]
    if rest:
        out.append(GeneratorSymbol("ext", (tuple(g.names(rest)), xl), -1))
    for v in bits(g.class_mask(x) & ~(1 << x)):
        vn = g.vertices[v]
        out += [GeneratorSymbol("tr", ((vn, 1), xl), -1), GeneratorSymbol("tr", ((vn, -1), xl), -1)]
    if h[1] < 0:
        out = [s.inverse() for s in reversed(out)]
    check = Automorphism(g, [GeneratorSymbol("ext", ((tuple(g.names(c))), h))])
    if Automorphism(g, out).images != check.images:
        raise DescentError("rewriting a non-tame conjugation failed")
    return out


def _conj_by_inversion(g: Graph, c: GeneratorSymbol, inv: GeneratorSymbol) -> GeneratorSymbol:
    """``c inv = inv c'``; inversions fix every vertex set and only flip letters."""
    z = inv.args[0]

    def flip(letter):
        return (letter[0], -letter[1]) if letter[0] == z else letter

    if c.kind == "ext":
        return GeneratorSymbol("ext", (c.args[0], flip(c.args[1])), c.exp)
    return GeneratorSymbol("inner", (tuple(flip(l) for l in c.args[0]),), c.exp)


def _push_transvection(g: Graph, cj: list, t: GeneratorSymbol) -> tuple:
    """``cj t = t' cj'`` with t' a composite transvection."""
    new_tail: list = []
    for c in reversed(cj):
        if c.kind == "inner":
            # inner automorphisms slide right: gamma_w t = t gamma_{w t}
            timg = symbol_images(g, t)
            w = normal_codes(g, _wcodes(g, c.args[0]) if c.exp > 0 else invert_codes(_wcodes(g, c.args[0])))
            new_tail.insert(0, GeneratorSymbol("inner", (_word_of(g, apply_images(g, timg, w)),)))
            continue
        out = rewrite_tame(g, c, t)
        if out and out[0].kind == "ctr" and len(out) >= 1 and out[0] is not c:
            t = out[0]
            new_tail = out[1:] + new_tail
        else:
            t = GeneratorSymbol("ctr", (t.args[0], ()))
            new_tail = out + new_tail
    return [t], new_tail


# ---------------------------------------------------------------------------
# bounded search for a stabiliser-times-conjugating split
# ---------------------------------------------------------------------------

DEFAULT_SPLIT_BOUND = 3


def _stabilises(g: Graph, images, inv_images) -> bool:
    for x in range(len(g)):
        m = g.adm1(x)
        for i in bits(m):
            if support_mask(images[i]) & ~m or support_mask(inv_images[i]) & ~m:
                return False
    return True


def search_st_conj_split(phi: Automorphism, bound: int = DEFAULT_SPLIT_BOUND) -> Verdict:
    """Look for ``phi = sigma kappa`` with sigma stabilising every admissible
    parabolic and kappa a product of at most ``bound`` elementary conjugations."""
    g = phi.graph
    gens = generator_family(g, "LInn")
    phi_inv = phi.inverse_images()
    seen = {tuple(_identity_images(g))}
    layer = [((), tuple(_identity_images(g)), tuple(_identity_images(g)))]
    explored = 0
    for depth in range(bound + 1):
        nxt = []
        for word, kimg, kinv in layer:
            explored += 1
            # sigma = phi kappa^-1 and sigma^-1 = kappa phi^-1
            sig = [apply_images(g, kinv, img) for img in phi.images]
            sig_inv = [apply_images(g, phi_inv, img) for img in kimg]
            if _stabilises(g, sig, sig_inv):
                kappa = Automorphism(g, word)
                sigma = Automorphism(g, [], sig)
                return Verdict(YES, {"conj_part": format_symbols(word),
                                     "st_images": {v: _fmt(g, c) for v, c in zip(g.vertices, sigma.images)},
                                     "conj_images": {v: _fmt(g, c) for v, c in zip(g.vertices, kappa.images)}})
            if depth == bound:
                continue
            for s in gens:
                simg = symbol_images(g, s)
                sinv = symbol_images(g, s.inverse())
                new = tuple(apply_images(g, simg, img) for img in kimg)
                if new in seen:
                    continue
                seen.add(new)
                new_inv = tuple(apply_images(g, kinv, img) for img in sinv)
                nxt.append((word + (s,), new, new_inv))
        layer = nxt
    return Verdict("unknown", {"explored": explored},
                   f"no split with at most {bound} elementary conjugations", bound=bound)
