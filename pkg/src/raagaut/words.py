"""Word calculus in the partially commutative group of a graph.

Letters are encoded as small integers: ``2 * vertex_index + 1`` for a vertex
and ``2 * vertex_index`` for its inverse, so ``code ^ 1`` inverts a letter and
``code >> 1`` recovers the vertex.  Sorting codes therefore orders letters by
vertex input order with the inverse first.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce as _fold
from math import gcd
from typing import Iterable, Sequence

from .graph_lattice import Graph, VertexSet, bits

_TOKEN = re.compile(r"([A-Za-z_][A-Za-z0-9_']*)(?:\^(-?\d+))?\Z")


class WordError(ValueError):
    pass


class NotCyclicallyMinimalError(WordError):
    pass


@dataclass(frozen=True)
class Letter:
    vertex: str
    sign: int

    def __str__(self):
        return self.vertex if self.sign > 0 else f"{self.vertex}^-1"


def letter_code(g: Graph, vertex: str, sign: int = 1) -> int:
    return 2 * g._idx(vertex) + (1 if sign > 0 else 0)


def code_name(g: Graph, code: int) -> str:
    v = g.vertices[code >> 1]
    return v if code & 1 else f"{v}^-1"


def parse_codes(g: Graph, text: str) -> tuple:
    text = text.strip()
    if text in ("", "1", "ε"):
        return ()
    out = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m:
            raise WordError(f"bad word token {tok!r}")
        i = g._idx(m.group(1))
        power = int(m.group(2)) if m.group(2) is not None else 1
        code = 2 * i + (1 if power > 0 else 0)
        out.extend([code] * abs(power))
    return tuple(out)


def format_codes(g: Graph, codes: Sequence[int]) -> str:
    return " ".join(code_name(g, c) for c in codes) if codes else "1"


def invert_codes(codes: Sequence[int]) -> tuple:
    return tuple(c ^ 1 for c in reversed(codes))


# ---------------------------------------------------------------------------
# core algorithms on code tuples
# ---------------------------------------------------------------------------

def free_reduce(g: Graph, codes: Sequence[int]) -> list:
    """Cancel every pair ``x^e ... x^-e`` whose middle commutes with x."""
    w = list(codes)
    star = g.star
    changed = True
    while changed:
        changed = False
        n = len(w)
        dead = [False] * n
        for i in range(n):
            if dead[i]:
                continue
            ci = w[i]
            s = star[ci >> 1]
            for j in range(i + 1, n):
                if dead[j]:
                    continue
                cj = w[j]
                if cj == ci ^ 1:
                    dead[i] = dead[j] = True
                    changed = True
                    break
                if not s >> (cj >> 1) & 1 or cj == ci:
                    break
        if changed:
            w = [c for c, d in zip(w, dead) if not d]
    return w


def canonical(g: Graph, codes: Sequence[int]) -> tuple:
    """Least linearisation of a reduced word: keep pulling the least free letter."""
    rest = list(codes)
    adj = g.adj
    out = []
    while rest:
        best = None
        blocked = 0
        for k, c in enumerate(rest):
            v = c >> 1
            if blocked & ~adj[v] == 0 and (best is None or c < rest[best]):
                best = k
            blocked |= 1 << v
        out.append(rest.pop(best))
    return tuple(out)


def normal_codes(g: Graph, codes: Sequence[int]) -> tuple:
    return canonical(g, free_reduce(g, codes))


def left_divisor_codes(g: Graph, codes: Sequence[int], ymask: int) -> tuple:
    """Split a reduced word as ``d . rest`` with d the greatest left divisor in Y."""
    rest = list(codes)
    adj = g.adj
    d = []
    moved = True
    while moved:
        moved = False
        blocked = 0
        for k, c in enumerate(rest):
            v = c >> 1
            if blocked & ~adj[v] == 0 and ymask >> v & 1:
                d.append(rest.pop(k))
                moved = True
                break
            blocked |= 1 << v
    return canonical(g, d), canonical(g, rest)


def right_divisor_codes(g: Graph, codes: Sequence[int], ymask: int) -> tuple:
    """Split as ``rest . d`` with d the greatest right divisor in Y."""
    d, rest = left_divisor_codes(g, invert_codes(codes), ymask)
    return canonical(g, invert_codes(d)), canonical(g, invert_codes(rest))


def _front_available(g: Graph, w: Sequence[int]) -> list:
    out, blocked = [], 0
    for k, c in enumerate(w):
        if blocked & ~g.adj[c >> 1] == 0:
            out.append(k)
        blocked |= 1 << (c >> 1)
    return out


def _back_available(g: Graph, w: Sequence[int]) -> list:
    n = len(w)
    return [n - 1 - k for k in _front_available(g, w[::-1])]


def cyclic_codes(g: Graph, codes: Sequence[int]) -> tuple:
    """Return ``(u, core)`` with ``w = u^-1 core u`` and core cyclically minimal."""
    w = list(normal_codes(g, codes))
    peeled = []
    while True:
        back = {w[k]: k for k in _back_available(g, w)}
        hit = None
        for k in _front_available(g, w):
            j = back.get(w[k] ^ 1)
            if j is not None:
                hit = (k, j)
                break
        if hit is None:
            break
        k, j = hit
        peeled.append(w[k])
        w = [c for i, c in enumerate(w) if i not in hit]
    u = canonical(g, [c ^ 1 for c in reversed(peeled)])
    return u, canonical(g, w)


def _delta_components(g: Graph, vmask: int) -> list:
    """Components of the non-commutation graph restricted to ``vmask``."""
    comps = []
    left = vmask
    while left:
        low = left & -left
        comp, frontier = low, low
        while frontier:
            nxt = 0
            for i in bits(frontier):
                nxt |= ~g.star[i] & vmask
            nxt &= left & ~comp
            comp |= nxt
            frontier = nxt
        comps.append(comp)
        left &= ~comp
    return comps


def support_mask(codes: Iterable[int]) -> int:
    m = 0
    for c in codes:
        m |= 1 << (c >> 1)
    return m


def block_codes(g: Graph, core: Sequence[int]) -> list:
    return [
        canonical(g, [c for c in core if comp >> (c >> 1) & 1])
        for comp in _delta_components(g, support_mask(core))
    ]


def _block_root(g: Graph, block: tuple) -> tuple:
    counts: dict = {}
    for c in block:
        counts[c >> 1] = counts.get(c >> 1, 0) + 1
    top = _fold(gcd, counts.values())
    for k in range(top, 1, -1):
        if top % k:
            continue
        need = {v: n // k for v, n in counts.items()}
        seen: dict = {}
        cand = []
        for c in block:
            v = c >> 1
            if seen.get(v, 0) < need[v]:
                seen[v] = seen.get(v, 0) + 1
                cand.append(c)
        if normal_codes(g, cand * k) == block:
            return canonical(g, cand), k
    return block, 1


def root_codes(g: Graph, codes: Sequence[int]) -> tuple:
    u, core = cyclic_codes(g, codes)
    if not core:
        return (), 1
    roots = [_block_root(g, b) for b in block_codes(g, core)]
    n = _fold(gcd, (k for _, k in roots))
    r = []
    for rj, k in roots:
        r.extend(rj * (k // n))
    return normal_codes(g, list(invert_codes(u)) + r + list(u)), n


def exponent_sum(codes: Iterable[int], vertex_index: int) -> int:
    return sum((1 if c & 1 else -1) for c in codes if c >> 1 == vertex_index)


# ---------------------------------------------------------------------------
# public types
# ---------------------------------------------------------------------------

class Word:
    """A possibly non-geodesic sequence of letters over a graph."""

    __slots__ = ("graph", "codes")

    def __init__(self, graph: Graph, codes: Iterable[int] = ()):
        self.graph = graph
        self.codes = tuple(codes)

    @classmethod
    def parse(cls, graph: Graph, text: str) -> "Word":
        return cls(graph, parse_codes(graph, text))

    @classmethod
    def from_letters(cls, graph: Graph, letters: Iterable[Letter]) -> "Word":
        return cls(graph, (letter_code(graph, l.vertex, l.sign) for l in letters))

    @property
    def letters(self) -> list:
        return [Letter(self.graph.vertices[c >> 1], 1 if c & 1 else -1) for c in self.codes]

    def __len__(self):
        return len(self.codes)

    def __str__(self):
        return format_codes(self.graph, self.codes)

    def __repr__(self):
        return f"{type(self).__name__}({str(self)!r})"

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.graph, self.codes + other.codes)

    def inverse(self) -> "Word":
        return Word(self.graph, invert_codes(self.codes))

    def normal_form(self) -> "NormalForm":
        return normalize(self)


class NormalForm(Word):
    """Canonical geodesic representative of a group element."""

    __slots__ = ()

    def __init__(self, graph: Graph, codes: Iterable[int] = (), *, trusted: bool = False):
        super().__init__(graph, codes if trusted else normal_codes(graph, tuple(codes)))

    def __eq__(self, other):
        return isinstance(other, NormalForm) and self.graph == other.graph and self.codes == other.codes

    def __hash__(self):
        return hash(self.codes)

    def __mul__(self, other: Word) -> "NormalForm":
        return NormalForm(self.graph, self.codes + other.codes)

    def __pow__(self, k: int) -> "NormalForm":
        base = self.codes if k >= 0 else invert_codes(self.codes)
        return NormalForm(self.graph, base * abs(k))

    def inverse(self) -> "NormalForm":
        return NormalForm(self.graph, invert_codes(self.codes), trusted=False)

    def conjugate(self, by: Word) -> "NormalForm":
        """``by^-1 self by``."""
        return NormalForm(self.graph, invert_codes(by.codes) + self.codes + by.codes)

    @property
    def length(self) -> int:
        return len(self.codes)

    @property
    def support(self) -> VertexSet:
        return self.graph.vset(support_mask(self.codes))

    def is_identity(self) -> bool:
        return not self.codes


def _nf(g: Graph, codes: Sequence[int]) -> NormalForm:
    return NormalForm(g, codes, trusted=True)


def as_word(g: Graph, w) -> Word:
    if isinstance(w, Word):
        return w
    return Word.parse(g, w)


def normalize(w: Word) -> NormalForm:
    if isinstance(w, NormalForm):
        return w
    return _nf(w.graph, normal_codes(w.graph, w.codes))


def equal(u: Word, v: Word) -> bool:
    if u.graph != v.graph:
        raise WordError("words live on different graphs")
    return normalize(u).codes == normalize(v).codes


def length(w: Word) -> int:
    return len(normalize(w).codes)


def support(w: Word) -> VertexSet:
    return normalize(w).support


def greatest_left_divisor(w: Word, Y) -> NormalForm:
    g = w.graph
    d, _ = left_divisor_codes(g, normalize(w).codes, g.mask(Y))
    return _nf(g, d)


def greatest_right_divisor(w: Word, Y) -> NormalForm:
    g = w.graph
    d, _ = right_divisor_codes(g, normalize(w).codes, g.mask(Y))
    return _nf(g, d)


def cyclic_decomposition(w: Word) -> tuple:
    """``(u, core)`` with ``w = u^-1 . core . u`` and core cyclically minimal."""
    g = w.graph
    u, core = cyclic_codes(g, w.codes)
    return _nf(g, u), _nf(g, core)


def is_cyclically_minimal(w: Word) -> bool:
    return not cyclic_codes(w.graph, w.codes)[0]


@dataclass(frozen=True)
class BlockDecomposition:
    conjugator: NormalForm
    core: NormalForm
    blocks: tuple

    def reassemble(self) -> NormalForm:
        g = self.core.graph
        inner = [c for b in self.blocks for c in b.codes]
        return NormalForm(g, invert_codes(self.conjugator.codes) + tuple(inner) + self.conjugator.codes)

    def roots(self) -> list:
        return [(_nf(b.graph, r), k) for b in self.blocks for r, k in [_block_root(b.graph, b.codes)]]


def block_decomposition(w: Word) -> BlockDecomposition:
    u, core = cyclic_decomposition(w)
    g = w.graph
    return BlockDecomposition(u, core, tuple(_nf(g, b) for b in block_codes(g, core.codes)))


def root(w: Word) -> tuple:
    """``(r, n)`` with ``w = r^n`` and r not a proper power."""
    r, n = root_codes(w.graph, w.codes)
    return _nf(w.graph, r), n


@dataclass(frozen=True)
class CentralizerBasis:
    roots: tuple
    parabolic: VertexSet

    def generators(self) -> list:
        """Roots followed by the vertices generating the parabolic factor."""
        if not self.roots:
            return []
        g = self.roots[0].graph
        return list(self.roots) + [_nf(g, (2 * g._idx(v) + 1,)) for v in self.parabolic]


def centralizer_basis(w: Word) -> CentralizerBasis:
    """Block roots plus the vertex set Y whose special subgroup completes the centralizer."""
    g = w.graph
    nf = normalize(w)
    if not is_cyclically_minimal(nf):
        raise NotCyclicallyMinimalError(f"{nf} is not cyclically minimal")
    nu = support_mask(nf.codes)
    roots = tuple(_nf(g, _block_root(g, b)[0]) for b in block_codes(g, nf.codes))
    return CentralizerBasis(roots, g.vset(g.perp(nu) & ~nu))


def conjugate_generator_form(w: Word, x: str):
    """If ``w = f^-1 x^e f`` return ``(f, e)`` with f free of left divisors in the star of x."""
    g = w.graph
    i = g._idx(x)
    u, core = cyclic_codes(g, w.codes)
    if len(core) != 1 or core[0] >> 1 != i:
        return None
    _, f = left_divisor_codes(g, u, g.star[i])
    return _nf(g, f), (1 if core[0] & 1 else -1)
