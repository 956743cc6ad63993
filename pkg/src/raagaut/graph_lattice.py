"""Graph-theoretic structure underlying a partially commutative group.

Every vertex subset is handled internally as an integer bitmask, with bit ``i``
standing for the ``i``-th vertex in input order.  The public functions accept
and return :class:`VertexSet` objects, which behave like frozensets of vertex
names but iterate in input order and remember their bitmask.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, Sequence, Union

VERTEX_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")
MAX_ISO_COMPONENT = 12


class GraphError(ValueError):
    """Base class for malformed graphs and bad vertex references."""


class UnknownVertexError(GraphError):
    pass


class GraphParseError(GraphError):
    pass


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class VertexSet(frozenset):
    """A frozenset of vertex names that iterates in the owning graph's order."""

    def __new__(cls, graph: "Graph", mask: int):
        obj = super().__new__(cls, (graph.vertices[i] for i in bits(mask)))
        obj.mask = mask
        obj._names = tuple(graph.vertices[i] for i in bits(mask))
        return obj

    def __iter__(self):
        return iter(self._names)

    def __repr__(self):
        return "{" + ",".join(self._names) + "}"

    __str__ = __repr__

    def names(self) -> tuple:
        return self._names


SetLike = Union[VertexSet, Iterable[str], str, int]


class Graph:
    """Finite simple graph with a fixed vertex order.

    Instances are immutable.  Derived quantities are memoised on first use;
    the memo tables only ever receive values that are pure functions of the
    graph, so sharing a graph between threads is safe.
    """

    def __init__(self, vertices: Sequence[str], edges: Iterable[Sequence[str]] = ()):
        names = tuple(vertices)
        for v in names:
            if not isinstance(v, str) or not VERTEX_NAME.match(v):
                raise GraphError(f"invalid vertex name {v!r}")
        if len(set(names)) != len(names):
            raise GraphError("duplicate vertex names")
        self.vertices = names
        self.index = {v: i for i, v in enumerate(names)}
        n = len(names)
        adj = [0] * n
        for e in edges:
            e = tuple(e)
            if len(e) != 2:
                raise GraphError(f"edge {e!r} must join two vertices")
            u, v = (self._idx(x) for x in e)
            if u == v:
                raise GraphError(f"loop at {e[0]!r} is not allowed")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self.adj = tuple(adj)
        self.star = tuple(a | (1 << i) for i, a in enumerate(adj))
        self.full = (1 << n) - 1
        self._memo: dict = {}

    # -- basic access -----------------------------------------------------
    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return f"Graph({list(self.vertices)!r}, {self.edges()!r})"

    def __eq__(self, other):
        return isinstance(other, Graph) and self.vertices == other.vertices and self.adj == other.adj

    def __hash__(self):
        return hash((self.vertices, self.adj))

    def _idx(self, v: str) -> int:
        try:
            return self.index[v]
        except (KeyError, TypeError):
            raise UnknownVertexError(f"unknown vertex {v!r}") from None

    def edges(self) -> list:
        return [
            (self.vertices[i], self.vertices[j])
            for i in range(len(self))
            for j in bits(self.adj[i])
            if i < j
        ]

    def adjacent(self, u: str, v: str) -> bool:
        return bool(self.adj[self._idx(u)] >> self._idx(v) & 1)

    def mask(self, Y: SetLike) -> int:
        """Bitmask of ``Y``; accepts a VertexSet, a single name, names, or a mask."""
        if isinstance(Y, VertexSet):
            return Y.mask
        if isinstance(Y, int):
            if Y & ~self.full:
                raise UnknownVertexError(f"mask {Y} has bits outside the graph")
            return Y
        if isinstance(Y, str):
            return 1 << self._idx(Y)
        m = 0
        for v in Y:
            m |= 1 << self._idx(v)
        return m

    def vset(self, mask: int) -> VertexSet:
        return VertexSet(self, mask)

    def names(self, mask: int) -> list:
        return [self.vertices[i] for i in bits(mask)]

    # -- mask-level primitives ---------------------------------------------
    def perp(self, mask: int) -> int:
        """Vertices adjacent or equal to every vertex of ``mask``."""
        out = self.full
        for i in bits(mask):
            out &= self.star[i]
        return out

    def cl(self, mask: int) -> int:
        return self.perp(self.perp(mask))

    def adm1(self, i: int) -> int:
        """Admissible set of the single vertex with index ``i``."""
        key = ("adm1", i)
        if key not in self._memo:
            self._memo[key] = self.perp(self.adj[i])
        return self._memo[key]

    def adm(self, mask: int) -> int:
        out = self.full
        for i in bits(mask):
            out &= self.adm1(i)
        return out

    def dominates_idx(self, x: int, y: int) -> bool:
        return self.star[x] & self.star[y] == self.star[y] & ~(1 << y)

    def components_mask(self, removed: int = 0) -> list:
        """Connected components of the graph minus ``removed``, by least vertex."""
        key = ("comps", removed)
        if key in self._memo:
            return self._memo[key]
        left = self.full & ~removed
        comps = []
        while left:
            low = left & -left
            comp, frontier = low, low
            while frontier:
                nxt = 0
                for i in bits(frontier):
                    nxt |= self.adj[i]
                nxt &= left & ~comp
                comp |= nxt
                frontier = nxt
            comps.append(comp)
            left &= ~comp
        self._memo[key] = comps
        return comps

    def perp_components(self, i: int) -> list:
        """Components of the graph with the star of vertex ``i`` removed."""
        return self.components_mask(self.star[i])

    def class_mask(self, i: int) -> int:
        return self._classes()[1][i]

    def _classes(self):
        if "classes" not in self._memo:
            n = len(self)
            reps: list = []
            cls_of = [0] * n
            for x in range(n):
                for r in reps:
                    both = (1 << x) | (1 << r)
                    if self.star[x] & ~both == self.star[r] & ~both:
                        cls_of[x] = r
                        break
                else:
                    reps.append(x)
                    cls_of[x] = x
            masks = {r: 0 for r in reps}
            for x in range(n):
                masks[cls_of[x]] |= 1 << x
            self._memo["classes"] = ([masks[r] for r in reps], [masks[cls_of[x]] for x in range(n)])
        return self._memo["classes"]

    def dom_mask(self, x: int) -> int:
        """Vertices dominated by vertex ``x``."""
        return sum(1 << y for y in range(len(self)) if self.dominates_idx(x, y))

    def dominated_mask(self) -> int:
        key = "dominated"
        if key not in self._memo:
            m = 0
            for y in range(len(self)):
                if any(self.dominates_idx(x, y) for x in range(len(self))):
                    m |= 1 << y
            self._memo[key] = m
        return self._memo[key]

    def out_mask(self, y: int) -> int:
        return self.adm1(y) & ~(self.class_mask(y) | self.star[y])

    def k_maximal_mask(self) -> int:
        key = "kmax"
        if key not in self._memo:
            n = len(self)
            m = 0
            for u in range(n):
                a = self.adm1(u)
                if not any(a != self.adm1(v) and a & ~self.adm1(v) == 0 for v in range(n)):
                    m |= 1 << u
            self._memo[key] = m
        return self._memo[key]

    # -- derived graphs ---------------------------------------------------
    def induced(self, Y: SetLike) -> "Graph":
        keep = self.mask(Y)
        names = self.names(keep)
        return Graph(names, [(u, v) for u, v in self.edges() if keep >> self.index[u] & 1 and keep >> self.index[v] & 1])

    def remove(self, Y: SetLike) -> "Graph":
        return self.induced(self.full & ~self.mask(Y))

    def complement(self) -> "Graph":
        """The non-commutation graph on the same vertex set."""
        n = len(self)
        return Graph(self.vertices, [
            (self.vertices[i], self.vertices[j])
            for i in range(n) for j in range(i + 1, n) if not self.adj[i] >> j & 1
        ])

    def disjoint_union(self, other: "Graph") -> "Graph":
        clash = set(self.vertices) & set(other.vertices)
        if clash:
            raise GraphError(f"vertex names shared by both graphs: {sorted(clash)}")
        return Graph(self.vertices + other.vertices, self.edges() + other.edges())

    # -- serialisation -------------------------------------------------------
    @classmethod
    def parse(cls, text: str) -> "Graph":
        """Parse either the line format or the JSON format."""
        stripped = text.strip()
        if stripped.startswith("{"):
            try:
                data = json.loads(stripped)
                return cls(data["vertices"], data.get("edges", []))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise GraphParseError(f"bad JSON graph: {exc}") from None
        vertices = None
        edges = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, rest = line.partition(":")
            if not sep:
                raise GraphParseError(f"line {lineno}: expected 'vertices:' or 'edge:'")
            key = key.strip()
            parts = rest.split()
            if key == "vertices":
                if vertices is not None:
                    raise GraphParseError(f"line {lineno}: repeated vertices line")
                vertices = parts
            elif key == "edge":
                if len(parts) != 2:
                    raise GraphParseError(f"line {lineno}: an edge needs two vertices")
                edges.append(parts)
            else:
                raise GraphParseError(f"line {lineno}: unknown key {key!r}")
        if vertices is None:
            if edges:
                raise GraphParseError("missing 'vertices:' line")
            vertices = []
        return cls(vertices, edges)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "Graph":
        return cls.parse(Path(path).read_text())

    def to_text(self) -> str:
        lines = ["vertices: " + " ".join(self.vertices)]
        lines += [f"edge: {u} {v}" for u, v in self.edges()]
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps({"vertices": list(self.vertices), "edges": [list(e) for e in self.edges()]})

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {name} {{"]
        lines += [f'  "{v}";' for v in self.vertices]
        lines += [f'  "{u}" -- "{v}";' for u, v in self.edges()]
        lines.append("}")
        return "\n".join(lines) + "\n"


def fixture_names() -> list:
    """Names of the graphs bundled with the package."""
    root = resources.files("raagaut") / "fixtures"
    return sorted(p.name[:-6] for p in root.iterdir() if p.name.endswith(".graph"))


def load_fixture(name: str) -> Graph:
    res = resources.files("raagaut") / "fixtures" / f"{name}.graph"
    if not res.is_file():
        raise GraphError(f"no bundled graph named {name!r}")
    return Graph.parse(res.read_text())


# ---------------------------------------------------------------------------
# closure operators
# ---------------------------------------------------------------------------

def orthogonal_complement(g: Graph, Y: SetLike) -> VertexSet:
    """Vertices adjacent or equal to every member of ``Y``; all of X for empty ``Y``."""
    return g.vset(g.perp(g.mask(Y)))


def closure(g: Graph, Y: SetLike) -> VertexSet:
    return g.vset(g.cl(g.mask(Y)))


def admissible_set(g: Graph, Y: SetLike) -> VertexSet:
    """Intersection over y in Y of the complement of (y's neighbourhood)."""
    return g.vset(g.adm(g.mask(Y)))


def admissible_closure(g: Graph, Y: SetLike) -> VertexSet:
    """Smallest admissible set containing ``Y``."""
    m = g.mask(Y)
    out = g.full
    for i in range(len(g)):
        a = g.adm1(i)
        if m & ~a == 0:
            out &= a
    return g.vset(out)


# ---------------------------------------------------------------------------
# lattices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VertexSetLattice:
    kind: str
    graph: Graph
    elements: tuple
    hasse: tuple  # pairs (lower index, upper index)

    @property
    def top(self) -> VertexSet:
        return max(self.elements, key=len)

    @property
    def bottom(self) -> VertexSet:
        return min(self.elements, key=len)

    def __contains__(self, Y) -> bool:
        m = self.graph.mask(Y)
        return any(e.mask == m for e in self.elements)

    def __len__(self):
        return len(self.elements)

    def to_dot(self) -> str:
        lines = [f"digraph {self.kind} {{", "  rankdir=BT;"]
        for i, e in enumerate(self.elements):
            lines.append(f'  n{i} [label="{e!r}"];')
        for lo, hi in self.hasse:
            lines.append(f"  n{lo} -> n{hi};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _intersection_closure(generators: Iterable[int]) -> list:
    found = set(generators)
    frontier = set(found)
    while frontier:
        new = {a & b for a in frontier for b in found} - found
        found |= new
        frontier = new
    return list(found)


def enumerate_lattice(g: Graph, kind: str = "K") -> VertexSetLattice:
    """Intersection closure of the per-vertex admissible sets (``K``) or stars (``L``)."""
    kind = kind.upper()
    if kind == "K":
        gens = [g.adm1(i) for i in range(len(g))]
    elif kind == "L":
        gens = list(g.star)
    else:
        raise ValueError("lattice kind must be 'K' or 'L'")
    masks = _intersection_closure(gens + [g.full])
    masks.sort(key=lambda m: (popcount(m), [-i for i in bits(m)]))
    elements = tuple(g.vset(m) for m in masks)
    hasse = []
    for i, lo in enumerate(masks):
        above = [j for j, hi in enumerate(masks) if j != i and lo & ~hi == 0]
        for j in above:
            if not any(k != j and masks[k] & ~masks[j] == 0 for k in above):
                hasse.append((i, j))
    return VertexSetLattice(kind, g, elements, tuple(hasse))


# ---------------------------------------------------------------------------
# classes, heights, total order
# ---------------------------------------------------------------------------

SINGLETON, PERP, DIAMOND = "singleton", "perp", "diamond"


@dataclass(frozen=True)
class VertexClassification:
    graph: Graph
    classes: tuple
    tags: tuple
    heights: dict
    b_sets: tuple

    def class_of(self, x: str) -> VertexSet:
        i = self.graph._idx(x)
        return next(c for c in self.classes if c.mask >> i & 1)

    def tag_of(self, x: str) -> str:
        c = self.class_of(x)
        return self.tags[self.classes.index(c)]


def _class_tag(g: Graph, cmask: int) -> str:
    members = list(bits(cmask))
    if len(members) == 1:
        return SINGLETON
    x, y = members[0], members[1]
    return PERP if g.adj[x] >> y & 1 else DIAMOND


def _b_sets(g: Graph) -> list:
    kx = sorted({g.adm1(i) for i in range(len(g))}, key=lambda m: min(bits(m)) if m else -1)
    used: set = set()
    levels = []
    while len(used) < len(kx):
        level = [
            Y for Y in kx
            if Y not in used and all(Z in used for Z in kx if Z != Y and Z & ~Y == 0)
        ]
        levels.append(level)
        used.update(level)
    return levels


def vertex_classification(g: Graph) -> VertexClassification:
    class_masks, _ = g._classes()
    levels = _b_sets(g)
    heights = {}
    for h, level in enumerate(levels):
        for i in range(len(g)):
            if g.adm1(i) in level:
                heights[g.vertices[i]] = h
    return VertexClassification(
        graph=g,
        classes=tuple(g.vset(c) for c in class_masks),
        tags=tuple(_class_tag(g, c) for c in class_masks),
        heights=heights,
        b_sets=tuple(tuple(g.vset(m) for m in level) for level in levels),
    )


def total_order(g: Graph, tie_breaks: Sequence[str] | None = None) -> list:
    """Vertices listed from least to greatest in the lattice-compatible order.

    ``tie_breaks`` is a priority list of vertex names (default: input order).
    Height levels are filled in turn; inside a level, classes come by their
    best-ranked member and members of a class by rank.  The list built that
    way runs from greatest to least, so it is reversed on return.
    """
    if tie_breaks is None:
        rank = {v: i for i, v in enumerate(g.vertices)}
    else:
        tie_breaks = list(tie_breaks)
        if sorted(tie_breaks) != sorted(g.vertices):
            raise GraphError("tie-break list must be a permutation of the vertices")
        rank = {v: i for i, v in enumerate(tie_breaks)}
    class_masks, cls_of = g._classes()
    descending: list = []
    for level in _b_sets(g):
        classes = {cls_of[i] for i in range(len(g)) if g.adm1(i) in level}
        ordered = sorted(classes, key=lambda c: min(rank[v] for v in g.names(c)))
        for c in ordered:
            descending.extend(sorted(g.names(c), key=rank.__getitem__))
    return descending[::-1]


# ---------------------------------------------------------------------------
# compression
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CompressionGraph:
    graph: Graph
    classes: tuple
    labels: tuple   # ("1", 1), ("perp", d) or ("diamond", d)
    edges: tuple    # pairs (i, j) with i <= j; i == j is a loop

    def adjacent(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def to_dot(self) -> str:
        sym = {"1": "1", PERP: "⊥", DIAMOND: "◊"}
        lines = ["graph compression {"]
        for i, (c, (kind, d)) in enumerate(zip(self.classes, self.labels)):
            lines.append(f'  n{i} [label="{c!r}", kind="{sym[kind]}", arity={d}];')
        lines += [f"  n{i} -- n{j};" for i, j in self.edges]
        lines.append("}")
        return "\n".join(lines) + "\n"


def compression_graph(g: Graph) -> CompressionGraph:
    class_masks, _ = g._classes()
    labels = []
    for c in class_masks:
        tag = _class_tag(g, c)
        labels.append(("1", 1) if tag == SINGLETON else (tag, popcount(c)))
    edges = []
    for i, ci in enumerate(class_masks):
        rep = min(bits(ci))
        for j in range(i, len(class_masks)):
            if g.adj[rep] & class_masks[j]:
                edges.append((i, j))
    return CompressionGraph(g, tuple(g.vset(c) for c in class_masks), tuple(labels), tuple(edges))


# ---------------------------------------------------------------------------
# domination and balance
# ---------------------------------------------------------------------------

def dominates(g: Graph, x: str, y: str) -> bool:
    return g.dominates_idx(g._idx(x), g._idx(y))


def dom_set(g: Graph, x: str) -> VertexSet:
    return g.vset(g.dom_mask(g._idx(x)))


def dominated_vertices(g: Graph) -> VertexSet:
    return g.vset(g.dominated_mask())


def out_set(g: Graph, y: str) -> VertexSet:
    return g.vset(g.out_mask(g._idx(y)))


@dataclass(frozen=True)
class BalanceWitness:
    vertex: str
    a: str
    b: str
    components: tuple


@dataclass(frozen=True)
class BalanceResult:
    balanced: bool
    witness: BalanceWitness | None = None

    def __bool__(self):
        return self.balanced


def balance_witness_masks(g: Graph):
    """Index-level witness ``(v, a, b, component masks)`` or None if balanced."""
    for v in bits(g.dominated_mask()):
        out = g.out_mask(v)
        if not out:
            continue
        comps = g.perp_components(v)
        hit = [c for c in comps if c & out]
        if len(hit) > 1:
            def key(i):
                return (popcount(g.adm1(i)), i)
            a = min(bits(out & hit[0]), key=key)
            b = min(bits(out & hit[1]), key=key)
            return v, a, b, comps
    return None


def is_balanced(g: Graph) -> BalanceResult:
    w = balance_witness_masks(g)
    if w is None:
        return BalanceResult(True)
    v, a, b, comps = w
    return BalanceResult(False, BalanceWitness(
        g.vertices[v], g.vertices[a], g.vertices[b], tuple(g.vset(c) for c in comps)))


# ---------------------------------------------------------------------------
# conjugation closures
# ---------------------------------------------------------------------------

def j_step_mask(g: Graph, x: int, Y: int) -> int:
    out = Y
    for c in g.perp_components(x):
        if c & Y:
            out |= c
    return out


def k_step_mask(g: Graph, x: int, Y: int) -> int:
    outside = Y & ~g.star[x]
    out = Y
    for v in range(len(g)):
        a = g.adm1(v)
        if a & outside:
            out |= a
    return out


def h_closure_mask(g: Graph, x: int, Y: int) -> int:
    key = ("H", x, Y)
    if key in g._memo:
        return g._memo[key]
    cur = Y
    while True:
        nxt = k_step_mask(g, x, j_step_mask(g, x, cur))
        if nxt == cur:
            break
        cur = nxt
    g._memo[key] = cur
    return cur


def j_step(g: Graph, x: str, Y: SetLike) -> VertexSet:
    return g.vset(j_step_mask(g, g._idx(x), g.mask(Y)))


def k_step(g: Graph, x: str, Y: SetLike) -> VertexSet:
    return g.vset(k_step_mask(g, g._idx(x), g.mask(Y)))


def h_closure(g: Graph, x: str, Y: SetLike) -> VertexSet:
    return g.vset(h_closure_mask(g, g._idx(x), g.mask(Y)))


def sol_masks(g: Graph, x: int) -> tuple:
    allowed = g.dom_mask(x) | g.star[x]
    sol0 = sum(1 << u for u in range(len(g)) if h_closure_mask(g, x, 1 << u) & ~allowed == 0)
    sol = sol0 & g.k_maximal_mask() & ~g.star[x]
    return sol0, sol


def sol_sets(g: Graph, x: str) -> tuple:
    sol0, sol = sol_masks(g, g._idx(x))
    return g.vset(sol0), g.vset(sol)


# ---------------------------------------------------------------------------
# components, isomorphism types, automorphisms
# ---------------------------------------------------------------------------

def components(g: Graph, removed: SetLike = ()) -> list:
    return [g.vset(c) for c in g.components_mask(g.mask(removed))]


def _isomorphisms(g: Graph, src: list, h: Graph, dst: list, limit: int | None = None) -> list:
    """All adjacency-preserving bijections from vertex indices ``src`` of ``g``
    onto ``dst`` of ``h``, found by backtracking with degree pruning."""
    if len(src) != len(dst):
        return []
    smask = sum(1 << i for i in src)
    dmask = sum(1 << i for i in dst)
    sdeg = {i: popcount(g.adj[i] & smask) for i in src}
    ddeg = {i: popcount(h.adj[i] & dmask) for i in dst}
    if sorted(sdeg.values()) != sorted(ddeg.values()):
        return []
    order = sorted(src, key=lambda i: -sdeg[i])
    found: list = []
    image: dict = {}
    used = 0

    def extend(k):
        nonlocal used
        if limit is not None and len(found) >= limit:
            return
        if k == len(order):
            found.append(dict(image))
            return
        u = order[k]
        for w in dst:
            if used >> w & 1 or ddeg[w] != sdeg[u]:
                continue
            if all((g.adj[u] >> p & 1) == (h.adj[w] >> q & 1) for p, q in image.items()):
                image[u] = w
                used |= 1 << w
                extend(k + 1)
                used &= ~(1 << w)
                del image[u]

    extend(0)
    return found


@dataclass(frozen=True)
class ComponentGroup:
    representative: VertexSet
    members: tuple          # component VertexSets, first is the representative
    isomorphisms: tuple     # per member: dict representative name -> member name

    @property
    def multiplicity(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class IsomorphismType:
    graph: Graph
    isolated: VertexSet
    groups: tuple

    @property
    def isolated_count(self) -> int:
        return len(self.isolated)

    def non_isolated_components(self) -> list:
        return [c for grp in self.groups for c in grp.members]


def isomorphism_type(g: Graph) -> IsomorphismType:
    comps = g.components_mask()
    isolated = sum(c for c in comps if popcount(c) == 1)
    groups: list = []
    for c in comps:
        if popcount(c) == 1:
            continue
        if popcount(c) > MAX_ISO_COMPONENT:
            raise GraphError(f"component of size {popcount(c)} exceeds the isomorphism limit {MAX_ISO_COMPONENT}")
        for grp in groups:
            iso = _isomorphisms(g, list(bits(grp[0])), g, list(bits(c)), limit=1)
            if iso:
                grp[1].append(c)
                grp[2].append(iso[0])
                break
        else:
            rep = c
            groups.append([rep, [c], [{i: i for i in bits(c)}]])
    out = []
    for rep, members, isos in groups:
        out.append(ComponentGroup(
            g.vset(rep),
            tuple(g.vset(m) for m in members),
            tuple({g.vertices[a]: g.vertices[b] for a, b in iso.items()} for iso in isos),
        ))
    return IsomorphismType(g, g.vset(isolated), tuple(out))


@dataclass(frozen=True)
class GraphAutomorphism:
    graph: Graph
    perm: tuple  # perm[i] = index of the image of vertex i

    def __call__(self, v: str) -> str:
        return self.graph.vertices[self.perm[self.graph._idx(v)]]

    def mapping(self) -> dict:
        return {self.graph.vertices[i]: self.graph.vertices[j] for i, j in enumerate(self.perm)}

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.perm))

    def cycles(self) -> list:
        seen, out = set(), []
        for i in range(len(self.perm)):
            if i in seen or self.perm[i] == i:
                continue
            cyc, j = [], i
            while j not in seen:
                seen.add(j)
                cyc.append(self.graph.vertices[j])
                j = self.perm[j]
            out.append(tuple(cyc))
        return out


def graph_automorphisms(g: Graph) -> list:
    idx = list(range(len(g)))
    maps = _isomorphisms(g, idx, g, idx)
    autos = [GraphAutomorphism(g, tuple(m[i] for i in idx)) for m in maps]
    autos.sort(key=lambda a: a.perm)
    return autos


def compressed_automorphisms(g: Graph) -> list:
    """Lifts of label-preserving automorphisms of the compression graph.

    A lift sends the k-th member of a class (input order) to the k-th member
    of the image class.
    """
    comp = compression_graph(g)
    k = len(comp.classes)
    members = [list(bits(c.mask)) for c in comp.classes]
    out = []
    for perm in _label_preserving_perms(comp):
        image = [0] * len(g)
        for i in range(k):
            for a, b in zip(members[i], members[perm[i]]):
                image[a] = b
        out.append(GraphAutomorphism(g, tuple(image)))
    out.sort(key=lambda a: a.perm)
    return out


def _label_preserving_perms(comp: CompressionGraph) -> list:
    k = len(comp.classes)
    loops = [comp.adjacent(i, i) for i in range(k)]
    found: list = []
    image: list = [None] * k
    used: set = set()

    def extend(i):
        if i == k:
            found.append(tuple(image))
            return
        for j in range(k):
            if j in used or comp.labels[j] != comp.labels[i] or loops[j] != loops[i]:
                continue
            if all(comp.adjacent(p, i) == comp.adjacent(image[p], j) for p in range(i)):
                image[i] = j
                used.add(j)
                extend(i + 1)
                used.discard(j)
                image[i] = None

    extend(0)
    return found


def compose_perms(p: Sequence[int], q: Sequence[int]) -> tuple:
    """Apply ``p`` first, then ``q``."""
    return tuple(q[p[i]] for i in range(len(p)))

