"""Deliberately naive reference implementations used to cross-check the library.

Nothing here imports the bitmask machinery or the word algorithms.  Graphs are
plain ``(vertices, set_of_frozenset_edges)`` pairs, sets are Python sets, and
words are tuples of ``(vertex, sign)`` pairs.  Everything is exponential and
only meant for small inputs.
"""

from __future__ import annotations

from collections import deque
from itertools import combinations, permutations, product
from math import factorial


class PlainGraph:
    def __init__(self, vertices, edges):
        self.vertices = list(vertices)
        self.edges = {frozenset(e) for e in edges}

    @classmethod
    def of(cls, g) -> "PlainGraph":
        return cls(g.vertices, g.edges())

    def adjacent(self, u, v) -> bool:
        return frozenset((u, v)) in self.edges

    def commute(self, u, v) -> bool:
        return u == v or self.adjacent(u, v)

    # -- set operators straight from the definitions --------------------------
    def perp(self, Y) -> set:
        return {u for u in self.vertices if all(self.commute(u, y) for y in Y)}

    def cl(self, Y) -> set:
        return self.perp(self.perp(Y))

    def adm(self, Y) -> set:
        out = set(self.vertices)
        for y in Y:
            out &= self.perp(self.perp({y}) - {y})
        return out

    def all_subsets(self):
        for k in range(len(self.vertices) + 1):
            for c in combinations(self.vertices, k):
                yield set(c)

    def admissible_family(self) -> set:
        return {frozenset(self.adm(Y)) for Y in self.all_subsets()}

    def closed_family(self) -> set:
        return {frozenset(self.perp(Y)) for Y in self.all_subsets()}

    def adm_closure(self, Y) -> set:
        out = set(self.vertices)
        for A in self.admissible_family():
            if set(Y) <= A:
                out &= A
        return out

    def same_class(self, x, y) -> bool:
        return self.perp({x}) - {x, y} == self.perp({y}) - {x, y}

    def classes(self) -> list:
        out = []
        for v in self.vertices:
            for c in out:
                if self.same_class(v, c[0]):
                    c.append(v)
                    break
            else:
                out.append([v])
        return [set(c) for c in out]

    def dominates(self, x, y) -> bool:
        return self.perp({x}) & self.perp({y}) == self.perp({y}) - {y}

    def components(self, removed=()) -> list:
        left = [v for v in self.vertices if v not in set(removed)]
        seen, comps = set(), []
        for v in left:
            if v in seen:
                continue
            comp, todo = {v}, [v]
            while todo:
                u = todo.pop()
                for w in left:
                    if w not in comp and self.adjacent(u, w):
                        comp.add(w)
                        todo.append(w)
            seen |= comp
            comps.append(comp)
        return comps

    def automorphism_count(self) -> int:
        n = 0
        for p in permutations(self.vertices):
            m = dict(zip(self.vertices, p))
            if all(frozenset((m[u], m[v])) in self.edges for u, v in map(tuple, self.edges)):
                n += 1
        return n

    def class_factorial_product(self) -> int:
        out = 1
        for c in self.classes():
            out *= factorial(len(c))
        return out


# ---------------------------------------------------------------------------
# words by exhaustive rewriting
# ---------------------------------------------------------------------------

def _key(g: PlainGraph, w):
    idx = {v: i for i, v in enumerate(g.vertices)}
    return tuple(2 * idx[v] + (1 if s > 0 else 0) for v, s in w)


def equivalence_class(g: PlainGraph, w) -> set:
    """All words reachable by swapping adjacent commuting letters and deleting
    adjacent inverse pairs."""
    start = tuple(w)
    seen = {start}
    todo = deque([start])
    while todo:
        cur = todo.popleft()
        for i in range(len(cur) - 1):
            (a, s), (b, t) = cur[i], cur[i + 1]
            if a == b and s == -t:
                nxt = cur[:i] + cur[i + 2:]
            elif a != b and g.adjacent(a, b):
                nxt = cur[:i] + (cur[i + 1], cur[i]) + cur[i + 2:]
            else:
                continue
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return seen


def geodesics(g: PlainGraph, w) -> set:
    cls = equivalence_class(g, w)
    m = min(len(x) for x in cls)
    return {x for x in cls if len(x) == m}


class WordOracle:
    """Memoised brute-force normal forms; the cache keys are oracle normal forms."""

    def __init__(self, g: PlainGraph):
        self.g = g
        self._ext: dict = {}
        self._divs: dict = {}

    def canonical(self, w) -> tuple:
        return min(geodesics(self.g, w), key=lambda x: _key(self.g, x))

    def nf(self, w) -> tuple:
        cur = ()
        for letter in w:
            k = (cur, letter)
            if k not in self._ext:
                self._ext[k] = self.canonical(cur + (letter,))
            cur = self._ext[k]
        return cur

    def mul(self, *ws) -> tuple:
        return self.nf(tuple(l for w in ws for l in w))

    @staticmethod
    def inv(w) -> tuple:
        return tuple((v, -s) for v, s in reversed(w))

    def left_divisors(self, w) -> set:
        """Normal forms of all left divisors of the element ``w``."""
        w = self.nf(w)
        if w not in self._divs:
            self._divs[w] = {self.nf(x[:k]) for x in geodesics(self.g, w) for k in range(len(x) + 1)}
        return self._divs[w]

    def greatest_left_divisor(self, w, Y) -> tuple:
        divs = [d for d in self.left_divisors(w) if {v for v, _ in d} <= set(Y)]
        best = max(divs, key=len)
        assert all(d in self.left_divisors(best) for d in divs), "no greatest divisor"
        return best

    def ball(self, radius: int) -> set:
        letters = [(v, s) for v in self.g.vertices for s in (1, -1)]
        layer, out = {()}, {()}
        for _ in range(radius):
            nxt = set()
            for w in layer:
                for l in letters:
                    x = self.nf(w + (l,))
                    if x not in out:
                        nxt.add(x)
            out |= nxt
            layer = nxt
        return out

    def min_conjugate_length(self, w, radius: int) -> int:
        return min(len(self.mul(self.inv(c), w, c)) for c in self.ball(radius))


def all_words(letters, max_len: int):
    for k in range(max_len + 1):
        yield from product(letters, repeat=k)


# ---------------------------------------------------------------------------
# cyclic cores, blocks and roots by search
# ---------------------------------------------------------------------------

def is_cyclically_minimal(o: WordOracle, w) -> bool:
    return not any(len(x) >= 2 and x[0] == (x[-1][0], -x[-1][1]) for x in geodesics(o.g, o.nf(w)))


def cyclic_core(o: WordOracle, w) -> tuple:
    """Conjugate reached by cancelling a first and last letter of some geodesic
    representative until none cancels."""
    cur = o.nf(w)
    while True:
        for x in geodesics(o.g, cur):
            if len(x) >= 2 and x[0] == (x[-1][0], -x[-1][1]):
                cur = o.nf(x[1:-1])
                break
        else:
            return cur


def blocks(g: PlainGraph, core) -> list:
    """Vertex sets of the components of the non-commutation graph on the support."""
    supp = {v for v, _ in core}
    comps, seen = [], set()
    for v in sorted(supp, key=g.vertices.index):
        if v in seen:
            continue
        comp, todo = {v}, [v]
        while todo:
            u = todo.pop()
            for w in supp:
                if w not in comp and not g.commute(u, w):
                    comp.add(w)
                    todo.append(w)
        seen |= comp
        comps.append(comp)
    return comps


def root_exponent(o: WordOracle, w) -> int:
    """Largest n with w = r^n for some r, searching r over conjugates of short words."""
    core = cyclic_core(o, w)
    if not core:
        return 1
    letters = sorted({l for l in core} | {(v, -s) for v, s in core})
    for n in range(len(core), 1, -1):
        if len(core) % n:
            continue
        for r in product(letters, repeat=len(core) // n):
            if o.nf(r * n) == core:
                return n
    return 1
