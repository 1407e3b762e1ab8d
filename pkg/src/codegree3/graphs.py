"""Small 3-uniform hypergraphs on vertex set 1..n.

Graphs are immutable.  Edges are stored as sorted triples.  The string
grammar is ``<n>:<e1><e2>...`` for n <= 9 (edges written as three digits in
ascending order, sorted), with an optional ``(<t>)`` suffix for rooted
graphs.  Larger graphs use ``g{n=<int>; edges=[i,j,k;...]}``.

A graph on n vertices also has an integer *mask*: triple number ``i`` in the
lexicographic list of all triples of [n] carries bit ``M - 1 - i`` where
``M = C(n, 3)``.  With this weighting a larger mask means a
lexicographically smaller sorted edge list (for equal edge counts), so the
canonical form is the relabelling with the largest mask.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import CapabilityError, PreconditionError

Edge = tuple[int, int, int]

CANONICAL_MAX_ORDER = 12
# Above this order the full permutation table no longer fits in 64-bit masks.
_TABLE_MAX_ORDER = 8


@lru_cache(maxsize=None)
def triples(n: int) -> tuple[Edge, ...]:
    return tuple(itertools.combinations(range(1, n + 1), 3))


@lru_cache(maxsize=None)
def triple_index(n: int) -> dict[Edge, int]:
    return {e: i for i, e in enumerate(triples(n))}


@lru_cache(maxsize=None)
def pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(itertools.combinations(range(1, n + 1), 2))


def edge_bit(n: int, e: Edge) -> int:
    return 1 << (len(triples(n)) - 1 - triple_index(n)[e])


def _norm_edge(e, n=None) -> Edge:
    t = tuple(sorted(int(v) for v in e))
    if len(t) != 3 or len(set(t)) != 3:
        raise PreconditionError(f"edge {tuple(e)!r} does not have 3 distinct vertices")
    if n is not None and (t[0] < 1 or t[2] > n):
        raise PreconditionError(f"edge {t} has a vertex outside 1..{n}")
    return t


@dataclass(frozen=True)
class ThreeGraph:
    order: int
    edges: frozenset

    def __init__(self, order: int, edges: Iterable = ()):
        if order < 0:
            raise PreconditionError("order must be nonnegative")
        norm = [_norm_edge(e, order) for e in edges]
        fs = frozenset(norm)
        if len(fs) != len(norm):
            raise PreconditionError("duplicate edge")
        object.__setattr__(self, "order", int(order))
        object.__setattr__(self, "edges", fs)

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "ThreeGraph":
        tr = triples(n)
        m = len(tr)
        return cls(n, [tr[i] for i in range(m) if mask >> (m - 1 - i) & 1])

    @cached_property
    def sorted_edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.edges))

    @cached_property
    def mask(self) -> int:
        return sum(edge_bit(self.order, e) for e in self.edges)

    @property
    def size(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(1, self.order + 1)

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def degrees(self) -> list[int]:
        d = [0] * (self.order + 1)
        for e in self.edges:
            for v in e:
                d[v] += 1
        return d[1:]

    def has_edge(self, x: int, y: int, z: int) -> bool:
        return tuple(sorted((x, y, z))) in self.edges

    def encode(self) -> str:
        return encode(self)

    def __str__(self) -> str:
        return encode(self)

    def __repr__(self) -> str:
        return f"ThreeGraph({encode(self)!r})"


@dataclass(frozen=True)
class RootedGraph:
    """A flag: vertices 1..t are the ordered roots."""

    graph: ThreeGraph
    root_count: int

    def __post_init__(self):
        if not 0 <= self.root_count <= self.graph.order:
            raise PreconditionError("root count out of range")

    @property
    def order(self) -> int:
        return self.graph.order

    @property
    def type_graph(self) -> ThreeGraph:
        """The induced subgraph on the roots."""
        return induced_subgraph(self.graph, range(1, self.root_count + 1))

    def encode(self) -> str:
        return f"{encode(self.graph)}({self.root_count})"

    def __str__(self) -> str:
        return self.encode()

    def __repr__(self) -> str:
        return f"RootedGraph({self.encode()!r})"


def encode(g: ThreeGraph) -> str:
    if g.order <= 9:
        return f"{g.order}:" + "".join(f"{a}{b}{c}" for a, b, c in g.sorted_edges)
    body = ";".join(f"{a},{b},{c}" for a, b, c in g.sorted_edges)
    return f"g{{n={g.order}; edges=[{body}]}}"


_SHORT = re.compile(r"^(\d):(\d*)(?:\((\d+)\))?$")
_LONG = re.compile(r"^g\{n=(\d+);\s*edges=\[([\d,;\s]*)\]\}(?:\((\d+)\))?$")


def _parse(s: str):
    s = s.strip()
    m = _SHORT.match(s)
    if m:
        n = int(m.group(1))
        digits = m.group(2)
        if len(digits) % 3:
            raise PreconditionError(f"bad edge list in {s!r}")
        edges = [tuple(int(ch) for ch in digits[i:i + 3]) for i in range(0, len(digits), 3)]
        return ThreeGraph(n, edges), m.group(3)
    m = _LONG.match(s)
    if m:
        n = int(m.group(1))
        body = m.group(2).strip()
        edges = []
        if body:
            for part in body.split(";"):
                edges.append(tuple(int(x) for x in part.split(",")))
        return ThreeGraph(n, edges), m.group(3)
    raise PreconditionError(f"cannot parse graph string {s!r}")


def parse_graph(s: str) -> ThreeGraph:
    g, t = _parse(s)
    if t is not None:
        raise PreconditionError(f"{s!r} is rooted; expected an unrooted graph")
    return g


def parse_flag(s: str) -> RootedGraph:
    g, t = _parse(s)
    if t is None:
        raise PreconditionError(f"{s!r} has no root count suffix")
    return RootedGraph(g, int(t))


def parse_any(s: str):
    g, t = _parse(s)
    return g if t is None else RootedGraph(g, int(t))


# --- relabelling -----------------------------------------------------------

def relabel(g: ThreeGraph, mapping: Sequence[int] | dict) -> ThreeGraph:
    """Apply ``v -> mapping[v]`` (dict) or ``v -> mapping[v - 1]`` (sequence)."""
    if isinstance(mapping, dict):
        f = mapping.__getitem__
    else:
        f = lambda v: mapping[v - 1]  # noqa: E731
    return ThreeGraph(g.order, [(f(a), f(b), f(c)) for a, b, c in g.edges])


def induced_subgraph(g: ThreeGraph, vertices: Iterable[int]) -> ThreeGraph:
    """Subgraph induced on ``vertices``; the i-th listed vertex becomes i+1."""
    vs = list(vertices)
    pos = {v: i + 1 for i, v in enumerate(vs)}
    edges = [(pos[a], pos[b], pos[c]) for a, b, c in g.edges
             if a in pos and b in pos and c in pos]
    return ThreeGraph(len(vs), edges)


def induced_mask(g: ThreeGraph, vertices: Sequence[int]) -> int:
    """Mask (in the order-len(vertices) weighting) of the induced labelled subgraph."""
    k = len(vertices)
    m = len(triples(k))
    out = 0
    for i, (a, b, c) in enumerate(triples(k)):
        if tuple(sorted((vertices[a - 1], vertices[b - 1], vertices[c - 1]))) in g.edges:
            out |= 1 << (m - 1 - i)
    return out


# --- canonical forms -------------------------------------------------------

@lru_cache(maxsize=None)
def _perm_table(n: int, t: int):
    """Permutations fixing 0..t-1 and, for each, the image index of every triple."""
    base = tuple(range(t))
    perms = np.array([base + p for p in itertools.permutations(range(t, n))],
                     dtype=np.int64).reshape(-1, n)
    tr = np.array(triples(n), dtype=np.int64).reshape(-1, 3) - 1
    if len(tr) == 0:
        return perms, np.zeros((len(perms), 0), dtype=np.int64), np.zeros(0, dtype=np.uint64)
    img = np.sort(perms[:, tr], axis=2)
    code = img[..., 0] * n * n + img[..., 1] * n + img[..., 2]
    lookup = np.full(n ** 3, -1, dtype=np.int64)
    for i, (a, b, c) in enumerate(tr):
        lookup[a * n * n + b * n + c] = i
    idx = lookup[code]
    m = len(tr)
    weights = np.array([1 << (m - 1 - i) for i in range(m)], dtype=np.uint64)
    return perms, idx, weights


def _table_canon(n: int, t: int, mask: int) -> tuple[int, tuple[int, ...]]:
    perms, idx, weights = _perm_table(n, t)
    m = idx.shape[1]
    on = [i for i in range(m) if mask >> (m - 1 - i) & 1]
    if not on:
        return 0, tuple(range(n))
    vals = weights[idx[:, on]].sum(axis=1)
    best = int(np.argmax(vals))
    return int(vals[best]), tuple(int(x) for x in perms[best])


def _search_canon(n: int, t: int, edges: frozenset) -> tuple[int, tuple[int, ...]]:
    """Branch and bound over labellings; vertices 0..t-1 keep their labels.

    Labels are handed out in increasing order.  The bound at a node is the
    largest mask any completion could reach, computed triple by triple in
    significance order; a node is cut when it cannot beat the incumbent.
    """
    adj = {tuple(sorted((a - 1, b - 1, c - 1))) for a, b, c in edges}
    tr = triples(n)
    m = len(tr)
    best = [-1, None]

    def has(x, y, z):
        return tuple(sorted((x, y, z))) in adj

    def bound(assigned):
        # Within a block of consecutive triples sharing their assigned part,
        # the number of edges is fixed by the vertex sets alone; putting
        # those ones first gives the bound.
        k = len(assigned)
        unassigned = [v for v in range(n) if v not in set(assigned)]
        val = 0
        pos = m - 1
        block_key = None
        ones_left = 0
        for a, b, c in tr:
            a -= 1
            b -= 1
            c -= 1
            if c < k:
                bit = has(assigned[a], assigned[b], assigned[c])
            else:
                if b < k:
                    key = (a, b)
                elif a < k:
                    key = (a,)
                else:
                    key = ()
                if block_key != key:
                    block_key = key
                    fixed = [assigned[i] for i in key]
                    free = 3 - len(fixed)
                    ones_left = sum(1 for rest in itertools.combinations(unassigned, free)
                                    if tuple(sorted((*fixed, *rest))) in adj)
                bit = ones_left > 0
                ones_left -= bit
            if bit:
                val |= 1 << pos
            pos -= 1
        return val

    # Twin vertices (swapping them is an automorphism) give isomorphic
    # subtrees, so only the first unassigned member of each class is tried.
    twin_rep = list(range(n))
    for u in range(n):
        if twin_rep[u] != u:
            continue
        for v in range(u + 1, n):
            if twin_rep[v] == v and all(
                    has(u, w, x) == has(v, w, x)
                    for w, x in itertools.combinations([y for y in range(n) if y not in (u, v)], 2)):
                twin_rep[v] = u

    def rec(assigned):
        if len(assigned) == n:
            val = bound(assigned)
            if val > best[0]:
                best[0] = val
                best[1] = tuple(assigned)
            return
        used = set(assigned)
        children = []
        tried = set()
        for v in range(n):
            if v in used or twin_rep[v] in tried:
                continue
            tried.add(twin_rep[v])
            nxt = assigned + [v]
            children.append((bound(nxt), nxt))
        children.sort(key=lambda x: -x[0])
        for b, nxt in children:
            if b > best[0]:
                rec(nxt)

    rec(list(range(t)))
    order = best[1]
    # order[label] = vertex; convert to vertex -> label
    perm = [0] * n
    for label, v in enumerate(order):
        perm[v] = label
    return best[0], tuple(perm)


@lru_cache(maxsize=1 << 16)
def _canon_cached(n: int, t: int, mask: int):
    if n < 3:
        return 0, tuple(range(n))
    if n <= _TABLE_MAX_ORDER:
        return _table_canon(n, t, mask)
    g = ThreeGraph.from_mask(n, mask)
    return _search_canon(n, t, g.edges)


def canonical_labelling(g: ThreeGraph, fixed: int = 0) -> tuple[int, ...]:
    """0-based permutation ``p`` (vertex v gets label ``p[v-1] + 1``) achieving the canonical form."""
    if g.order > CANONICAL_MAX_ORDER:
        raise CapabilityError(f"canonical form supported only up to order {CANONICAL_MAX_ORDER}")
    return _canon_cached(g.order, fixed, g.mask)[1]


def canonical_mask(n: int, mask: int, fixed: int = 0) -> int:
    if n > CANONICAL_MAX_ORDER:
        raise CapabilityError(f"canonical form supported only up to order {CANONICAL_MAX_ORDER}")
    return _canon_cached(n, fixed, mask)[0]


def canonical_form(g: ThreeGraph) -> ThreeGraph:
    """Relabelling of ``g`` with the lexicographically least sorted edge list."""
    return ThreeGraph.from_mask(g.order, canonical_mask(g.order, g.mask))


def rooted_canonical_form(f: RootedGraph) -> RootedGraph:
    """Least relabelling of ``f`` among those fixing each root."""
    g = f.graph
    return RootedGraph(ThreeGraph.from_mask(g.order, canonical_mask(g.order, g.mask, f.root_count)),
                       f.root_count)


def is_isomorphic(g: ThreeGraph, h: ThreeGraph) -> bool:
    return (g.order == h.order and g.size == h.size
            and canonical_mask(g.order, g.mask) == canonical_mask(h.order, h.mask))


def find_isomorphism(g: ThreeGraph, h: ThreeGraph) -> tuple[int, ...] | None:
    """A mapping ``p`` (1-based, ``p[v-1]``) with ``relabel(g, p) == h``, or None."""
    if not is_isomorphic(g, h):
        return None
    pg = canonical_labelling(g)
    ph = canonical_labelling(h)
    inv_h = [0] * h.order
    for v, lab in enumerate(ph):
        inv_h[lab] = v
    return tuple(inv_h[pg[v]] + 1 for v in range(g.order))


# --- containment -----------------------------------------------------------

def contains(g: ThreeGraph, h: ThreeGraph) -> bool:
    """Non-induced containment: an injection V(h) -> V(g) carrying edges to edges."""
    if h.order > g.order or h.size > g.size:
        return False
    if not h.edges:
        return True
    hdeg = h.degrees()
    gdeg = g.degrees()
    active = [v for v in h.vertices() if hdeg[v - 1] > 0]
    # descending degree, then prefer vertices closing many edges early
    order: list[int] = []
    rest = sorted(active, key=lambda v: -hdeg[v - 1])
    while rest:
        placed = set(order)
        rest.sort(key=lambda v: (-sum(1 for e in h.edges if v in e and
                                      sum(1 for u in e if u in placed) == 2),
                                 -hdeg[v - 1]))
        order.append(rest.pop(0))
    position = {v: i for i, v in enumerate(order)}
    closing: list[list[tuple[int, int]]] = [[] for _ in order]
    for e in h.edges:
        last = max(e, key=position.__getitem__)
        others = tuple(position[u] for u in e if u != last)
        closing[position[last]].append(others)
    edges = g.edges
    image: list[int] = []
    used = set()

    def rec(i):
        if i == len(order):
            return True
        need = hdeg[order[i] - 1]
        for x in g.vertices():
            if x in used or gdeg[x - 1] < need:
                continue
            ok = True
            for p, q in closing[i]:
                if tuple(sorted((image[p], image[q], x))) not in edges:
                    ok = False
                    break
            if not ok:
                continue
            image.append(x)
            used.add(x)
            if rec(i + 1):
                return True
            image.pop()
            used.discard(x)
        return False

    return rec(0)


@lru_cache(maxsize=None)
def _embedding_masks_cached(h: ThreeGraph, n: int) -> tuple[int, ...]:
    seen = set()
    tr_bit = {e: edge_bit(n, e) for e in triples(n)}
    for inj in itertools.permutations(range(1, n + 1), h.order):
        mk = 0
        for a, b, c in h.edges:
            mk |= tr_bit[tuple(sorted((inj[a - 1], inj[b - 1], inj[c - 1])))]
        seen.add(mk)
    return tuple(sorted(seen))


def embedding_masks(h: ThreeGraph, n: int) -> tuple[int, ...]:
    """Masks (order-n weighting) of every labelled copy of ``h`` inside [n]."""
    if h.order > n:
        return ()
    return _embedding_masks_cached(h, n)


# --- degrees and neighbourhoods --------------------------------------------

def joint_neighbourhood(g: ThreeGraph, x: int, y: int) -> frozenset:
    if x == y:
        raise PreconditionError("joint neighbourhood needs two distinct vertices")
    return frozenset(z for e in g.edges if x in e and y in e for z in e if z != x and z != y)


def codegrees(g: ThreeGraph) -> dict[tuple[int, int], int]:
    d = {p: 0 for p in pairs(g.order)}
    for a, b, c in g.edges:
        d[(a, b)] += 1
        d[(a, c)] += 1
        d[(b, c)] += 1
    return d


def codegree(g: ThreeGraph, x: int, y: int) -> int:
    return len(joint_neighbourhood(g, x, y))


def min_codegree(g: ThreeGraph) -> int:
    if g.order < 2:
        raise PreconditionError("minimum codegree needs at least 2 vertices")
    return min(codegrees(g).values())


def _adjacency(g: ThreeGraph) -> np.ndarray:
    n = g.order
    a = np.zeros((n, n, n), dtype=bool)
    for x, y, z in g.edges:
        for p in itertools.permutations((x - 1, y - 1, z - 1)):
            a[p] = True
    return a


def has_independent_neighbourhoods(g: ThreeGraph) -> bool:
    """True iff no joint neighbourhood spans an edge."""
    a = _adjacency(g)
    n = g.order
    for x in range(n):
        for y in range(x + 1, n):
            nb = np.flatnonzero(a[x, y])
            if len(nb) >= 3 and a[np.ix_(nb, nb, nb)].any():
                return False
    return True


F32 = ThreeGraph(5, [(1, 2, 3), (1, 2, 4), (1, 2, 5), (3, 4, 5)])


def is_f32_free(g: ThreeGraph, method: str = "neighbourhood") -> bool:
    if method == "neighbourhood":
        return has_independent_neighbourhoods(g)
    if method == "containment":
        return not contains(g, F32)
    raise PreconditionError(f"unknown method {method!r}")


def blow_up(f: ThreeGraph, t: int) -> ThreeGraph:
    """Replace each vertex v by the block (v-1)t+1 .. vt; edges become complete tripartite."""
    if t < 1:
        raise PreconditionError("blow-up factor must be positive")

    def block(v):
        return range((v - 1) * t + 1, v * t + 1)

    edges = [e for a, b, c in f.edges for e in itertools.product(block(a), block(b), block(c))]
    return ThreeGraph(f.order * t, edges)


def complete(n: int) -> ThreeGraph:
    return ThreeGraph(n, triples(n))


def empty(n: int) -> ThreeGraph:
    return ThreeGraph(n)


# --- named graphs ----------------------------------------------------------

K4 = complete(4)
K4MINUS = ThreeGraph(4, [(1, 2, 3), (1, 2, 4), (1, 3, 4)])
K3 = ThreeGraph(3, [(1, 2, 3)])
FANO = ThreeGraph(7, [(1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 6),
                      (2, 5, 7), (3, 4, 7), (3, 5, 6)])
# a=1, b=2, c1=3, c2=4, d1=5, d2=6
K4_DOUBLED = ThreeGraph(6, [(1, 2, 3), (1, 2, 4), (1, 2, 5), (1, 2, 6),
                            (1, 3, 5), (1, 3, 6), (1, 4, 5), (1, 4, 6),
                            (2, 3, 5), (2, 3, 6), (2, 4, 5), (2, 4, 6)])


def star(k: int) -> ThreeGraph:
    """S_k: centre 1, leaves 2..k+1, edges centre + any two leaves."""
    if k < 2:
        raise PreconditionError("star needs k >= 2")
    return ThreeGraph(k + 1, [(1, i, j) for i, j in itertools.combinations(range(2, k + 2), 2)])


def double_star(k: int) -> ThreeGraph:
    """S'_k: two copies 1, 2 of the centre, leaves 3..k+2."""
    if k < 2:
        raise PreconditionError("star needs k >= 2")
    leaves = list(itertools.combinations(range(3, k + 3), 2))
    return ThreeGraph(k + 2, [(x, i, j) for x in (1, 2) for i, j in leaves])


_FIXED_NAMES = {
    "F32": F32,
    "K4": K4,
    "K4minus": K4MINUS,
    "K3": K3,
    "edge": K3,
    "Fano": FANO,
    "K4doubled": K4_DOUBLED,
}

_INDEXED = re.compile(r"^(S|Sprime)_?(\d+)$")


def named_graph(name: str) -> ThreeGraph:
    """Look up a registry name (``F32``, ``S_4``, ``Sprime_3`` ...) or parse a graph string."""
    if name in _FIXED_NAMES:
        return _FIXED_NAMES[name]
    m = _INDEXED.match(name)
    if m:
        k = int(m.group(2))
        return star(k) if m.group(1) == "S" else double_star(k)
    return parse_graph(name)


def registry_names() -> list[str]:
    return sorted(_FIXED_NAMES) + ["S_<k>", "Sprime_<k>"]


# --- batch canonicalization ------------------------------------------------

@lru_cache(maxsize=None)
def _weight_matrix(n: int, t: int) -> np.ndarray:
    """W[i, p] = weight of the image of triple i under permutation p."""
    _, idx, weights = _perm_table(n, t)
    return np.ascontiguousarray(weights[idx].T)


def mask_bits(n: int, masks) -> np.ndarray:
    """Rows of 0/1 (uint64) with column i holding triple i of each mask."""
    m = len(triples(n))
    arr = np.asarray(masks, dtype=np.uint64).reshape(-1, 1)
    shifts = np.arange(m - 1, -1, -1, dtype=np.uint64)
    return (arr >> shifts) & np.uint64(1)


def canonical_masks(n: int, masks, fixed: int = 0, chunk_cells: int = 1 << 22) -> np.ndarray:
    """Canonical masks for a batch of graphs of order ``n`` <= 8."""
    if n > _TABLE_MAX_ORDER:
        return np.array([canonical_mask(n, int(x), fixed) for x in masks], dtype=object)
    masks = np.asarray(masks, dtype=np.uint64).reshape(-1)
    if len(triples(n)) == 0 or len(masks) == 0:
        return masks.copy()
    w = _weight_matrix(n, fixed)
    step = max(1, chunk_cells // w.shape[1])
    out = np.empty(len(masks), dtype=np.uint64)
    for s in range(0, len(masks), step):
        bits = mask_bits(n, masks[s:s + step])
        out[s:s + step] = (bits @ w).max(axis=1)
    return out
