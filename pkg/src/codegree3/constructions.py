"""Tripartite constructions and their validation.

Vertex ranges are fixed: with part sizes (a, b, c) the parts are
A = 1..a, B = a+1..a+b and C = a+b+1..a+b+c.  T(a, b, c) has every triple
with two vertices in one part and the third in the next part (A -> B -> C
-> A).  Tripartite edges meet each part once.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import PreconditionError, ValidationError
from .graphs import ThreeGraph, canonical_masks, induced_mask, is_f32_free, min_codegree

Pair = tuple[int, int]
Triple = tuple[int, int, int]


@dataclass(frozen=True)
class Tripartition:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if min(self.a, self.b, self.c) < 0:
            raise PreconditionError("part sizes must be nonnegative")

    @property
    def n(self) -> int:
        return self.a + self.b + self.c

    @property
    def A(self) -> range:
        return range(1, self.a + 1)

    @property
    def B(self) -> range:
        return range(self.a + 1, self.a + self.b + 1)

    @property
    def C(self) -> range:
        return range(self.a + self.b + 1, self.n + 1)

    def parts(self) -> tuple[range, range, range]:
        return self.A, self.B, self.C

    def part_of(self, v: int) -> int:
        if 1 <= v <= self.a:
            return 0
        if v <= self.a + self.b:
            return 1
        if v <= self.n:
            return 2
        raise PreconditionError(f"vertex {v} outside 1..{self.n}")

    def is_tripartite(self, e: Sequence[int]) -> bool:
        return sorted(self.part_of(v) for v in e) == [0, 1, 2]


def _pair(x: int, y: int) -> Pair:
    return (x, y) if x < y else (y, x)


def _sorted(e) -> Triple:
    return tuple(sorted(e))


def d_edges(A: Iterable[int], B: Iterable[int]) -> list[Triple]:
    A, B = list(A), list(B)
    return [_sorted((x, y, z)) for x, y in itertools.combinations(A, 2) for z in B]


def build_D(a: int, b: int) -> ThreeGraph:
    """Two vertices from A = 1..a and one from B = a+1..a+b."""
    if a < 2 or b < 1:
        raise PreconditionError("D needs a >= 2 and b >= 1")
    p = Tripartition(a, b, 0)
    return ThreeGraph(a + b, d_edges(p.A, p.B))


def t_edges(p: Tripartition) -> list[Triple]:
    A, B, C = p.parts()
    return d_edges(A, B) + d_edges(B, C) + d_edges(C, A)


def build_T(a: int, b: int, c: int) -> ThreeGraph:
    p = Tripartition(a, b, c)
    return ThreeGraph(p.n, t_edges(p))


def overused_pairs(F: Iterable[Sequence[int]]) -> set[Pair]:
    """Pairs lying in at least two triples of F."""
    cnt = pair_usage(F)
    return {q for q, k in cnt.items() if k >= 2}


def pair_usage(F: Iterable[Sequence[int]]) -> Counter:
    cnt: Counter = Counter()
    for e in F:
        x, y, z = sorted(e)
        cnt[(x, y)] += 1
        cnt[(x, z)] += 1
        cnt[(y, z)] += 1
    return cnt


def _check_tripartite(p: Tripartition, F):
    for e in F:
        if len(set(e)) != 3 or not p.is_tripartite(e):
            raise ValidationError("tripartite", f"{tuple(e)} does not meet each part once")


def add_tripartite(p: Tripartition, F: Iterable[Sequence[int]], mode: str = "matching") -> ThreeGraph:
    """T(p) plus the tripartite edges F.

    ``matching`` requires F to have no overused pair.  ``overused-removal``
    first deletes the T-edges that contain a pair overused by F.
    """
    F = {_sorted(e) for e in F}
    _check_tripartite(p, F)
    bad = overused_pairs(F)
    if mode == "matching":
        if bad:
            raise ValidationError("matching", f"overused pairs {sorted(bad)}")
        base = t_edges(p)
    elif mode == "overused-removal":
        base = [e for e in t_edges(p)
                if not any(_pair(x, y) in bad for x, y in itertools.combinations(e, 2))]
    else:
        raise PreconditionError(f"unknown mode {mode!r}")
    return ThreeGraph(p.n, set(base) | F)


# --- CT(3m) and CT(3m+2) ---------------------------------------------------

def cyclic_colouring(m: int) -> list[list[int]]:
    return [[(i + j) % m for j in range(m)] for i in range(m)]


def check_colouring(phi: Sequence[Sequence[int]], m: int):
    if len(phi) != m or any(len(row) != m for row in phi):
        raise ValidationError("proper-colouring", f"colouring must be an {m}x{m} array")
    for row in phi:
        if any(not 0 <= x < m for x in row):
            raise ValidationError("proper-colouring", f"colours must lie in 0..{m - 1}")
        if len(set(row)) != m:
            raise ValidationError("proper-colouring", "a colour repeats in a row")
    for j in range(m):
        if len({phi[i][j] for i in range(m)}) != m:
            raise ValidationError("proper-colouring", "a colour repeats in a column")


def ct_tripartite(m: int, phi: Sequence[Sequence[int]] | None = None) -> list[Triple]:
    phi = cyclic_colouring(m) if phi is None else phi
    return [(i + 1, m + j + 1, 2 * m + phi[i][j] + 1) for i in range(m) for j in range(m)]


def build_CT(n: int, colouring: Sequence[Sequence[int]] | None = None) -> ThreeGraph:
    """CT(3m): balanced T plus the Latin-square triples (A_i, B_j, C_phi(i,j))."""
    if n % 3 or n < 3:
        raise PreconditionError("CT needs n = 3m with m >= 1")
    m = n // 3
    phi = cyclic_colouring(m) if colouring is None else [list(r) for r in colouring]
    check_colouring(phi, m)
    return add_tripartite(Tripartition(m, m, m), ct_tripartite(m, phi), "matching")


def build_CT_mod2(n: int, colouring: Sequence[Sequence[int]] | None = None) -> ThreeGraph:
    """CT(n + 1) with its last vertex deleted (n = 3m + 2)."""
    if n % 3 != 2:
        raise PreconditionError("needs n = 3m + 2")
    g = build_CT(n + 1, colouring)
    return ThreeGraph(n, [e for e in g.edges if n + 1 not in e])


# --- completion of tripartite edge sets -------------------------------------

@dataclass
class _Completion:
    p: Tripartition
    fixed: set
    demands: list  # (pair, required count), processed in order
    caps: dict  # pair -> maximum usage; pairs absent have cap 1
    budget: int = 2_000_000
    usage: Counter = field(default_factory=Counter)

    def cap(self, q):
        return self.caps.get(q, 1)

    def fits(self, e):
        x, y, z = e
        return all(self.usage[q] < self.cap(q) for q in ((x, y), (x, z), (y, z)))

    def add(self, e, sign):
        x, y, z = e
        for q in ((x, y), (x, z), (y, z)):
            self.usage[q] += sign

    def solve(self) -> set:
        for e in self.fixed:
            self.add(e, 1)
        chosen: list = []
        nodes = [0]
        parts = self.p.parts()

        def rec(i):
            nodes[0] += 1
            if nodes[0] > self.budget:
                raise ValidationError("completion", "search budget exhausted")
            while i < len(self.demands) and self.usage[self.demands[i][0]] >= self.demands[i][1]:
                i += 1
            if i == len(self.demands):
                return True
            (x, y), _ = self.demands[i]
            third = 3 - self.p.part_of(x) - self.p.part_of(y)
            for w in parts[third]:
                e = _sorted((x, y, w))
                if e in self.fixed or e in chosen_set or not self.fits(e):
                    continue
                chosen.append(e)
                chosen_set.add(e)
                self.add(e, 1)
                if rec(i):
                    return True
                self.add(e, -1)
                chosen_set.discard(e)
                chosen.pop()
            return False

        chosen_set: set = set()
        if not rec(0):
            raise ValidationError("completion", "no tripartite edge set meets the requirements")
        return set(chosen)


def _require_codegree(g: ThreeGraph, target: int, family: str):
    d = min_codegree(g)
    if d != target:
        raise ValidationError("min-codegree", f"{family} has minimum codegree {d}, expected {target}")


def validate_ct1(p: Tripartition, F: set):
    _check_tripartite(p, F)
    bad = overused_pairs(F)
    if bad:
        raise ValidationError("no-overused-pairs", f"overused pairs {sorted(bad)}")
    used = pair_usage(F)
    for a in p.A:
        for c in p.C:
            if not used[_pair(a, c)]:
                raise ValidationError("ac-coverage", f"pair ({a},{c}) lies in no tripartite edge")


def build_CT1(m: int, F: Iterable[Sequence[int]] | None = None) -> ThreeGraph:
    """T(m, m+2, m-1) plus a tripartite matching covering every A-C pair."""
    if m < 2:
        raise PreconditionError("CT1 needs m >= 2")
    p = Tripartition(m, m + 2, m - 1)
    if F is None:
        demands = [((a, c), 1) for a in p.A for c in p.C]
        F = _Completion(p, set(), demands, {}).solve()
    F = {_sorted(e) for e in F}
    validate_ct1(p, F)
    g = add_tripartite(p, F, "overused-removal")
    _require_codegree(g, m - 1, "CT1")
    return g


def ct2_pairs(m: int, k: int) -> list[Pair]:
    p = Tripartition(m + 1, m + 1, m - 1)
    return [(p.A[i], p.B[i]) for i in range(k)]


def validate_ct2(p: Tripartition, S: list[Pair], F: set):
    m = p.a - 1
    _check_tripartite(p, F)
    A, B = set(p.A), set(p.B)
    if not 0 <= len(S) <= m + 1:
        raise ValidationError("k-range", f"k = {len(S)} outside 0..{m + 1}")
    for x, y in S:
        if x not in A or y not in B:
            raise ValidationError("S-in-AxB", f"pair ({x},{y}) is not in A x B")
    verts = [v for q in S for v in q]
    if len(set(verts)) != len(verts):
        raise ValidationError("S-disjoint", "pairs of S share a vertex")
    for x, y in S:
        for c in p.C:
            if (x, y, c) not in F:
                raise ValidationError("S-edges", f"tripartite edge ({x},{y},{c}) missing")
    bad = overused_pairs(F)
    extra = bad - {_pair(x, y) for x, y in S}
    if extra:
        raise ValidationError("no-new-overused", f"overused pairs {sorted(extra)}")
    used = pair_usage(F)
    for a in p.A:
        for c in p.C:
            if not used[_pair(a, c)]:
                raise ValidationError("ac-coverage", f"pair ({a},{c}) lies in no tripartite edge")


def build_CT2(m: int, k: int = 0, F: Iterable[Sequence[int]] | None = None) -> ThreeGraph:
    """T(m+1, m+1, m-1) with k matched A-B pairs made heavy, then completed.

    After the heavy pairs take every C-vertex, the unmatched A-vertices
    must reach all m-1 C-vertices through the m+1-k unmatched B-vertices,
    each B-C pair at most once; that is an (m+1-k) x (m-1) Latin rectangle
    on m+1-k symbols, so no completion exists when 3 <= k <= m.
    """
    if m < 2:
        raise PreconditionError("CT2 needs m >= 2")
    p = Tripartition(m + 1, m + 1, m - 1)
    if not 0 <= k <= m + 1:
        raise ValidationError("k-range", f"k = {k} outside 0..{m + 1}")
    S = ct2_pairs(m, k)
    heavy = {(x, y, c) for x, y in S for c in p.C}
    if F is None:
        if k < m + 1 and m - 1 > m + 1 - k:
            raise ValidationError(
                "ac-coverage",
                f"{m + 1 - k} unmatched A-vertices cannot reach {m - 1} C-vertices "
                f"through {m + 1 - k} unmatched B-vertices without a new overused pair")
        matched_a = {x for x, _ in S}
        demands = [((a, c), 1) for a in p.A if a not in matched_a for c in p.C]
        caps = {_pair(x, y): len(p.C) for x, y in S}
        F = heavy | _Completion(p, heavy, demands, caps).solve()
    F = {_sorted(e) for e in F}
    validate_ct2(p, S, F)
    g = add_tripartite(p, F, "overused-removal")
    _require_codegree(g, m - 1, "CT2")
    return g


def _class_of(p: Tripartition, q: Pair) -> int:
    """i such that the pair lies in V_i x V_{i+1} (0-based, cyclic), or -1."""
    i, j = p.part_of(q[0]), p.part_of(q[1])
    if (i + 1) % 3 == j:
        return i
    if (j + 1) % 3 == i:
        return j
    return -1


def _oriented(p: Tripartition, q: Pair) -> Pair:
    """Write the pair as (x, y) with x in V_i and y in V_{i+1}."""
    i = _class_of(p, q)
    x, y = q
    return (x, y) if p.part_of(x) == i else (y, x)


def validate_ct3_pairs(p: Tripartition, S: Sequence[Pair]) -> list[Pair]:
    S = [_oriented(p, q) if _class_of(p, q) >= 0 else q for q in S]
    classes = {}
    for q in S:
        i = _class_of(p, q)
        if i < 0:
            raise ValidationError("S-one-per-class", f"pair {q} is not in some V_i x V_(i+1)")
        if i in classes:
            raise ValidationError("S-one-per-class", f"two pairs of S in class V{i + 1} x V{(i + 1) % 3 + 1}")
        classes[i] = q
    # shared vertex in V_1 (classes 2 and 0) and in V_3 (classes 1 and 2)
    for before, after in ((2, 0), (1, 2)):
        if before in classes and after in classes and classes[before][1] != classes[after][0]:
            raise ValidationError("S-shared-vertex",
                                  f"pairs {classes[before]} and {classes[after]} must share their middle vertex")
    return S


def _ct3_clause3_pairs(p: Tripartition, S: Sequence[Pair]) -> list[Pair]:
    parts = p.parts()
    out = []
    for x, y in S:
        i = p.part_of(x)
        if i in (1, 2):  # parts of size m
            out.extend(_pair(x2, y) for x2 in parts[i] if x2 != x)
    return out


def validate_ct3(p: Tripartition, S: Sequence[Pair], F: set):
    m = p.b
    _check_tripartite(p, F)
    S = validate_ct3_pairs(p, S)
    used = pair_usage(F)
    Sset = {_pair(*q) for q in S}
    for q in Sset:
        if used[q] < m - 1:
            raise ValidationError("S-pair-cover", f"pair {q} lies in {used[q]} < {m - 1} added edges")
    extra = overused_pairs(F) - Sset
    if extra:
        raise ValidationError("no-other-overused", f"overused pairs {sorted(extra)}")
    for q in _ct3_clause3_pairs(p, S):
        if used[q] != 1:
            raise ValidationError("exact-cover", f"pair {q} lies in {used[q]} tripartite edges, expected 1")


def build_CT3(m: int, S: Sequence[Pair] = (), F: Iterable[Sequence[int]] | None = None) -> ThreeGraph:
    """T(m+1, m, m) with up to three special pairs S, completed by tripartite edges."""
    if m < 2:
        raise PreconditionError("CT3 needs m >= 2")
    p = Tripartition(m + 1, m, m)
    S = validate_ct3_pairs(p, list(S))
    if F is None:
        demands = [(_pair(*q), m - 1) for q in S] + [(q, 1) for q in _ct3_clause3_pairs(p, S)]
        caps = {_pair(*q): m + 1 for q in S}
        F = _Completion(p, set(), demands, caps).solve()
    F = {_sorted(e) for e in F}
    validate_ct3(p, S, F)
    g = add_tripartite(p, F, "overused-removal")
    _require_codegree(g, m - 1, "CT3")
    return g


def ct3_cycle(m: int) -> list[Pair]:
    """A 3-cycle a-b-c of special pairs (first vertex of each part)."""
    p = Tripartition(m + 1, m, m)
    a, b, c = p.A[0], p.B[0], p.C[0]
    return [(a, b), (b, c), (c, a)]


# --- named specs -----------------------------------------------------------

FAMILIES = ("D", "T", "CT0", "CT2", "CT1a", "CT1b", "CT1c")


@dataclass(frozen=True)
class ConstructionSpec:
    family: str
    params: tuple = ()

    def build(self) -> ThreeGraph:
        f, p = self.family, self.params
        if f == "D":
            return build_D(*p)
        if f == "T":
            return build_T(*p)
        if f == "CT0":
            return build_CT(*p)
        if f == "CT2":
            return build_CT_mod2(*p)
        if f == "CT1a":
            return build_CT1(*p)
        if f == "CT1b":
            return build_CT2(*p)
        if f == "CT1c":
            return build_CT3(*p)
        raise PreconditionError(f"unknown family {f!r}; expected one of {', '.join(FAMILIES)}")


def candidate_constructions(n: int) -> list[ConstructionSpec]:
    """Constructions on n vertices considered for the lower-bound table."""
    out = [ConstructionSpec("T", (n - 2 * (n // 3), n // 3, n // 3)),
           ConstructionSpec("T", (-(-n // 3), -(-(n - (-(-n // 3))) // 2), (n - (-(-n // 3))) // 2))]
    m = n // 3
    if n % 3 == 0:
        out.append(ConstructionSpec("CT0", (n,)))
    elif n % 3 == 2:
        out.append(ConstructionSpec("CT2", (n,)))
    elif m >= 2:
        out += [ConstructionSpec("CT1a", (m,)), ConstructionSpec("CT1b", (m, 0)),
                ConstructionSpec("CT1c", (m,))]
    return out


def best_construction(n: int) -> tuple[ConstructionSpec, int]:
    best = None
    for spec in candidate_constructions(n):
        g = spec.build()
        if not is_f32_free(g):
            raise ValidationError("f32-free", f"{spec} contains F32")
        d = min_codegree(g)
        if best is None or d > best[1]:
            best = (spec, d)
    return best


def construction_stats(g: ThreeGraph) -> dict:
    return {"n": g.order, "e": g.size, "min_codegree": min_codegree(g) if g.order >= 2 else None,
            "f32_free": is_f32_free(g)}


# --- sharp-compatible graphs -----------------------------------------------

PHANTOM = (1, 7, 13)


def sharp_compatible_graphs(N: int = 6, phantom: bool = False, part: int = 6) -> list[ThreeGraph]:
    """Canonical N-vertex induced subgraphs of T(part, part, part), optionally plus one tripartite edge."""
    p = Tripartition(part, part, part)
    edges = set(t_edges(p))
    if phantom:
        edges.add(PHANTOM)
    host = ThreeGraph(p.n, edges)
    masks = [induced_mask(host, s) for s in itertools.combinations(host.vertices(), N)]
    canon = np.unique(canonical_masks(N, np.unique(np.array(masks, dtype=np.uint64))))
    graphs = [ThreeGraph.from_mask(N, int(x)) for x in canon]
    from .enumeration import graph_sort_key
    graphs.sort(key=graph_sort_key)
    return graphs
