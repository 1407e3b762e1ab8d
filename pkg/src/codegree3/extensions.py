"""Finite case analysis for weighted one-vertex extensions.

Given a host H, a weighting of its vertex pairs and a threshold c, every
link L (set of host pairs joined to a new vertex z) whose weight exceeds c
must produce a target graph in H + z.  Containment is monotone in L, so the
links that avoid every target form a down-closed family; it is enumerated by
depth-first search, adding pairs in increasing order, which visits links in
lexicographic order of their sorted pair lists.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import CapabilityError, PreconditionError
from .graphs import (
    F32,
    K4,
    K4_DOUBLED,
    K4MINUS,
    K3,
    ThreeGraph,
    contains,
    double_star,
    pairs,
    star,
)

MAX_HOST_ORDER = 8

Pair = tuple[int, int]


@dataclass
class PairWeighting:
    host: ThreeGraph
    weights: dict[Pair, Fraction]

    def __post_init__(self):
        valid = set(pairs(self.host.order))
        clean = {}
        for q, w in self.weights.items():
            q = tuple(sorted(q))
            if q not in valid:
                raise PreconditionError(f"pair {q} is not a pair of the host")
            w = Fraction(w)
            if w < 0:
                raise PreconditionError("weights must be nonnegative")
            clean[q] = clean.get(q, Fraction(0)) + w
        self.weights = clean

    def total(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    def in_simplex(self) -> bool:
        return self.total() == 1

    def weight(self, q: Pair) -> Fraction:
        return self.weights.get(tuple(sorted(q)), Fraction(0))


def link_weight(w: PairWeighting, L: Iterable[Pair]) -> Fraction:
    valid = set(pairs(w.host.order))
    total = Fraction(0)
    for q in L:
        q = tuple(sorted(q))
        if q not in valid:
            raise PreconditionError(f"pair {q} is not a pair of the host")
        total += w.weight(q)
    return total


def extend(host: ThreeGraph, L: Iterable[Pair]) -> ThreeGraph:
    """Host plus vertex n+1 joined to every pair of L."""
    z = host.order + 1
    valid = set(pairs(host.order))
    new = []
    for q in L:
        q = tuple(sorted(q))
        if q not in valid:
            raise PreconditionError(f"pair {q} is not a pair of the host")
        new.append((q[0], q[1], z))
    return ThreeGraph(z, set(host.edges) | set(new))


@dataclass
class ExtensionCheckResult:
    verified: bool
    counterexample: list[Pair] | None = None
    counterexample_weight: Fraction | None = None
    links_examined: int = 0
    links_above_threshold: int = 0
    requirements: int = 0
    stats: dict = field(default_factory=dict)


def requirement_masks(host: ThreeGraph, target: ThreeGraph) -> set[int]:
    """Pair sets (bitmasks over ``pairs(host.order)``) whose link creates a copy of target.

    Each copy of the target in the extension by all pairs gives the set of
    link pairs it uses; the copy's other edges must already be host edges.
    The empty mask appears when the host itself contains the target.
    """
    n = host.order
    z = n + 1
    pidx = {q: i for i, q in enumerate(pairs(n))}
    if target.order > n + 1:
        return set()
    hdeg = target.degrees()
    order = sorted(target.vertices(), key=lambda v: -hdeg[v - 1])
    pos = {v: i for i, v in enumerate(order)}
    closing = [[] for _ in order]
    for e in target.edges:
        last = max(e, key=pos.__getitem__)
        closing[pos[last]].append(tuple(pos[u] for u in e if u != last))
    edges = host.edges
    out: set[int] = set()
    image: list[int] = []
    used = set()

    def rec(i, req):
        if i == len(order):
            out.add(req)
            return
        for x in range(1, z + 1):
            if x in used:
                continue
            r = req
            ok = True
            for a, b in closing[i]:
                u, v = image[a], image[b]
                if x == z:
                    r |= 1 << pidx[(u, v) if u < v else (v, u)]
                elif u == z:
                    r |= 1 << pidx[(v, x) if v < x else (x, v)]
                elif v == z:
                    r |= 1 << pidx[(u, x) if u < x else (x, u)]
                elif tuple(sorted((u, v, x))) not in edges:
                    ok = False
                    break
            if not ok:
                continue
            image.append(x)
            used.add(x)
            rec(i + 1, r)
            image.pop()
            used.discard(x)

    rec(0, 0)
    return _minimal(out)


def _minimal(masks: set[int]) -> set[int]:
    ms = sorted(masks, key=lambda m: bin(m).count("1"))
    keep: list[int] = []
    for m in ms:
        if not any(k & ~m == 0 for k in keep):
            keep.append(m)
    return set(keep)


def check_extension_lemma(host: ThreeGraph, w: PairWeighting | Mapping[Pair, Fraction],
                          threshold, targets: Sequence[ThreeGraph],
                          strict: bool = True) -> ExtensionCheckResult:
    """Every link of weight > threshold (>= when not strict) must create a target."""
    if host.order > MAX_HOST_ORDER:
        raise CapabilityError(f"hosts are limited to {MAX_HOST_ORDER} vertices")
    if not isinstance(w, PairWeighting):
        w = PairWeighting(host, dict(w))
    c = Fraction(threshold)
    P = pairs(host.order)
    wt = [w.weight(q) for q in P]
    reqs: set[int] = set()
    for t in targets:
        reqs |= requirement_masks(host, t)
    reqs = _minimal(reqs)
    by_pair = [[r for r in reqs if r >> i & 1] for i in range(len(P))]
    suffix = [Fraction(0)] * (len(P) + 1)
    for i in range(len(P) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + wt[i]

    def qualifies(x):
        return x > c if strict else x >= c

    res = ExtensionCheckResult(verified=True, requirements=len(reqs))
    if 0 in reqs:
        return res

    def rec(L, start, weight):
        # L avoids every requirement; only its descendants can as well
        res.links_examined += 1
        if qualifies(weight):
            res.links_above_threshold += 1
            if res.counterexample is None:
                res.counterexample = [P[i] for i in range(len(P)) if L >> i & 1]
                res.counterexample_weight = weight
        for i in range(start, len(P)):
            if not qualifies(weight + suffix[i]):
                break
            L2 = L | (1 << i)
            if any(r & ~L2 == 0 for r in by_pair[i]):
                continue
            rec(L2, i + 1, weight + wt[i])

    rec(0, 0, Fraction(0))
    res.verified = res.counterexample is None
    return res


def check_by_enumeration(host: ThreeGraph, w: PairWeighting, threshold, targets,
                         strict: bool = True) -> list[Pair] | None:
    """Plain check over all links with ``contains``; returns the least counterexample."""
    c = Fraction(threshold)
    P = pairs(host.order)
    best = None
    for r in range(len(P) + 1):
        for L in itertools.combinations(P, r):
            x = link_weight(w, L)
            if not (x > c if strict else x >= c):
                continue
            g = extend(host, L)
            if not any(contains(g, t) for t in targets):
                if best is None or list(L) < best:
                    best = list(L)
    return best


# --- the scripted lemmas ----------------------------------------------------

def double_star_weighting(k: int, w1, w2, w3) -> PairWeighting:
    """Weights w1 on x1x2, w2 on x_i y_j, w3 on y_i y_j for S'_k (x1=1, x2=2, y=3..k+2)."""
    host = double_star(k)
    weights = {}
    for q in pairs(host.order):
        if q == (1, 2):
            weights[q] = Fraction(w1)
        elif q[0] <= 2:
            weights[q] = Fraction(w2)
        else:
            weights[q] = Fraction(w3)
    return PairWeighting(host, weights)


def weights_a(k: int) -> tuple[Fraction, Fraction, Fraction]:
    return (Fraction(k - 1, 3 * k - 1), Fraction(1, 6 * k - 2), Fraction(2, (k - 1) * (3 * k - 1)))


def weights_b(k: int) -> tuple[Fraction, Fraction, Fraction]:
    return (Fraction(k - 2, 3 * (k - 1)), Fraction(1, 6 * (k - 1)), Fraction(2, 3 * k * (k - 1)))


K4_DOUBLED_PAIRS = [(1, 3), (1, 5), (2, 3), (2, 5), (3, 4), (5, 6)]  # ac1 ad1 bc1 bd1 c1c2 d1d2


def lemma_checks(k_max: int) -> list[tuple[str, str, ExtensionCheckResult]]:
    """(lemma, case label, result) for every scripted check."""
    if not 3 <= k_max <= 6:
        raise PreconditionError("k_max must be between 3 and 6")
    out = []
    w = PairWeighting(K3, {(1, 2): Fraction(1, 3), (1, 3): Fraction(1, 3), (2, 3): Fraction(1, 3)})
    out.append(("s3'", "edge", check_extension_lemma(K3, w, Fraction(1, 3), [K4MINUS])))
    for k in range(3, k_max + 1):
        w = double_star_weighting(k, *weights_a(k))
        out.append(("sk'_a", f"k={k}", check_extension_lemma(w.host, w, Fraction(k, 3 * k - 1), [F32])))
    for k in range(3, k_max + 1):
        w = double_star_weighting(k, *weights_b(k))
        out.append(("sk'_b", f"k={k}",
                    check_extension_lemma(w.host, w, Fraction(1, 3), [F32, star(k + 1), K4])))
    w = PairWeighting(K4_DOUBLED, {q: Fraction(1, 6) for q in K4_DOUBLED_PAIRS})
    out.append(("k4", "K4''", check_extension_lemma(K4_DOUBLED, w, Fraction(1, 3), [F32])))
    return out


LEMMA_ORDER = ("s3'", "sk'_a", "sk'_b", "k4")


def lemma_suite(k_max: int) -> dict[str, list[tuple[str, ExtensionCheckResult]]]:
    grouped: dict[str, list] = {name: [] for name in LEMMA_ORDER}
    for name, label, r in lemma_checks(k_max):
        grouped[name].append((label, r))
    return grouped
