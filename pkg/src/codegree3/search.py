"""Exhaustive codegree thresholds at small n, and the mixed Turan/codegree bound."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np

from .constructions import build_T
from .enumeration import _forbidden_key, _map, graph_sort_key
from .errors import CapabilityError, PreconditionError
from .graphs import (
    F32,
    ThreeGraph,
    canonical_masks,
    edge_bit,
    embedding_masks,
    is_f32_free,
    is_isomorphic,
    min_codegree,
    pairs,
    triples,
)

MAX_BRUTE_ORDER = 6
_CHUNK_BITS = 16


def _pair_masks(n: int) -> list[int]:
    out = []
    for x, y in pairs(n):
        out.append(sum(edge_bit(n, e) for e in triples(n) if x in e and y in e))
    return out


def _scan_chunk(args):
    n, hi, low_bits, copies = args
    base = np.uint64(hi << low_bits)
    masks = np.arange(1 << low_bits, dtype=np.uint64) | base
    ok = np.ones(len(masks), dtype=bool)
    for cm in copies:
        c = np.uint64(cm)
        ok &= (masks & c) != c
    masks = masks[ok]
    if len(masks) == 0:
        return -1, np.zeros(0, dtype=np.uint64)
    deg = None
    for pm in _pair_masks(n):
        d = np.bitwise_count(masks & np.uint64(pm))
        deg = d if deg is None else np.minimum(deg, d)
    best = int(deg.max())
    return best, masks[deg == best]


def brute_force_coex(n: int, forbidden: Sequence[ThreeGraph], jobs: int = 1) -> tuple[int, ThreeGraph]:
    """Exact maximum minimum codegree over forbidden-free graphs on n vertices.

    The witness is the least maximizer in the (edge count, encoding) order.
    """
    if n > MAX_BRUTE_ORDER:
        raise CapabilityError(f"exhaustive search is limited to n <= {MAX_BRUTE_ORDER}")
    if n < 2:
        raise PreconditionError("minimum codegree needs at least 2 vertices")
    M = len(triples(n))
    fk = _forbidden_key(forbidden)
    copies = sorted({cm for h in fk if h.size for cm in embedding_masks(h, n)})
    if any(h.size == 0 and h.order <= n for h in fk):
        raise PreconditionError("an edgeless forbidden graph excludes every host")
    low = min(M, _CHUNK_BITS)
    chunks = [(n, hi, low, copies) for hi in range(1 << (M - low))]
    results = _map(_scan_chunk, chunks, jobs)
    best = max(r[0] for r in results)
    winners = np.concatenate([r[1] for r in results if r[0] == best])
    canon = np.unique(canonical_masks(n, winners))
    graphs = sorted((ThreeGraph.from_mask(n, int(x)) for x in canon), key=graph_sort_key)
    return best, graphs[0]


def local_search_coex(n: int, forbidden: Sequence[ThreeGraph], iterations: int = 50,
                      seed: int = 0) -> tuple[int, ThreeGraph]:
    """Lower bound only: best of several random maximal forbidden-free graphs."""
    from .graphs import contains
    rng = random.Random(seed)
    fk = _forbidden_key(forbidden)
    only_f32 = len(fk) == 1 and is_isomorphic(fk[0], F32)
    best = (-1, ThreeGraph(n))
    for _ in range(iterations):
        order = list(triples(n))
        rng.shuffle(order)
        edges: set = set()
        for e in order:
            g = ThreeGraph(n, edges | {e})
            free = is_f32_free(g) if only_f32 else not any(contains(g, h) for h in fk)
            if free:
                edges.add(e)
        g = ThreeGraph(n, edges)
        d = min_codegree(g)
        if d > best[0]:
            best = (d, g)
    return best


def threshold_formula(n: int) -> int:
    if n < 3:
        raise PreconditionError("n must be at least 3")
    return n // 3 - 1 if n % 3 == 1 else n // 3


def mixed_bound(c, n: int) -> Fraction:
    c = Fraction(c)
    if not 0 <= c <= Fraction(1, 3):
        raise PreconditionError("c must lie in [0, 1/3]")
    return (Fraction(1, 3) + 3 * (Fraction(1, 3) - c) ** 3) * comb(n, 3)


def _round_half_up(x: Fraction) -> int:
    return int((x + Fraction(1, 2)) // 1)


@dataclass
class InterpolationResult:
    graph: ThreeGraph
    parts: tuple[int, int, int]
    edges: int
    min_codegree: int
    bound: Fraction


def interpolating_construction(c, n: int) -> InterpolationResult:
    """T(A, B, C) with |C| = round(cn), |B| = round(n/3) and A the rest."""
    c = Fraction(c)
    if not 0 <= c <= Fraction(1, 3):
        raise PreconditionError("c must lie in [0, 1/3]")
    sc = _round_half_up(c * n)
    sb = _round_half_up(Fraction(n, 3))
    sa = n - sb - sc
    g = build_T(sa, sb, sc)
    return InterpolationResult(g, (sa, sb, sc), g.size, min_codegree(g) if n >= 2 else 0,
                               mixed_bound(c, n))
