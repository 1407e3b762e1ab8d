"""Generation of admissible graphs, types and flags up to isomorphism.

Everything is returned in a fixed order: graphs and flags by edge count and
then by their encoding string, types by order and then by their edge list.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import CapabilityError, PreconditionError
from .graphs import (
    RootedGraph,
    ThreeGraph,
    canonical_masks,
    embedding_masks,
    encode,
    induced_mask,
    mask_bits,
    pairs,
    triples,
)

MAX_ADMISSIBLE_ORDER = 7
MAX_FLAG_ORDER = 6


@dataclass(frozen=True)
class AdmissibleBasis:
    N: int
    forbidden: tuple
    graphs: tuple

    def __len__(self):
        return len(self.graphs)

    def index(self, g: ThreeGraph) -> int:
        return self._lookup[g]

    @property
    def _lookup(self):
        d = self.__dict__.get("_lookup_cache")
        if d is None:
            d = {g: i for i, g in enumerate(self.graphs)}
            object.__setattr__(self, "_lookup_cache", d)
        return d


@dataclass(frozen=True)
class FlagBasis:
    type: RootedGraph
    flag_order: int
    flags: tuple

    def __len__(self):
        return len(self.flags)

    def index(self, f: RootedGraph) -> int:
        d = self.__dict__.get("_lookup_cache")
        if d is None:
            d = {x.graph.mask: i for i, x in enumerate(self.flags)}
            object.__setattr__(self, "_lookup_cache", d)
        return d[f.graph.mask]


def graph_sort_key(g: ThreeGraph):
    return (g.size, encode(g))


def type_sort_key(t: RootedGraph):
    return (t.order, t.graph.sorted_edges)


def _forbidden_key(forbidden: Iterable[ThreeGraph]) -> tuple:
    return tuple(sorted(set(forbidden), key=lambda h: (h.order, h.size, encode(h))))


def _new_vertex_copies(forbidden: tuple, k: int) -> np.ndarray:
    """Masks of forbidden copies in [k] that use vertex k (the others are already excluded)."""
    out = set()
    last = 1 << 0  # placeholder, replaced below
    tr = triples(k)
    m = len(tr)
    uses_k = 0
    for i, e in enumerate(tr):
        if k in e:
            uses_k |= 1 << (m - 1 - i)
    for h in forbidden:
        if h.order > k or h.size == 0:
            continue
        for cm in embedding_masks(h, k):
            if cm & uses_k:
                out.add(cm)
    del last
    return np.array(sorted(out), dtype=np.uint64)


def _lift(mask: int, k: int) -> int:
    """Re-weight a mask on [k-1] as a mask on [k] (same edges)."""
    old = triples(k - 1)
    m_old = len(old)
    idx = {e: i for i, e in enumerate(triples(k))}
    m_new = len(idx)
    out = 0
    for i, e in enumerate(old):
        if mask >> (m_old - 1 - i) & 1:
            out |= 1 << (m_new - 1 - idx[e])
    return out


def _link_masks(k: int) -> np.ndarray:
    """All masks on [k] whose edges all contain vertex k."""
    tr = triples(k)
    m = len(tr)
    bits = [1 << (m - 1 - i) for i, e in enumerate(tr) if k in e]
    arr = np.zeros(1 << len(bits), dtype=np.uint64)
    for j, b in enumerate(bits):
        sel = (np.arange(len(arr)) >> j) & 1
        arr |= sel.astype(np.uint64) * np.uint64(b)
    return arr


def _extend_parent(args):
    parent_mask, k, copies = args
    base = np.uint64(_lift(parent_mask, k))
    cand = _link_masks(k) | base
    ok = np.ones(len(cand), dtype=bool)
    for cm in copies:
        ok &= (cand & cm) != cm
    cand = np.unique(cand[ok])
    return np.unique(canonical_masks(k, cand))


def _map(fn, items, jobs):
    if jobs and jobs > 1 and len(items) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


@lru_cache(maxsize=None)
def _admissible(forbidden: tuple, N: int, jobs: int) -> tuple:
    level = [0]  # mask of the order-0 graph
    for k in range(1, N + 1):
        copies = _new_vertex_copies(forbidden, k)
        results = _map(_extend_parent, [(int(p), k, copies) for p in level], jobs)
        merged = np.unique(np.concatenate(results)) if results else np.zeros(0, dtype=np.uint64)
        level = [int(x) for x in merged]
    graphs = [ThreeGraph.from_mask(N, x) for x in level]
    graphs.sort(key=graph_sort_key)
    return tuple(graphs)


def enumerate_admissible(forbidden: Sequence[ThreeGraph], N: int, jobs: int = 1) -> AdmissibleBasis:
    """All forbidden-free graphs on N vertices, one canonical graph per class."""
    if N > MAX_ADMISSIBLE_ORDER:
        raise CapabilityError(f"admissible enumeration is limited to N <= {MAX_ADMISSIBLE_ORDER}")
    if N < 0:
        raise PreconditionError("N must be nonnegative")
    fk = _forbidden_key(forbidden)
    return AdmissibleBasis(N, fk, _admissible(fk, N, 1))


def enumerate_types(forbidden: Sequence[ThreeGraph], sizes: Iterable[int]) -> list[RootedGraph]:
    out = []
    for s in sizes:
        if s > 5:
            raise PreconditionError("types are limited to at most 5 vertices")
        for g in enumerate_admissible(forbidden, s).graphs:
            out.append(RootedGraph(g, s))
    out.sort(key=type_sort_key)
    return out


def inducing_tuples(host: ThreeGraph, tau: ThreeGraph) -> list[tuple[int, ...]]:
    """Ordered tuples of distinct host vertices whose induced labelled graph is exactly tau."""
    k = tau.order
    target = tau.mask
    return [s for s in itertools.permutations(host.vertices(), k)
            if induced_mask(host, s) == target]


def rooted_at(host: ThreeGraph, sigma: Sequence[int], rest: Sequence[int] | None = None) -> RootedGraph:
    """The flag (host[sigma + rest], sigma) with sigma relabelled 1..k."""
    if rest is None:
        s = set(sigma)
        rest = [v for v in host.vertices() if v not in s]
    vs = list(sigma) + list(rest)
    k = len(sigma)
    sub_mask = induced_mask(host, vs)
    return RootedGraph(ThreeGraph.from_mask(len(vs), sub_mask), k)


def rooted_canonical_mask(n: int, mask: int, k: int) -> int:
    return int(canonical_masks(n, [mask], k)[0])


@lru_cache(maxsize=None)
def _flags(forbidden: tuple, tau: ThreeGraph, ell: int) -> tuple:
    k = tau.order
    seen = set()
    for g in enumerate_admissible(forbidden, ell).graphs:
        masks = []
        for sigma in inducing_tuples(g, tau):
            masks.append(rooted_at(g, sigma).graph.mask)
        if masks:
            seen.update(int(x) for x in canonical_masks(ell, masks, k))
    flags = [RootedGraph(ThreeGraph.from_mask(ell, x), k) for x in seen]
    flags.sort(key=lambda f: (f.graph.size, f.encode()))
    return tuple(flags)


def enumerate_flags(tau: RootedGraph | ThreeGraph, flag_order: int,
                    forbidden: Sequence[ThreeGraph]) -> FlagBasis:
    """All tau-flags of the given order, one per rooted isomorphism class."""
    t = tau.graph if isinstance(tau, RootedGraph) else tau
    if flag_order < t.order:
        raise PreconditionError("flag order is smaller than the type")
    if flag_order > MAX_FLAG_ORDER:
        raise CapabilityError(f"flags are limited to order {MAX_FLAG_ORDER}")
    return FlagBasis(RootedGraph(t, t.order), flag_order, _flags(_forbidden_key(forbidden), t, flag_order))
