"""Exact rooted-embedding counts behind the flag-algebra expansion.

For a host graph H and an ordered tuple sigma inducing a type, ``count_p``
counts vertex sets X containing sigma whose induced rooted graph matches a
given flag.  The pair-product kernel J counts splits of V(H) into two sets
meeting exactly in the roots; the overlap O counts the remaining pairs so
that sum_sigma p_u p_v = J + O on every host.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb
from typing import Sequence

import numpy as np

from .enumeration import FlagBasis, inducing_tuples
from .errors import PreconditionError
from .graphs import RootedGraph, ThreeGraph, canonical_mask, induced_mask


def _as_type(tau) -> ThreeGraph:
    return tau.graph if isinstance(tau, RootedGraph) else tau


@lru_cache(maxsize=1 << 18)
def _rooted_key(host: ThreeGraph, sigma: tuple, rest: tuple) -> int:
    vs = sigma + rest
    return canonical_mask(len(vs), induced_mask(host, vs), len(sigma))


def flag_key_at(host: ThreeGraph, sigma: Sequence[int], xs: Sequence[int]) -> int:
    """Rooted canonical mask of (host[xs], sigma); ``xs`` must contain sigma."""
    s = set(sigma)
    rest = tuple(sorted(v for v in xs if v not in s))
    return _rooted_key(host, tuple(sigma), rest)


def _check_roots(host: ThreeGraph, tau: ThreeGraph, roots: Sequence[int]):
    if len(roots) != tau.order or len(set(roots)) != len(roots):
        raise PreconditionError("roots must be distinct and match the type order")
    if any(not 1 <= r <= host.order for r in roots):
        raise PreconditionError("root outside the host")
    if induced_mask(host, roots) != tau.mask:
        raise PreconditionError("roots do not induce the type")


def count_p(flag: RootedGraph, host: ThreeGraph, roots: Sequence[int]) -> int:
    """Number of |flag|-sets X containing the roots with (host[X], roots) rooted-isomorphic to flag."""
    k = flag.root_count
    _check_roots(host, flag.type_graph, roots)
    target = canonical_mask(flag.order, flag.graph.mask, k)
    others = [v for v in host.vertices() if v not in set(roots)]
    return sum(1 for rest in itertools.combinations(others, flag.order - k)
               if _rooted_key(host, tuple(roots), rest) == target)


def count_vector(basis: FlagBasis, host: ThreeGraph, roots: Sequence[int]) -> np.ndarray:
    """count_p for every flag of the basis at once."""
    tau = basis.type.graph
    _check_roots(host, tau, roots)
    k = tau.order
    pos = _basis_positions(basis)
    out = np.zeros(len(basis), dtype=np.int64)
    others = [v for v in host.vertices() if v not in set(roots)]
    for rest in itertools.combinations(others, basis.flag_order - k):
        key = _rooted_key(host, tuple(roots), rest)
        if key in pos:
            out[pos[key]] += 1
    return out


def _basis_positions(basis: FlagBasis) -> dict:
    d = basis.__dict__.get("_pos_cache")
    if d is None:
        k = basis.type.order
        d = {canonical_mask(f.order, f.graph.mask, k): i for i, f in enumerate(basis.flags)}
        object.__setattr__(basis, "_pos_cache", d)
    return d


def _check_sizes(tau: ThreeGraph, l1: int, l2: int, host: ThreeGraph):
    if host.order != l1 + l2 - tau.order:
        raise PreconditionError(
            f"host order {host.order} differs from {l1} + {l2} - {tau.order}")


def _index_or_none(pos: dict, key: int):
    return pos.get(key)


def host_tables(tau, basis1: FlagBasis, basis2: FlagBasis, host: ThreeGraph):
    """(products, joint, overlap) matrices of shape (g1, g2) for one host.

    products[u, v] = sum_sigma p_u p_v; joint and overlap as in the module
    docstring.  The joint count here picks X1 and sets X2 = (V - X1) + sigma.
    """
    t = _as_type(tau)
    k = t.order
    l1, l2 = basis1.flag_order, basis2.flag_order
    _check_sizes(t, l1, l2, host)
    pos1, pos2 = _basis_positions(basis1), _basis_positions(basis2)
    g1, g2 = len(basis1), len(basis2)
    prod = np.zeros((g1, g2), dtype=np.int64)
    joint = np.zeros((g1, g2), dtype=np.int64)
    overlap = np.zeros((g1, g2), dtype=np.int64)
    V = set(host.vertices())
    for sigma in inducing_tuples(host, t):
        others = sorted(V - set(sigma))
        sets1 = [(frozenset(r), pos1.get(_rooted_key(host, sigma, r)))
                 for r in itertools.combinations(others, l1 - k)]
        sets2 = [(frozenset(r), pos2.get(_rooted_key(host, sigma, r)))
                 for r in itertools.combinations(others, l2 - k)]
        c1 = np.zeros(g1, dtype=np.int64)
        c2 = np.zeros(g2, dtype=np.int64)
        for _, u in sets1:
            if u is not None:
                c1[u] += 1
        for _, v in sets2:
            if v is not None:
                c2[v] += 1
        prod += np.outer(c1, c2)
        for r1, u in sets1:
            if u is None:
                continue
            r2 = tuple(sorted(V - set(sigma) - r1))
            v = pos2.get(_rooted_key(host, sigma, r2))
            if v is not None:
                joint[u, v] += 1
        for r1, u in sets1:
            if u is None:
                continue
            for r2, v in sets2:
                if v is not None and r1 & r2:
                    overlap[u, v] += 1
    return prod, joint, overlap


def joint_count(tau, f1: RootedGraph, f2: RootedGraph, host: ThreeGraph) -> int:
    """Triples (sigma, X1, X2) splitting V(host) with X1 & X2 = sigma and matching flags.

    Direct loop over all sigma, X1, X2; independent of ``host_tables``.
    """
    t = _as_type(tau)
    k = t.order
    l1, l2 = f1.order, f2.order
    _check_sizes(t, l1, l2, host)
    key1 = canonical_mask(l1, f1.graph.mask, k)
    key2 = canonical_mask(l2, f2.graph.mask, k)
    V = frozenset(host.vertices())
    total = 0
    for sigma in itertools.permutations(sorted(V), k):
        if induced_mask(host, sigma) != t.mask:
            continue
        im = frozenset(sigma)
        for x1 in itertools.combinations(sorted(V), l1):
            x1 = frozenset(x1)
            if not im <= x1:
                continue
            for x2 in itertools.combinations(sorted(V), l2):
                x2 = frozenset(x2)
                if x1 | x2 != V or x1 & x2 != im:
                    continue
                if (flag_key_at(host, sigma, x1) == key1
                        and flag_key_at(host, sigma, x2) == key2):
                    total += 1
    return total


def overlap_count(tau, f1: RootedGraph, f2: RootedGraph, host: ThreeGraph) -> int:
    """Pairs of matching sets whose intersection is larger than the roots."""
    t = _as_type(tau)
    k = t.order
    l1, l2 = f1.order, f2.order
    key1 = canonical_mask(l1, f1.graph.mask, k)
    key2 = canonical_mask(l2, f2.graph.mask, k)
    total = 0
    for sigma in inducing_tuples(host, t):
        others = [v for v in host.vertices() if v not in sigma]
        m1 = [frozenset(r) for r in itertools.combinations(others, l1 - k)
              if _rooted_key(host, sigma, r) == key1]
        m2 = [frozenset(r) for r in itertools.combinations(others, l2 - k)
              if _rooted_key(host, sigma, r) == key2]
        total += sum(1 for a in m1 for b in m2 if a & b)
    return total


def product_sum(tau, f1: RootedGraph, f2: RootedGraph, host: ThreeGraph) -> int:
    """sum over inducing sigma of count_p(f1) * count_p(f2)."""
    t = _as_type(tau)
    return sum(count_p(f1, host, s) * count_p(f2, host, s) for s in inducing_tuples(host, t))


def joint_table(tau, basis1: FlagBasis, basis2: FlagBasis, hosts: Sequence[ThreeGraph],
                jobs: int = 1) -> np.ndarray:
    """J with shape (len(hosts), g1, g2)."""
    from .enumeration import _map
    rows = _map(_joint_row, [(tau, basis1, basis2, h) for h in hosts], jobs)
    return np.stack(rows) if rows else np.zeros((0, len(basis1), len(basis2)), dtype=np.int64)


def _joint_row(args):
    tau, b1, b2, h = args
    return host_tables(tau, b1, b2, h)[1]


# --- the codegree axiom ----------------------------------------------------

def axiom_counts(m: RootedGraph, host: ThreeGraph) -> tuple[int, int]:
    """(A, B) for one axiom flag on a host with one more vertex than the flag."""
    if host.order != m.order + 1:
        raise PreconditionError(f"host must have order {m.order + 1}")
    if m.root_count != 2:
        raise PreconditionError("axiom flags have two roots")
    key = canonical_mask(m.order, m.graph.mask, 2)
    a = b = 0
    for sigma in itertools.permutations(host.vertices(), 2):
        for z in host.vertices():
            if z in sigma:
                continue
            xs = [v for v in host.vertices() if v != z]
            if flag_key_at(host, sigma, xs) != key:
                continue
            b += 1
            if host.has_edge(sigma[0], sigma[1], z):
                a += 1
    return a, b


def axiom_table(basis: FlagBasis, hosts: Sequence[ThreeGraph]) -> tuple[np.ndarray, np.ndarray]:
    """Integer matrices A, B of shape (len(hosts), len(basis))."""
    pos = _basis_positions(basis)
    A = np.zeros((len(hosts), len(basis)), dtype=np.int64)
    B = np.zeros_like(A)
    for i, host in enumerate(hosts):
        if host.order != basis.flag_order + 1:
            raise PreconditionError(f"host must have order {basis.flag_order + 1}")
        V = list(host.vertices())
        for z in V:
            xs = [v for v in V if v != z]
            for sigma in itertools.permutations(xs, 2):
                j = pos.get(flag_key_at(host, sigma, xs))
                if j is None:
                    continue
                B[i, j] += 1
                if host.has_edge(sigma[0], sigma[1], z):
                    A[i, j] += 1
    return A, B


def partition_of_unity(basis: FlagBasis, host: ThreeGraph, roots: Sequence[int]) -> bool:
    """Sum of counts equals C(n - k, l - k) (true when the basis is complete for host)."""
    k = basis.type.order
    return int(count_vector(basis, host, roots).sum()) == comb(host.order - k, basis.flag_order - k)
