import itertools

import pytest

from codegree3.certificate import get_problem
from codegree3.graphs import F32, ThreeGraph


@pytest.fixture(scope="session")
def problem():
    return get_problem((F32,), 6)


def brute_canonical_string(g: ThreeGraph) -> str:
    """Least sorted edge string over all relabellings (independent of the package's search)."""
    best = None
    for p in itertools.permutations(range(1, g.order + 1)):
        s = "".join("".join(map(str, e)) for e in sorted(tuple(sorted(p[v - 1] for v in e)) for e in g.edges))
        if best is None or s < best:
            best = s
    return f"{g.order}:{best}"


def brute_contains(g: ThreeGraph, h: ThreeGraph) -> bool:
    for inj in itertools.permutations(range(1, g.order + 1), h.order):
        if all(tuple(sorted(inj[v - 1] for v in e)) in g.edges for e in h.edges):
            return True
    return False


def axiom_oracle_profile(host: ThreeGraph):
    """Counter over (rooted canonical string of H - z at (x1, x2), x1x2z is an edge).

    Every ordered pair and outside vertex is relabelled by hand and compared
    through the rooted canonical form, so no table code is involved.
    """
    from collections import Counter

    from codegree3.graphs import RootedGraph, rooted_canonical_form

    out = Counter()
    V = list(host.vertices())
    for x1, x2 in itertools.permutations(V, 2):
        for z in V:
            if z in (x1, x2):
                continue
            order = [x1, x2] + [v for v in V if v not in (x1, x2, z)]
            pos = {v: i + 1 for i, v in enumerate(order)}
            sub = ThreeGraph(len(order), [tuple(pos[v] for v in e) for e in host.edges if z not in e])
            out[(rooted_canonical_form(RootedGraph(sub, 2)), host.has_edge(x1, x2, z))] += 1
    return out
