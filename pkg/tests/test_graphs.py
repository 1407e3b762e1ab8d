import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from codegree3.errors import CapabilityError, PreconditionError
from codegree3.graphs import (
    F32, FANO, K3, K4, K4_DOUBLED, K4MINUS, RootedGraph, ThreeGraph, blow_up, canonical_form,
    canonical_labelling, codegrees, complete, contains, double_star, embedding_masks, encode,
    find_isomorphism, is_f32_free, is_isomorphic, joint_neighbourhood, min_codegree, named_graph,
    parse_flag, parse_graph, relabel, rooted_canonical_form, star, triples,
)
from codegree3.constructions import build_D, build_T
from codegree3.enumeration import enumerate_admissible

from conftest import brute_canonical_string, brute_contains


@st.composite
def graphs(draw, min_n=0, max_n=7):
    n = draw(st.integers(min_n, max_n))
    tr = triples(n)
    keep = draw(st.lists(st.booleans(), min_size=len(tr), max_size=len(tr)))
    return ThreeGraph(n, [e for e, k in zip(tr, keep) if k])


def test_parse_and_encode():
    g = parse_graph("5:123124125345")
    assert g == F32
    assert encode(g) == "5:123124125345"
    assert ThreeGraph(3, [(1, 3, 2)]).sorted_edges == ((1, 2, 3),)
    assert parse_flag("5:123(2)").root_count == 2
    big = ThreeGraph(10, [(1, 2, 10)])
    assert encode(big) == "g{n=10; edges=[1,2,10]}"
    assert parse_graph(encode(big)) == big
    assert parse_graph("0:") == ThreeGraph(0)
    with pytest.raises(PreconditionError):
        parse_graph("3:12")
    with pytest.raises(PreconditionError):
        parse_graph("3:124")
    with pytest.raises(PreconditionError):
        ThreeGraph(3, [(1, 1, 2)])
    with pytest.raises(PreconditionError):
        ThreeGraph(4, [(1, 2, 3), (3, 2, 1)])


def test_three_vertex_classes():
    forms = {encode(canonical_form(ThreeGraph(3, es))) for es in ([], [(1, 2, 3)])}
    assert forms == {"3:", "3:123"}


def test_canonical_matches_permutation_oracle():
    rng = random.Random(5)
    for _ in range(150):
        n = rng.randint(0, 7)
        g = ThreeGraph(n, [e for e in triples(n) if rng.random() < rng.random()])
        assert encode(canonical_form(g)) == brute_canonical_string(g)


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=7), st.randoms(use_true_random=False))
def test_canonical_isomorphism_invariant(g, rnd):
    p = list(range(1, g.order + 1))
    rnd.shuffle(p)
    h = relabel(g, p)
    c = canonical_form(g)
    assert canonical_form(h) == c
    assert canonical_form(c) == c
    phi = find_isomorphism(h, g)
    assert relabel(h, phi) == g


def test_canonical_large_orders_agree_with_table():
    # the search used from order 9 on is also correct on smaller graphs
    from codegree3 import graphs as G
    rng = random.Random(11)
    for n in range(3, 9):
        for _ in range(25):
            g = ThreeGraph(n, [e for e in triples(n) if rng.random() < 0.5])
            for t in (0, 2):
                assert G._search_canon(n, t, g.edges)[0] == G._table_canon(n, t, g.mask)[0]


def test_canonical_order_twelve():
    rng = random.Random(3)
    g = ThreeGraph(12, [e for e in triples(12) if rng.random() < 0.3])
    p = list(range(1, 13))
    rng.shuffle(p)
    assert canonical_form(relabel(g, p)) == canonical_form(g)
    t = build_T(4, 4, 4)
    assert canonical_form(relabel(t, p)) == canonical_form(t)
    with pytest.raises(CapabilityError):
        canonical_form(ThreeGraph(13))


def test_rooted_canonical_form():
    f = parse_flag("5:123(2)")
    assert rooted_canonical_form(f) == f
    full = RootedGraph(K4MINUS, 4)
    assert rooted_canonical_form(full) == full
    a = RootedGraph(ThreeGraph(4, [(1, 2, 3)]), 2)
    b = RootedGraph(ThreeGraph(4, [(1, 2, 4)]), 2)
    assert rooted_canonical_form(a) == rooted_canonical_form(b)
    c = RootedGraph(ThreeGraph(4, [(1, 3, 4)]), 2)
    assert rooted_canonical_form(a) != rooted_canonical_form(c)


def test_rooted_canonical_fixes_roots():
    rng = random.Random(2)
    for _ in range(40):
        g = ThreeGraph(6, [e for e in triples(6) if rng.random() < 0.4])
        f = RootedGraph(g, 3)
        p = [1, 2, 3] + rng.sample([4, 5, 6], 3)
        f2 = RootedGraph(relabel(g, p), 3)
        r = rooted_canonical_form(f)
        assert rooted_canonical_form(f2) == r
        assert r.type_graph == f.type_graph


def test_contains_examples():
    assert contains(F32, F32)
    assert not contains(build_T(2, 2, 2), F32)
    assert contains(K4, K4MINUS)
    assert not contains(K4MINUS, K4)


def test_contains_matches_oracle():
    rng = random.Random(7)
    patterns = [F32, K4MINUS, K4, star(3), ThreeGraph(4, [(1, 2, 3), (1, 2, 4)])]
    for _ in range(150):
        n = rng.randint(4, 7)
        g = ThreeGraph(n, [e for e in triples(n) if rng.random() < 0.35])
        for h in patterns:
            if h.order <= n:
                assert contains(g, h) == brute_contains(g, h)


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=5, max_n=7), st.data())
def test_contains_monotone(g, data):
    extra = data.draw(st.sets(st.sampled_from(triples(g.order)), max_size=4))
    bigger = ThreeGraph(g.order, g.edges | extra)
    if contains(g, F32):
        assert contains(bigger, F32)


def test_joint_neighbourhood():
    assert joint_neighbourhood(K3, 1, 2) == {3}
    assert joint_neighbourhood(F32, 1, 2) == {3, 4, 5}
    assert joint_neighbourhood(ThreeGraph(4), 1, 2) == set()
    with pytest.raises(PreconditionError):
        joint_neighbourhood(K3, 1, 1)


def test_min_codegree():
    assert min_codegree(K4) == 2
    assert min_codegree(build_T(4, 4, 4)) == 3
    with pytest.raises(PreconditionError):
        min_codegree(ThreeGraph(1))


@settings(max_examples=50, deadline=None)
@given(graphs(max_n=8))
def test_codegree_sum(g):
    assert sum(codegrees(g).values()) == 3 * g.size


def test_f32_free_examples():
    assert not is_f32_free(F32)
    assert is_f32_free(build_D(4, 2))
    assert is_f32_free(K4) and is_f32_free(K4, "containment")


def test_f32_methods_agree_on_every_six_vertex_class():
    for g in enumerate_admissible([], 6).graphs:
        assert is_f32_free(g) == is_f32_free(g, "containment")


def test_f32_methods_agree_random():
    rng = random.Random(13)
    for _ in range(10_000):
        n = rng.randint(5, 9)
        g = ThreeGraph(n, [e for e in triples(n) if rng.random() < rng.choice((0.1, 0.2, 0.3))])
        assert is_f32_free(g) == is_f32_free(g, "containment")


def test_blow_up():
    assert is_isomorphic(blow_up(K4, 1), K4)
    b = blow_up(K4, 2)
    assert (b.order, b.size) == (8, 32)
    e = blow_up(K3, 2)
    assert (e.order, e.size) == (6, 8)


def test_balanced_t_codegree_range():
    for n in range(6, 19):
        a = -(-n // 3)
        b = -(-(n - a) // 2)
        c = n - a - b
        values = set(codegrees(build_T(a, b, c)).values())
        assert values <= set(range(n // 3 - 1, -(-n // 3) + 1))


def test_registry():
    assert FANO.size == 7
    assert all(v == 1 for v in codegrees(FANO).values())
    assert is_isomorphic(star(3), K4MINUS)
    assert double_star(3).size == 6
    assert K4_DOUBLED.size == 12
    assert contains(blow_up(K4, 2), K4_DOUBLED)
    assert named_graph("S_4") == star(4)
    assert named_graph("Sprime_3") == double_star(3)
    assert named_graph("4:123") == ThreeGraph(4, [(1, 2, 3)])
    assert complete(4) == K4


def test_embedding_masks_counts():
    assert len(embedding_masks(F32, 5)) == 10
    assert len(embedding_masks(F32, 6)) == 60
