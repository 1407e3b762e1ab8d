import itertools
from fractions import Fraction
from math import comb

import pytest

from codegree3.constructions import build_CT, build_CT_mod2, build_D, build_T
from codegree3.errors import CapabilityError, PreconditionError
from codegree3.graphs import F32, K4, ThreeGraph, contains, is_f32_free, min_codegree
from codegree3.search import (
    brute_force_coex, interpolating_construction, local_search_coex, mixed_bound, threshold_formula,
)

# exhaustive values computed by this package; no external reference exists for small n
COEX_F32 = {3: 1, 4: 2, 5: 1, 6: 2}


def plain_coex(n, forbidden):
    """Loop over every edge set; only practical for n <= 5."""
    T = list(itertools.combinations(range(1, n + 1), 3))
    best = -1
    for bits in range(1 << len(T)):
        g = ThreeGraph(n, [T[i] for i in range(len(T)) if bits >> i & 1])
        if any(contains(g, h) for h in forbidden):
            continue
        best = max(best, min_codegree(g))
    return best


def test_no_forbidden():
    value, witness = brute_force_coex(4, [])
    assert value == 2 and witness == K4


@pytest.mark.parametrize("n", [3, 4, 5])
def test_small_against_plain(n):
    value, witness = brute_force_coex(n, [F32])
    assert value == COEX_F32[n] == plain_coex(n, [F32])
    assert is_f32_free(witness) and min_codegree(witness) == value


def test_n6_and_constructions():
    value, witness = brute_force_coex(6, [F32])
    assert value == COEX_F32[6]
    assert is_f32_free(witness) and min_codegree(witness) == value
    for g in (build_CT(6), build_T(2, 2, 2), build_D(4, 2)):
        assert value >= min_codegree(g)
    assert value >= min_codegree(build_CT_mod2(5))


def test_jobs_determinism():
    assert brute_force_coex(5, [F32], jobs=1) == brute_force_coex(5, [F32], jobs=2)


def test_limits():
    with pytest.raises(CapabilityError):
        brute_force_coex(7, [F32])
    with pytest.raises(PreconditionError):
        brute_force_coex(1, [F32])


def test_local_search_lower_bound():
    d, g = local_search_coex(6, [F32], iterations=20, seed=1)
    assert is_f32_free(g) and min_codegree(g) == d <= COEX_F32[6]
    assert local_search_coex(6, [F32], iterations=20, seed=1) == (d, g)


def test_threshold_formula():
    assert [threshold_formula(n) for n in (12, 13, 14)] == [4, 3, 4]
    with pytest.raises(PreconditionError):
        threshold_formula(2)


def test_mixed_bound():
    for n in (3, 10, 60):
        assert mixed_bound(0, n) == Fraction(4, 9) * comb(n, 3)
        assert mixed_bound(Fraction(1, 3), n) == Fraction(1, 3) * comb(n, 3)
    assert mixed_bound(Fraction(1, 6), 60) == Fraction(25, 72) * 34220
    cs = [Fraction(i, 30) for i in range(11)]
    vals = [mixed_bound(c, 40) for c in cs]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    with pytest.raises(PreconditionError):
        mixed_bound(Fraction(1, 2), 10)


def test_interpolation():
    r = interpolating_construction(Fraction(1, 3), 12)
    assert r.parts == (4, 4, 4)
    r = interpolating_construction(0, 12)
    assert r.parts == (8, 4, 0) and r.graph == build_D(8, 4)
    r = interpolating_construction(Fraction(1, 6), 60)
    assert abs(r.edges - r.bound) <= 60 ** 2
    for c in (Fraction(0), Fraction(1, 12), Fraction(1, 6), Fraction(1, 4), Fraction(1, 3)):
        for n in (9, 14, 20):
            r = interpolating_construction(c, n)
            assert is_f32_free(r.graph)
            assert r.min_codegree == max(min(r.parts) - 1, 0)
            if r.parts[0] >= r.parts[2]:
                assert r.min_codegree >= round(c * n) - 1


def test_interpolation_small_a():
    # with c = 1/3 and n = 2 mod 3 the remainder part is the smallest one
    r = interpolating_construction(Fraction(1, 3), 14)
    assert r.parts == (4, 5, 5) and r.min_codegree == 3
