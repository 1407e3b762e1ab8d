"""Acceptance criteria, one test each.

Run with ``pytest tests/test_acceptance.py -s`` to see one PASS/FAIL line per
criterion.
"""

import contextlib
import random
import time
from fractions import Fraction
from math import comb

from codegree3.certificate import (
    compute_alpha, get_problem, limit_profile, parse_certificate, single_axiom_document, verify,
    zero_certificate, block_document, zero_eigenvector_check,
)
from codegree3.constructions import (
    best_construction, build_CT, build_CT1, build_CT2, build_CT3, build_CT_mod2, ct3_cycle,
    sharp_compatible_graphs,
)
from codegree3.enumeration import enumerate_admissible, enumerate_flags, enumerate_types
from codegree3.extensions import check_extension_lemma, double_star_weighting, lemma_suite, weights_a
from codegree3.flags import joint_count, overlap_count, product_sum
from codegree3.graphs import F32, codegrees, is_f32_free, min_codegree, rooted_canonical_form
from codegree3.search import brute_force_coex, interpolating_construction, mixed_bound, threshold_formula

from conftest import axiom_oracle_profile


@contextlib.contextmanager
def criterion(number, title):
    """Print one PASS/FAIL line; the body appends failure notes to the yielded list."""
    notes: list[str] = []
    start = time.perf_counter()
    try:
        yield notes
    except Exception as exc:  # report, then let pytest see the failure
        notes.append(f"{type(exc).__name__}: {exc}")
        print(f"\nFAIL criterion {number}: {title} ({'; '.join(notes)})")
        raise
    elapsed = time.perf_counter() - start
    status = "PASS" if not notes else "FAIL"
    print(f"\n{status} criterion {number}: {title} [{elapsed:.1f}s]" + (f" ({'; '.join(notes)})" if notes else ""))
    assert not notes, notes


def check(notes, ok, message):
    if not ok:
        notes.append(message)


def test_criterion_01_enumeration_counts():
    with criterion(1, "enumeration counts") as notes:
        t0 = time.perf_counter()
        adm = enumerate_admissible([F32], 6)
        check(notes, len(adm) == 426, f"admissible {len(adm)}")
        types = enumerate_types([F32], [0, 2, 4])
        by_order = [sum(1 for t in types if t.order == k) for k in (0, 2, 4)]
        check(notes, by_order == [1, 1, 5], f"types {by_order}")
        tau2 = next(t for t in types if t.order == 2).graph
        f4 = enumerate_flags(tau2, 4, [F32])
        profile = [sum(1 for f in f4.flags if f.graph.size == e) for e in range(5)]
        check(notes, len(f4) == 12 and profile == [1, 3, 4, 3, 1], f"tau2 order 4: {len(f4)} {profile}")
        f5 = enumerate_flags(tau2, 5, [F32])
        check(notes, len(f5) == 154, f"tau2 order 5: {len(f5)}")
        tau6 = next(t for t in types if t.encode() == "4:123124134(4)").graph
        check(notes, len(enumerate_flags(tau6, 5, [F32])) == 24, "tau6 order 5")
        check(notes, time.perf_counter() - t0 < 60, "runtime over 60 s")


def test_criterion_02_sharp_sets():
    with criterion(2, "sharp-compatible sets") as notes:
        plain, phantom = sharp_compatible_graphs(6, False), sharp_compatible_graphs(6, True)
        check(notes, len(plain) == 9, f"plain {len(plain)}")
        check(notes, len(phantom) == 13, f"phantom {len(phantom)}")


def test_criterion_03_construction_codegrees():
    with criterion(3, "construction codegrees") as notes:
        t0 = time.perf_counter()
        for m in (3, 4, 5):
            g = build_CT(3 * m)
            check(notes, set(codegrees(g).values()) == {m} and is_f32_free(g), f"CT({3 * m})")
        for m in (3, 4):
            g = build_CT_mod2(3 * m + 2)
            check(notes, min_codegree(g) == m and is_f32_free(g), f"CT({3 * m + 2})")
        for m in (4, 5):
            for name, g in [("CT1", build_CT1(m)), ("CT2", build_CT2(m, 0)), ("CT3", build_CT3(m)),
                            ("CT3 cycle", build_CT3(m, ct3_cycle(m)))]:
                check(notes, min_codegree(g) == m - 1 and is_f32_free(g), f"{name} m={m}")
        check(notes, time.perf_counter() - t0 < 10, "runtime over 10 s")


def test_criterion_04_lower_bound_table():
    with criterion(4, "lower-bound table 9..21") as notes:
        t0 = time.perf_counter()
        for n in range(9, 22):
            spec, d = best_construction(n)
            check(notes, d == threshold_formula(n), f"n={n}: {spec} gives {d}")
        check(notes, time.perf_counter() - t0 < 10, "runtime over 10 s")


def test_criterion_05_extension_lemmas():
    with criterion(5, "extension lemma suite") as notes:
        t0 = time.perf_counter()
        suite = lemma_suite(5)
        for name, rows in suite.items():
            for label, r in rows:
                check(notes, r.verified, f"{name} {label}: {r.counterexample}")
        check(notes, [lab for lab, _ in suite["sk'_a"]] == ["k=3", "k=4", "k=5"], "variant a cases")
        check(notes, [lab for lab, _ in suite["sk'_b"]] == ["k=3", "k=4", "k=5"], "variant b cases")
        w = double_star_weighting(3, *weights_a(3))
        neg = check_extension_lemma(w.host, w, 0, [F32])
        check(notes, not neg.verified and neg.counterexample is not None, "negative control verified")
        check(notes, time.perf_counter() - t0 < 300, "runtime over 5 min")


def test_criterion_06_flag_identity():
    with criterion(6, "sigma-products = joint + overlap on all hosts") as notes:
        problem = get_problem((F32,), 6)
        for t, tau in enumerate(problem.types):
            check(notes, problem.identity_holds(t), f"type {tau.encode()}")
        # the tables against plain loops on a sample of hosts and pairs
        rng = random.Random(6)
        for t, tau in enumerate(problem.types):
            basis = problem.bases[t]
            J = problem.joint_tables(t)
            for _ in range(5):
                i = rng.randrange(426)
                u, v = rng.randrange(len(basis)), rng.randrange(len(basis))
                host = problem.admissible.graphs[i]
                f1, f2 = basis.flags[u], basis.flags[v]
                j = joint_count(tau, f1, f2, host)
                check(notes, J[i, u, v] == j, f"table mismatch type {t} host {i}")
                check(notes, product_sum(tau, f1, f2, host) == j + overlap_count(tau, f1, f2, host),
                      f"loop identity type {t} host {i}")


def test_criterion_07_tau6_profile():
    with criterion(7, "tau6 zero-eigenvector profile") as notes:
        problem = get_problem((F32,), 6)
        t = next(i for i, tau in enumerate(problem.types) if tau.encode() == "4:123124134(4)")
        basis = problem.bases[t]
        z = limit_profile(problem.types[t], (2, 1, 1, 1), basis)
        nonzero = [x for x in z if x]
        check(notes, len(z) == 24 and len(nonzero) == 3 and len(set(nonzero)) == 1, f"profile {z}")
        support = {basis.flags[i].encode() for i, x in enumerate(z) if x}
        check(notes, support == {"5:123124134(4)", "5:123124125134135145(4)", "5:123124134235245345(4)"},
              f"support {support}")
        # no external certificate is available; exercise the check on hand-built blocks
        idx = [i for i, x in enumerate(z) if x]
        r = [[0] for _ in basis.flags]
        r[idx[0]], r[idx[1]] = [1], [-1]
        check(notes, zero_eigenvector_check(parse_certificate(block_document(problem, t, r, [1])))[t],
              "orthogonal block flagged")
        r[idx[1]] = [0]
        check(notes, not zero_eigenvector_check(parse_certificate(block_document(problem, t, r, [1])))[t],
              "non-orthogonal block accepted")


def test_criterion_08_certificate_verifier():
    with criterion(8, "certificate verifier against the axiom oracle") as notes:
        problem = get_problem((F32,), 6)
        rep = verify(parse_certificate(zero_certificate(problem)))
        check(notes, rep.accepted and rep.verdict == "accepted (vacuous)", rep.verdict)
        profiles = [axiom_oracle_profile(g) for g in problem.admissible.graphs]
        for j, flag in enumerate(problem.axiom_basis.flags):
            key = rooted_canonical_form(flag)
            alpha = compute_alpha(parse_certificate(single_axiom_document(problem, j)))
            expected = [prof[(key, True)] - Fraction(prof[(key, True)] + prof[(key, False)], 3)
                        for prof in profiles]
            check(notes, alpha == expected, f"axiom flag {flag.encode()}")
        from codegree3.errors import CertificateError
        bad = {"syntax": {**zero_certificate(problem), "bound": "0.3"},
               "dimension": {**zero_certificate(problem), "density_coefficients": []},
               "negative-coefficient": {**zero_certificate(problem),
                                        "density_coefficients": ["-1"] + ["0"] * 153},
               "unknown-graph": {**zero_certificate(problem), "types": ["3:123"] + zero_certificate(problem)["types"][1:]}}
        for code, doc in bad.items():
            try:
                parse_certificate(doc)
                notes.append(f"{code} not raised")
            except CertificateError as exc:
                check(notes, exc.code == code, f"expected {code}, got {exc.code}")


def test_criterion_09_brute_force():
    with criterion(9, "exhaustive coex for n = 4, 5 (and 6)") as notes:
        for n, limit in ((4, 60), (5, 60), (6, 900)):
            t0 = time.perf_counter()
            first = brute_force_coex(n, [F32], jobs=1)
            elapsed = time.perf_counter() - t0
            check(notes, elapsed < limit, f"n={n} took {elapsed:.1f}s")
            check(notes, brute_force_coex(n, [F32], jobs=1) == first, f"n={n} unstable across runs")
            check(notes, brute_force_coex(n, [F32], jobs=2) == first, f"n={n} unstable across jobs")
            value, witness = first
            check(notes, is_f32_free(witness) and min_codegree(witness) == value, f"n={n} witness")


def test_criterion_10_mixed_bound():
    with criterion(10, "mixed bound") as notes:
        for n in (3, 12, 60, 100):
            check(notes, mixed_bound(0, n) == Fraction(4, 9) * comb(n, 3), f"c=0 n={n}")
            check(notes, mixed_bound(Fraction(1, 3), n) == Fraction(1, 3) * comb(n, 3), f"c=1/3 n={n}")
        for c in (Fraction(0), Fraction(1, 12), Fraction(1, 6), Fraction(1, 4), Fraction(1, 3)):
            r = interpolating_construction(c, 60)
            check(notes, abs(r.edges - r.bound) <= 60 ** 2, f"c={c}: e={r.edges} bound={r.bound}")
