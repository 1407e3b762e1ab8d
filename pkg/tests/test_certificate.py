import json
import random
from fractions import Fraction

import pytest

from codegree3.certificate import (
    AXIOM_MARKER, axiom_marker_index, block_document, compare_sharp, compute_alpha, inducing_placements,
    limit_profile, parse_certificate, sharp_set, single_axiom_document, verify, zero_certificate,
    zero_eigenvector_check,
)
from codegree3.errors import CertificateError
from codegree3.flags import joint_count
from codegree3.graphs import K4MINUS, RootedGraph, ThreeGraph, encode, relabel


def test_zero_certificate(problem):
    doc = zero_certificate(problem)
    rep = verify(parse_certificate(json.dumps(doc)))
    assert rep.accepted and rep.verdict == "accepted (vacuous)"
    assert rep.max_alpha == 0
    assert not rep.axiom_flag_positive
    assert sharp_set(rep) == set(range(426))


def test_minimal_document(problem):
    doc = {"n": 6, "forbidden": ["5:123124125345"], "bound": "1/3", "types": [], "flags": [],
           "qdash_matrices": [], "r_matrices": [], "axiom_flags": [], "density_coefficients": []}
    cert = parse_certificate(doc)
    assert cert.blocks == {} and all(x == 0 for x in cert.c)
    assert verify(cert).accepted


def test_single_axiom_alpha(problem):
    A, B = problem.axiom_tables
    for j in (0, 1, 77, 153):
        cert = parse_certificate(single_axiom_document(problem, j))
        alpha = compute_alpha(cert)
        assert alpha == [A[i, j] - Fraction(B[i, j], 3) for i in range(426)]


def test_positive_alpha_rejected(problem):
    j = axiom_marker_index(problem)
    assert problem.axiom_basis.flags[j].encode() == AXIOM_MARKER
    rep = verify(parse_certificate(single_axiom_document(problem, j)))
    assert not rep.accepted
    assert rep.positive_indices
    assert all(rep.alpha[i] > 0 for i in rep.positive_indices)
    assert rep.axiom_flag_positive


def test_block_alpha_matches_direct_count(problem):
    t = 1
    basis = problem.bases[t]
    g = len(basis)
    rng = random.Random(3)
    R = [[Fraction(rng.randint(-2, 2)) for _ in range(2)] for _ in range(g)]
    q = [Fraction(1, 2), Fraction(3)]
    rep = verify(parse_certificate(block_document(problem, t, R, q)))
    Q = [[sum(R[u][k] * q[k] * R[v][k] for k in range(2)) for v in range(g)] for u in range(g)]
    for i in (0, 100, 425):
        host = problem.admissible.graphs[i]
        direct = sum(Q[u][v] * joint_count(problem.types[t], basis.flags[u], basis.flags[v], host)
                     for u in range(g) for v in range(g) if Q[u][v])
        assert rep.alpha[i] == direct
    assert rep.psd_ok and rep.identity_ok
    assert rep.block_ranks == {problem.types[t].encode(): 2}


def test_alpha_linearity(problem):
    j1, j2 = 3, 40
    a1 = compute_alpha(parse_certificate(single_axiom_document(problem, j1)))
    a2 = compute_alpha(parse_certificate(single_axiom_document(problem, j2)))
    doc = zero_certificate(problem)
    doc["density_coefficients"][j1] = "2/3"
    doc["density_coefficients"][j2] = "5"
    a = compute_alpha(parse_certificate(doc))
    assert a == [Fraction(2, 3) * x + 5 * y for x, y in zip(a1, a2)]


def test_relabelled_type_and_shuffled_flags(problem):
    """Renaming the type's vertices and reordering flags leaves alpha unchanged."""
    t = 5
    basis = problem.bases[t]
    g = len(basis)
    rng = random.Random(8)
    R = [[Fraction(rng.randint(-1, 2))] for _ in range(g)]
    base = compute_alpha(parse_certificate(block_document(problem, t, R, [1])))

    # type K4minus with the degree-3 vertex renamed from 1 to 4
    phi = [4, 2, 3, 1]  # old vertex v becomes phi[v-1]
    tau = relabel(K4MINUS, phi)
    flags = []
    for f in basis.flags:
        flags.append(RootedGraph(relabel(f.graph, phi + [5]), 4).encode())
    perm = list(range(g))
    rng.shuffle(perm)
    doc = zero_certificate(problem)
    doc["types"][t] = encode(tau)
    doc["flags"][t] = [flags[p] for p in perm]
    doc["r_matrices"][t] = [[str(R[p][0])] for p in perm]
    doc["qdash_matrices"][t] = ["1"]
    assert compute_alpha(parse_certificate(doc)) == base


def test_admissible_order_permutation(problem):
    doc = single_axiom_document(problem, 5)
    graphs = [encode(g) for g in problem.admissible.graphs]
    perm = list(range(426))
    random.Random(2).shuffle(perm)
    doc["admissible_graphs"] = [graphs[p] for p in perm]
    rep = verify(parse_certificate(doc))
    assert rep.alpha_document_order == [rep.alpha[p] for p in perm]
    doc["index_maps"] = {"admissible_graphs": perm}
    parse_certificate(doc)
    doc["index_maps"] = {"admissible_graphs": list(range(426))}
    with pytest.raises(CertificateError) as exc:
        parse_certificate(doc)
    assert exc.value.code == "index-map"


@pytest.mark.parametrize("mutate, code", [
    (lambda d: "{not json", "syntax"),
    (lambda d: {k: v for k, v in d.items() if k != "bound"}, "syntax"),
    (lambda d: {**d, "bound": "1.5"}, "syntax"),
    (lambda d: {**d, "density_coefficients": d["density_coefficients"][:-1]}, "dimension"),
    (lambda d: {**d, "density_coefficients": ["-1/2"] + d["density_coefficients"][1:]}, "negative-coefficient"),
    (lambda d: {**d, "axiom_flags": ["5:123124125345(2)"] + d["axiom_flags"][1:]}, "unknown-graph"),
    (lambda d: {**d, "types": ["4:123124134(4)"] + d["types"][1:]}, "dimension"),
    (lambda d: {**d, "index_maps": {"axiom_flags": [0, 0]}}, "index-map"),
])
def test_diagnostics(problem, mutate, code):
    doc = mutate(zero_certificate(problem))
    with pytest.raises(CertificateError) as exc:
        parse_certificate(json.dumps(doc) if isinstance(doc, dict) else doc)
    assert exc.value.code == code


def test_block_diagnostics(problem):
    g = len(problem.bases[1])
    doc = block_document(problem, 1, [[1]] * g, [1])
    doc["qdash_matrices"][1] = ["-1/2"]
    with pytest.raises(CertificateError) as exc:
        parse_certificate(doc)
    assert exc.value.code == "negative-diagonal"
    doc = block_document(problem, 1, [[1]] * (g - 1), [1])
    with pytest.raises(CertificateError) as exc:
        parse_certificate(doc)
    assert exc.value.code == "dimension"
    doc = block_document(problem, 1, [[1]] * g, [1])
    doc["flags"][1][0] = "4:123124(2)"
    with pytest.raises(CertificateError) as exc:
        parse_certificate(doc)
    assert exc.value.code == "dimension"
    doc["flags"][1][0] = "5:123(2)"
    with pytest.raises(CertificateError) as exc:
        parse_certificate(doc)
    assert exc.value.code == "dimension"


def test_sharp_compare(problem):
    rep = verify(parse_certificate(zero_certificate(problem)))
    assert compare_sharp(rep, set(range(426)))
    assert not compare_sharp(rep, {1, 2})


def test_tau6_profile(problem):
    t = 5
    basis = problem.bases[t]
    z = limit_profile(problem.types[t], (2, 1, 1, 1), basis)
    assert len(z) == 24
    assert sorted(x for x in z if x) == [1, 1, 1]
    support = {basis.flags[i].encode() for i, x in enumerate(z) if x}
    assert support == {"5:123124134(4)", "5:123124125134135145(4)", "5:123124134235245345(4)"}
    assert inducing_placements(problem.types[t]) == [(1, 3, 3, 3), (2, 1, 1, 1), (3, 2, 2, 2)]


def test_tau2_profile_total(problem):
    tau2 = problem.types[1]
    from codegree3.enumeration import enumerate_flags
    from codegree3.graphs import F32
    basis5 = enumerate_flags(tau2, 5, [F32])
    assert sum(limit_profile(tau2, (1, 1), basis5)) == 27


def test_profile_precondition(problem):
    from codegree3.errors import PreconditionError
    with pytest.raises(PreconditionError):
        limit_profile(problem.types[5], (1, 1, 1, 1), problem.bases[5])


def test_zero_eigenvector_check(problem):
    t = 5
    basis = problem.bases[t]
    g = len(basis)
    z = limit_profile(problem.types[t], (2, 1, 1, 1), basis)
    support = [i for i, x in enumerate(z) if x]
    # a vector orthogonal to z: +1 and -1 on two support flags
    r_good = [[0] for _ in range(g)]
    r_good[support[0]] = [1]
    r_good[support[1]] = [-1]
    cert = parse_certificate(block_document(problem, t, r_good, [1]))
    assert zero_eigenvector_check(cert) == {t: True}
    r_bad = [[0] for _ in range(g)]
    r_bad[support[0]] = [1]
    cert = parse_certificate(block_document(problem, t, r_bad, [1]))
    assert zero_eigenvector_check(cert) == {t: False}
