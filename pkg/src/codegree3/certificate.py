"""Codegree certificates: parsing, the alpha expansion, and verification.

A certificate fixes positive semidefinite blocks Q_t = R_t diag(q_t) R_t^T
(one per type, possibly absent), nonnegative coefficients c_j on the axiom
flags (two-rooted flags on N - 1 vertices) and a bound beta.  For every
admissible graph G_i on N vertices

    alpha_i = sum_j c_j (A_ij - beta B_ij) + sum_t sum_{u,v} Q_t[u, v] J_t[i, u, v]

and the certificate is accepted when every alpha_i <= 0.  All arithmetic is
done with ``fractions.Fraction``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Any, Sequence

import numpy as np

from . import linalg
from .enumeration import (
    AdmissibleBasis,
    FlagBasis,
    _forbidden_key,
    enumerate_admissible,
    enumerate_flags,
    enumerate_types,
)
from .errors import CertificateError, PreconditionError
from .flags import axiom_table, host_tables
from .graphs import (
    RootedGraph,
    ThreeGraph,
    canonical_mask,
    encode,
    find_isomorphism,
    induced_mask,
    named_graph,
    parse_any,
    relabel,
)

AXIOM_MARKER = "5:123(2)"


# --- the problem: bases and integer tables --------------------------------

class Problem:
    """Bases and exact count tables for a forbidden family at order N."""

    def __init__(self, forbidden: Sequence[ThreeGraph], N: int, jobs: int = 1):
        if N < 3:
            raise PreconditionError("N must be at least 3")
        self.forbidden = _forbidden_key(forbidden)
        self.N = N
        self.jobs = jobs

    @cached_property
    def admissible(self) -> AdmissibleBasis:
        return enumerate_admissible(self.forbidden, self.N)

    @cached_property
    def types(self) -> list[RootedGraph]:
        sizes = [k for k in range(self.N % 2, self.N, 2)]
        return enumerate_types(self.forbidden, sizes)

    def flag_order(self, tau: RootedGraph) -> int:
        return (self.N + tau.order) // 2

    @cached_property
    def bases(self) -> list[FlagBasis]:
        return [enumerate_flags(t, self.flag_order(t), self.forbidden) for t in self.types]

    @cached_property
    def axiom_basis(self) -> FlagBasis:
        tau2 = next(t for t in self.types if t.order == 2)
        return enumerate_flags(tau2, self.N - 1, self.forbidden)

    @cached_property
    def axiom_tables(self) -> tuple[np.ndarray, np.ndarray]:
        return axiom_table(self.axiom_basis, self.admissible.graphs)

    def joint_tables(self, t: int) -> np.ndarray:
        return self._tables(t)[0]

    def identity_holds(self, t: int) -> bool:
        return self._tables(t)[1]

    def _tables(self, t: int):
        cache = self.__dict__.setdefault("_table_cache", {})
        if t not in cache:
            cache[t] = _joint_with_identity(self.types[t], self.bases[t], self.admissible.graphs,
                                            self.jobs)
        return cache[t]


def _identity_row(args):
    tau, basis, host = args
    p, j, o = host_tables(tau, basis, basis, host)
    return j, bool((p == j + o).all())


def _joint_with_identity(tau, basis, hosts, jobs):
    from .enumeration import _map
    rows = _map(_identity_row, [(tau, basis, h) for h in hosts], jobs)
    J = np.stack([r[0] for r in rows])
    return J, all(r[1] for r in rows)


@lru_cache(maxsize=None)
def get_problem(forbidden: tuple, N: int) -> Problem:
    return Problem(forbidden, N)


# --- certificate objects ---------------------------------------------------

@dataclass
class Block:
    type_index: int
    r: list[list[Fraction]]
    qdash: list[Fraction]

    @cached_property
    def q(self) -> list[list[Fraction]]:
        return linalg.factored(self.r, self.qdash)


@dataclass
class Certificate:
    """A certificate resolved against this package's bases.

    ``blocks`` maps an artifact type index to its Block (rows in artifact
    flag order); ``c`` is indexed by the artifact axiom basis.
    """

    N: int
    forbidden: tuple
    beta: Fraction
    blocks: dict[int, Block]
    c: list[Fraction]
    admissible_order: list[int] | None = None  # document position -> artifact index

    @cached_property
    def problem(self) -> Problem:
        return get_problem(self.forbidden, self.N)


@dataclass
class VerificationReport:
    alpha: list[Fraction]
    max_alpha: Fraction
    psd_ok: bool
    c_nonneg: bool
    axiom_flag_positive: bool
    identity_ok: bool
    sharp_indices: list[int]
    positive_indices: list[int]
    accepted: bool
    reasons: list[str] = field(default_factory=list)
    vacuous: bool = False
    alpha_document_order: list[Fraction] | None = None
    block_ranks: dict[str, int] = field(default_factory=dict)  # type string -> rank of Q

    @property
    def verdict(self) -> str:
        if self.accepted:
            return "accepted (vacuous)" if self.vacuous else "accepted"
        return "rejected"

    def to_json(self) -> dict:
        f = linalg.format_rational
        out = {
            "verdict": self.verdict,
            "accepted": self.accepted,
            "max_alpha": f(self.max_alpha),
            "psd_ok": self.psd_ok,
            "c_nonneg": self.c_nonneg,
            "axiom_flag_positive": self.axiom_flag_positive,
            "identity_ok": self.identity_ok,
            "sharp_indices": self.sharp_indices,
            "positive_indices": self.positive_indices,
            "reasons": self.reasons,
            "block_ranks": self.block_ranks,
            "alpha": [f(a) for a in self.alpha],
        }
        if self.alpha_document_order is not None:
            out["alpha_document_order"] = [f(a) for a in self.alpha_document_order]
        return out

    def to_text(self) -> str:
        lines = [self.verdict,
                 f"admissible graphs: {len(self.alpha)}",
                 f"max alpha: {linalg.format_rational(self.max_alpha)}",
                 f"psd: {'ok' if self.psd_ok else 'FAILED'}",
                 f"coefficients nonnegative: {'yes' if self.c_nonneg else 'no'}",
                 f"coefficient of {AXIOM_MARKER} positive: {'yes' if self.axiom_flag_positive else 'no'}",
                 f"product identity: {'ok' if self.identity_ok else 'FAILED'}",
                 f"sharp graphs: {len(self.sharp_indices)}"]
        for t, r in self.block_ranks.items():
            lines.append(f"rank of block {t}: {r}")
        if self.positive_indices:
            lines.append("positive alpha at: " + " ".join(map(str, self.positive_indices)))
        lines.extend(self.reasons)
        return "\n".join(lines)


# --- parsing ---------------------------------------------------------------

_REQUIRED = ("n", "forbidden", "bound", "types", "flags", "qdash_matrices", "r_matrices",
             "axiom_flags", "density_coefficients")


def _rat(x, what) -> Fraction:
    try:
        return linalg.parse_rational(x)
    except ValueError as exc:
        raise CertificateError("syntax", f"{what}: {exc}") from None


def _graph(s, what):
    if not isinstance(s, str):
        raise CertificateError("syntax", f"{what}: expected a graph string")
    try:
        if s in ("F32", "K4", "K4minus", "K3", "Fano", "K4doubled"):
            return named_graph(s)
        return parse_any(s)
    except ValueError as exc:
        raise CertificateError("syntax", f"{what}: {exc}") from None


def _perm(m, size, what) -> list[int]:
    if not isinstance(m, list) or any(not isinstance(x, int) or isinstance(x, bool) for x in m):
        raise CertificateError("index-map", f"{what}: expected a list of integers")
    if len(m) > size or len(set(m)) != len(m) or any(not 0 <= x < size for x in m):
        raise CertificateError("index-map", f"{what}: not an injective map into 0..{size - 1}")
    return m


def _resolve_flag(flag: RootedGraph, phi: Sequence[int], basis: FlagBasis, what: str) -> int:
    """Index in ``basis`` of ``flag`` after renaming its roots by ``phi``."""
    k = basis.type.order
    if flag.root_count != k or flag.order != basis.flag_order:
        raise CertificateError("dimension", f"{what}: expected a {basis.flag_order}-vertex flag "
                                            f"with {k} roots, got {flag.encode()}")
    mapping = list(phi) + list(range(k + 1, flag.order + 1))
    g = relabel(flag.graph, mapping)
    if induced_mask(g, range(1, k + 1)) != basis.type.graph.mask:
        raise CertificateError("unknown-graph", f"{what}: roots of {flag.encode()} do not induce the type")
    key = canonical_mask(g.order, g.mask, k)
    for i, f in enumerate(basis.flags):
        if f.graph.mask == key:
            return i
    raise CertificateError("unknown-graph", f"{what}: {flag.encode()} is not an admissible flag")


def parse_certificate(document: str | dict) -> Certificate:
    """Parse and resolve a JSON certificate; raises CertificateError on any problem."""
    if isinstance(document, str):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise CertificateError("syntax", f"invalid JSON: {exc}") from None
    else:
        doc = document
    if not isinstance(doc, dict):
        raise CertificateError("syntax", "top level must be an object")
    missing = [k for k in _REQUIRED if k not in doc]
    if missing:
        raise CertificateError("syntax", "missing keys: " + ", ".join(missing))

    N = doc["n"]
    if not isinstance(N, int) or isinstance(N, bool) or not 3 <= N <= 6:
        raise CertificateError("syntax", "n must be an integer between 3 and 6")
    if not isinstance(doc["forbidden"], list):
        raise CertificateError("syntax", "forbidden must be a list")
    forbidden = [_graph(s, "forbidden") for s in doc["forbidden"]]
    if any(isinstance(h, RootedGraph) for h in forbidden):
        raise CertificateError("syntax", "forbidden graphs cannot be rooted")
    beta = _rat(doc["bound"], "bound")
    if not 0 <= beta <= 1:
        raise CertificateError("syntax", "bound must lie in [0, 1]")

    problem = get_problem(_forbidden_key(forbidden), N)
    index_maps = doc.get("index_maps") or {}
    if not isinstance(index_maps, dict):
        raise CertificateError("index-map", "index_maps must be an object")

    types, flags, qd, rm = (doc[k] for k in ("types", "flags", "qdash_matrices", "r_matrices"))
    for key, val in (("types", types), ("flags", flags), ("qdash_matrices", qd), ("r_matrices", rm)):
        if not isinstance(val, list):
            raise CertificateError("syntax", f"{key} must be a list")
    if not (len(types) == len(flags) == len(qd) == len(rm)):
        raise CertificateError("dimension", "types, flags, qdash_matrices and r_matrices differ in length")

    flag_maps = index_maps.get("flags")
    blocks: dict[int, Block] = {}
    seen_types: set[int] = set()
    for t, tstr in enumerate(types):
        tau = _graph(tstr, f"types[{t}]")
        tau_g = tau.graph if isinstance(tau, RootedGraph) else tau
        if isinstance(tau, RootedGraph) and tau.root_count != tau.order:
            raise CertificateError("syntax", f"types[{t}]: a type has every vertex as a root")
        match = None
        for ai, at in enumerate(problem.types):
            phi = find_isomorphism(tau_g, at.graph) if at.order == tau_g.order else None
            if phi is not None:
                match = (ai, phi)
                break
        if match is None:
            raise CertificateError("unknown-graph", f"types[{t}]: {encode(tau_g)} is not a type at n={N}")
        ai, phi = match
        if ai in seen_types:
            raise CertificateError("dimension", f"types[{t}]: type listed twice")
        seen_types.add(ai)
        basis = problem.bases[ai]
        if rm[t] is None or qd[t] is None:
            if not (rm[t] is None and qd[t] is None):
                raise CertificateError("dimension", f"types[{t}]: r and qdash must both be null")
            continue
        if not isinstance(flags[t], list):
            raise CertificateError("syntax", f"flags[{t}] must be a list")
        rows = [_resolve_flag(_as_flag(_graph(s, f"flags[{t}][{u}]"), f"flags[{t}][{u}]"), phi, basis,
                              f"flags[{t}][{u}]")
                for u, s in enumerate(flags[t])]
        if flag_maps is not None:
            fm = flag_maps[t] if isinstance(flag_maps, list) and t < len(flag_maps) else None
            if fm is not None:
                fm = _perm(fm, len(basis), f"index_maps.flags[{t}]")
                if rows and fm != rows:
                    raise CertificateError("index-map", f"index_maps.flags[{t}] disagrees with the flag strings")
                if not rows:
                    rows = fm
        if len(set(rows)) != len(rows):
            raise CertificateError("dimension", f"flags[{t}]: two entries are the same flag")
        r_doc, q_doc = rm[t], qd[t]
        if not isinstance(r_doc, list) or not isinstance(q_doc, list):
            raise CertificateError("syntax", f"block {t}: matrices must be lists")
        if len(r_doc) != len(rows):
            raise CertificateError("dimension", f"r_matrices[{t}] has {len(r_doc)} rows, "
                                                f"expected {len(rows)}")
        q = [_rat(x, f"qdash_matrices[{t}]") for x in q_doc]
        for x in q:
            if x < 0:
                raise CertificateError("negative-diagonal",
                                       f"qdash_matrices[{t}] has entry {linalg.format_rational(x)}")
        r_full = [[Fraction(0)] * len(q) for _ in range(len(basis))]
        for u, row in enumerate(r_doc):
            if not isinstance(row, list) or len(row) != len(q):
                raise CertificateError("dimension", f"r_matrices[{t}][{u}] should have {len(q)} entries")
            r_full[rows[u]] = [_rat(x, f"r_matrices[{t}][{u}]") for x in row]
        blocks[ai] = Block(ai, r_full, q)

    ax, dc = doc["axiom_flags"], doc["density_coefficients"]
    if not isinstance(ax, list) or not isinstance(dc, list):
        raise CertificateError("syntax", "axiom_flags and density_coefficients must be lists")
    ab = problem.axiom_basis
    ax_rows = [_resolve_flag(_as_flag(_graph(s, f"axiom_flags[{j}]"), f"axiom_flags[{j}]"), (1, 2), ab,
                             f"axiom_flags[{j}]")
               for j, s in enumerate(ax)]
    am = index_maps.get("axiom_flags")
    if am is not None:
        am = _perm(am, len(ab), "index_maps.axiom_flags")
        if ax_rows and am != ax_rows:
            raise CertificateError("index-map", "index_maps.axiom_flags disagrees with the flag strings")
        if not ax_rows:
            ax_rows = am
    if len(set(ax_rows)) != len(ax_rows):
        raise CertificateError("dimension", "axiom_flags lists a flag twice")
    if len(dc) != len(ax_rows):
        raise CertificateError("dimension", f"{len(dc)} density coefficients for {len(ax_rows)} axiom flags")
    c = [Fraction(0)] * len(ab)
    for j, x in enumerate(dc):
        v = _rat(x, f"density_coefficients[{j}]")
        if v < 0:
            raise CertificateError("negative-coefficient",
                                   f"density_coefficients[{j}] = {linalg.format_rational(v)}")
        c[ax_rows[j]] = v

    adm_order = None
    if doc.get("admissible_graphs") is not None:
        ag = doc["admissible_graphs"]
        if not isinstance(ag, list):
            raise CertificateError("syntax", "admissible_graphs must be a list")
        adm = problem.admissible
        lookup = {g.mask: i for i, g in enumerate(adm.graphs)}
        adm_order = []
        for i, s in enumerate(ag):
            g = _graph(s, f"admissible_graphs[{i}]")
            if isinstance(g, RootedGraph) or g.order != N:
                raise CertificateError("unknown-graph", f"admissible_graphs[{i}]: wrong kind of graph")
            key = canonical_mask(N, g.mask)
            if key not in lookup:
                raise CertificateError("unknown-graph", f"admissible_graphs[{i}]: {s} is not admissible")
            adm_order.append(lookup[key])
        if sorted(adm_order) != list(range(len(adm))):
            raise CertificateError("dimension", f"admissible_graphs must list all {len(adm)} graphs once")
        amap = index_maps.get("admissible_graphs")
        if amap is not None and _perm(amap, len(adm), "index_maps.admissible_graphs") != adm_order:
            raise CertificateError("index-map", "index_maps.admissible_graphs disagrees with the graph strings")

    return Certificate(N, problem.forbidden, beta, blocks, c, adm_order)


def _as_flag(g, what) -> RootedGraph:
    if not isinstance(g, RootedGraph):
        raise CertificateError("syntax", f"{what}: expected a rooted flag string")
    return g


def load_certificate(path: str) -> Certificate:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_certificate(text)


# --- alpha and verification ------------------------------------------------

def compute_alpha(cert: Certificate) -> list[Fraction]:
    """The exact alpha vector, indexed by the artifact's admissible basis."""
    pr = cert.problem
    A, B = pr.axiom_tables
    n_graphs = len(pr.admissible)
    if len(cert.c) != A.shape[1]:
        raise PreconditionError("coefficient vector does not match the axiom basis")
    alpha = [Fraction(0)] * n_graphs
    support = [(j, cj) for j, cj in enumerate(cert.c) if cj]
    for i in range(n_graphs):
        s = Fraction(0)
        for j, cj in support:
            s += cj * (int(A[i, j]) - cert.beta * int(B[i, j]))
        alpha[i] = s
    for t, block in cert.blocks.items():
        J = pr.joint_tables(t)
        q = block.q
        g = len(q)
        if J.shape[1] != g:
            raise PreconditionError("block size does not match the flag basis")
        nz = [(u, v, q[u][v]) for u in range(g) for v in range(g) if q[u][v]]
        for i in range(n_graphs):
            Ji = J[i]
            alpha[i] += sum((x * int(Ji[u, v]) for u, v, x in nz), Fraction(0))
    return alpha


def verify(cert: Certificate) -> VerificationReport:
    pr = cert.problem
    reasons = []
    identity_ok = all(pr.identity_holds(t) for t in cert.blocks)
    if not identity_ok:
        reasons.append("product identity failed for some block")
    alpha = compute_alpha(cert)
    psd_ok = True
    ranks = {}
    for t, block in cert.blocks.items():
        ranks[pr.types[t].encode()] = linalg.rank(block.q)
        if any(x < 0 for x in block.qdash) or not linalg.ldl_psd(block.q):
            psd_ok = False
            reasons.append(f"block for type {pr.types[t]} is not positive semidefinite")
    c_nonneg = all(x >= 0 for x in cert.c)
    if not c_nonneg:
        reasons.append("negative density coefficient")
    positive = [i for i, a in enumerate(alpha) if a > 0]
    if positive:
        reasons.append(f"{len(positive)} positive alpha entries")
    marker = axiom_marker_index(pr)
    accepted = not positive and psd_ok and c_nonneg and identity_ok
    vacuous = all(x == 0 for x in cert.c) and all(
        all(v == 0 for row in b.q for v in row) for b in cert.blocks.values())
    doc_alpha = None
    if cert.admissible_order is not None:
        doc_alpha = [alpha[i] for i in cert.admissible_order]
    return VerificationReport(
        alpha=alpha,
        max_alpha=max(alpha) if alpha else Fraction(0),
        psd_ok=psd_ok,
        c_nonneg=c_nonneg,
        axiom_flag_positive=marker is not None and cert.c[marker] > 0,
        identity_ok=identity_ok,
        sharp_indices=[i for i, a in enumerate(alpha) if a == 0],
        positive_indices=positive,
        accepted=accepted,
        reasons=reasons,
        vacuous=vacuous,
        alpha_document_order=doc_alpha,
        block_ranks=ranks,
    )


def axiom_marker_index(pr: Problem) -> int | None:
    ab = pr.axiom_basis
    if ab.flag_order != 5:
        return None
    target = parse_any(AXIOM_MARKER)
    key = canonical_mask(5, target.graph.mask, 2)
    return next((i for i, f in enumerate(ab.flags) if f.graph.mask == key), None)


def sharp_set(report: VerificationReport) -> set[int]:
    return set(report.sharp_indices)


def compare_sharp(report: VerificationReport, expected: set[int]) -> bool:
    return sharp_set(report) == set(expected)


def zero_certificate(problem: Problem) -> dict:
    """A document with every block inactive and every coefficient zero."""
    ab = problem.axiom_basis
    return {
        "n": problem.N,
        "forbidden": [encode(h) for h in problem.forbidden],
        "bound": "1/3",
        "types": [t.encode() for t in problem.types],
        "flags": [[f.encode() for f in b.flags] for b in problem.bases],
        "qdash_matrices": [None] * len(problem.types),
        "r_matrices": [None] * len(problem.types),
        "axiom_flags": [f.encode() for f in ab.flags],
        "density_coefficients": ["0"] * len(ab),
    }


# --- limit profiles in the tripartite construction -------------------------

def _t_edge(parts: Sequence[int]) -> bool:
    """Edge rule of T: two vertices in one part, the third in the next part."""
    a, b, c = sorted(parts)
    if a == b == c or len({a, b, c}) == 3:
        return False
    doubled = b  # the repeated value
    single = a if b == c else c
    return single == doubled % 3 + 1


def _graph_from_parts(parts: Sequence[int]) -> ThreeGraph:
    n = len(parts)
    return ThreeGraph(n, [(i + 1, j + 1, k + 1) for i, j, k in itertools.combinations(range(n), 3)
                          if _t_edge((parts[i], parts[j], parts[k]))])


def limit_profile(tau, root_parts: Sequence[int], basis: FlagBasis) -> list[int]:
    """Counts over the 3^(l-k) part assignments of the free vertices, per flag."""
    t = tau.graph if isinstance(tau, RootedGraph) else tau
    k = t.order
    if len(root_parts) != k or any(p not in (1, 2, 3) for p in root_parts):
        raise PreconditionError("root_parts must give a part in {1,2,3} for each root")
    if _graph_from_parts(root_parts).mask != t.mask:
        raise PreconditionError("root placement does not induce the type")
    pos = {f.graph.mask: i for i, f in enumerate(basis.flags)}
    out = [0] * len(basis)
    ell = basis.flag_order
    for ext in itertools.product((1, 2, 3), repeat=ell - k):
        g = _graph_from_parts(tuple(root_parts) + ext)
        key = canonical_mask(ell, g.mask, k)
        if key not in pos:
            raise PreconditionError("basis is missing a flag realised in the construction")
        out[pos[key]] += 1
    return out


def inducing_placements(tau) -> list[tuple[int, ...]]:
    t = tau.graph if isinstance(tau, RootedGraph) else tau
    return [p for p in itertools.product((1, 2, 3), repeat=t.order)
            if _graph_from_parts(p).mask == t.mask]


def zero_eigenvector_check(cert: Certificate) -> dict[int, bool]:
    """For each active block, whether every limit profile z has z Q z^T = 0."""
    out = {}
    pr = cert.problem
    for t, block in cert.blocks.items():
        basis = pr.bases[t]
        ok = True
        for p in inducing_placements(basis.type):
            z = limit_profile(basis.type, p, basis)
            if linalg.quad_form(z, block.q) != 0:
                ok = False
                break
        out[t] = ok
    return out


# --- helpers for building documents ----------------------------------------

def single_axiom_document(problem: Problem, j: int, beta: str = "1/3") -> dict:
    doc = zero_certificate(problem)
    doc["bound"] = beta
    doc["density_coefficients"] = ["1" if i == j else "0" for i in range(len(problem.axiom_basis))]
    return doc


def block_document(problem: Problem, t: int, r: list[list[Any]], qdash: list[Any]) -> dict:
    doc = zero_certificate(problem)
    doc["r_matrices"][t] = [[linalg.format_rational(Fraction(x)) for x in row] for row in r]
    doc["qdash_matrices"][t] = [linalg.format_rational(Fraction(x)) for x in qdash]
    return doc
