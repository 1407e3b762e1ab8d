"""Export of the certificate search problem in SDPA sparse format.

The unknown is block diagonal: one symmetric block per type (the Q
matrices), a diagonal block for the axiom coefficients c, and a diagonal
slack block with one entry per admissible graph.  Constraint i reads

    2q * alpha_i + s_i = 0      (bound beta = p/q)

so alpha_i <= 0 exactly when the slack s_i is nonnegative.  The last
constraint is sum_j c_j = 1.  The objective is zero, so any feasible point
is a certificate.  All coefficients are integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .certificate import Problem, get_problem
from .enumeration import _forbidden_key
from .errors import PreconditionError
from .graphs import ThreeGraph


@dataclass
class SdpaProblem:
    m: int
    block_sizes: list[int]
    c: list[Fraction]
    # (matrix number, block, i, j) -> value, with i <= j, all 1-based
    entries: dict[tuple[int, int, int, int], Fraction]


def build_sdp(problem: Problem, beta: Fraction) -> SdpaProblem:
    beta = Fraction(beta)
    if not 0 <= beta <= 1:
        raise PreconditionError("bound must lie in [0, 1]")
    p, q = beta.numerator, beta.denominator
    n_graphs = len(problem.admissible)
    A, B = problem.axiom_tables
    n_axiom = A.shape[1]
    block_sizes = [len(b) for b in problem.bases] + [-n_axiom, -n_graphs]
    c_block = len(problem.bases) + 1
    s_block = c_block + 1
    entries: dict[tuple[int, int, int, int], Fraction] = {}

    def put(mat, blk, i, j, val):
        if val:
            entries[(mat, blk, i, j)] = Fraction(val)

    for t in range(len(problem.bases)):
        J = problem.joint_tables(t)
        g = J.shape[1]
        for i in range(n_graphs):
            Ji = J[i]
            for u in range(g):
                put(i + 1, t + 1, u + 1, u + 1, 2 * q * int(Ji[u, u]))
                for v in range(u + 1, g):
                    put(i + 1, t + 1, u + 1, v + 1, q * (int(Ji[u, v]) + int(Ji[v, u])))
    for i in range(n_graphs):
        for j in range(n_axiom):
            put(i + 1, c_block, j + 1, j + 1, 2 * (q * int(A[i, j]) - p * int(B[i, j])))
        put(i + 1, s_block, i + 1, i + 1, 1)
    for j in range(n_axiom):
        put(n_graphs + 1, c_block, j + 1, j + 1, 1)
    rhs = [Fraction(0)] * n_graphs + [Fraction(1)]
    return SdpaProblem(n_graphs + 1, block_sizes, rhs, entries)


def _fmt(x: Fraction) -> str:
    if x.denominator != 1:
        raise ValueError("SDPA coefficients are expected to be integers")
    return str(x.numerator)


def write_sdpa(sdp: SdpaProblem) -> str:
    lines = [f"{sdp.m} = mDIM",
             f"{len(sdp.block_sizes)} = nBLOCK",
             " ".join(str(b) for b in sdp.block_sizes) + " = bLOCKsTRUCT",
             " ".join(_fmt(x) for x in sdp.c)]
    for key in sorted(sdp.entries):
        mat, blk, i, j = key
        lines.append(f"{mat} {blk} {i} {j} {_fmt(sdp.entries[key])}")
    return "\n".join(lines) + "\n"


def export_sdp(forbidden: Sequence[ThreeGraph], N: int, beta: Fraction) -> str:
    if N > 6:
        raise PreconditionError("export is limited to N <= 6")
    return write_sdpa(build_sdp(get_problem(_forbidden_key(forbidden), N), beta))


def read_sdpa(text: str) -> SdpaProblem:
    """Parse the sparse format written above (comments and '=' labels allowed)."""
    rows = []
    for raw in text.splitlines():
        line = raw.split("*")[0].split('"')[0]
        if "=" in line:
            line = line.split("=")[0]
        line = line.replace(",", " ").replace("{", " ").replace("}", " ").replace("(", " ").replace(")", " ")
        if line.strip():
            rows.append(line.split())
    if len(rows) < 4:
        raise ValueError("truncated SDPA document")
    m = int(rows[0][0])
    nblocks = int(rows[1][0])
    sizes = [int(x) for x in rows[2][:nblocks]]
    c = [Fraction(x) for x in rows[3][:m]]
    if len(sizes) != nblocks or len(c) != m:
        raise ValueError("header does not match its declared sizes")
    entries = {}
    for r in rows[4:]:
        if len(r) != 5:
            raise ValueError(f"bad entry line: {' '.join(r)}")
        mat, blk, i, j = (int(x) for x in r[:4])
        if not (0 <= mat <= m and 1 <= blk <= nblocks):
            raise ValueError(f"entry out of range: {' '.join(r)}")
        size = abs(sizes[blk - 1])
        if not (1 <= i <= j <= size) or (sizes[blk - 1] < 0 and i != j):
            raise ValueError(f"entry index out of range: {' '.join(r)}")
        entries[(mat, blk, i, j)] = Fraction(r[4])
    return SdpaProblem(m, sizes, c, entries)


def evaluate_constraints(sdp: SdpaProblem, blocks: dict[int, list[list[Fraction]]]) -> list[Fraction]:
    """F_i . Y for every constraint, given the block matrices of Y (1-based block ids)."""
    out = [Fraction(0)] * sdp.m
    for (mat, blk, i, j), val in sdp.entries.items():
        if mat == 0 or blk not in blocks:
            continue
        y = blocks[blk]
        contrib = val * y[i - 1][j - 1]
        out[mat - 1] += contrib if i == j else 2 * contrib
    return out
