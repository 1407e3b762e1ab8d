"""Exact rational matrix routines (lists of lists of Fraction)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted in exact arithmetic")
    return Fraction(x)


def parse_rational(s) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an int; reject floats and malformed text."""
    if isinstance(s, bool):
        raise ValueError(f"not a rational: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise ValueError(f"not a rational: {s!r}")
    t = s.strip()
    if "/" in t:
        p, q = t.split("/", 1)
        p, q = p.strip(), q.strip()
        if not _is_int(p) or not _is_int(q) or q.lstrip("+").lstrip("-") == "" or int(q) == 0:
            raise ValueError(f"not a rational: {s!r}")
        return Fraction(int(p), int(q))
    if not _is_int(t):
        raise ValueError(f"not a rational: {s!r}")
    return Fraction(int(t))


def _is_int(t: str) -> bool:
    body = t[1:] if t[:1] in "+-" else t
    return body.isdigit()


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def zeros(r: int, c: int) -> Matrix:
    return [[Fraction(0)] * c for _ in range(r)]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def factored(r: Matrix, d: Sequence[Fraction]) -> Matrix:
    """R diag(d) R^T."""
    g = len(r)
    out = zeros(g, g)
    for i in range(g):
        ri = r[i]
        for j in range(i, g):
            rj = r[j]
            s = sum((ri[k] * d[k] * rj[k] for k in range(len(d)) if d[k]), Fraction(0))
            out[i][j] = s
            out[j][i] = s
    return out


def quad_form(x: Sequence, q: Matrix, y: Sequence | None = None) -> Fraction:
    y = x if y is None else y
    return sum((Fraction(x[i]) * q[i][j] * Fraction(y[j])
                for i in range(len(x)) if x[i] for j in range(len(y)) if y[j]), Fraction(0))


def ldl_psd(q: Matrix) -> bool:
    """Exact positive semidefiniteness test by symmetric elimination with pivoting.

    At each step the largest remaining diagonal entry is used as the pivot.
    A negative diagonal means not PSD; if all remaining diagonal entries are
    zero the rest of the matrix must vanish.
    """
    n = len(q)
    a = [[Fraction(x) for x in row] for row in q]
    for i in range(n):
        for j in range(i + 1, n):
            if a[i][j] != a[j][i]:
                return False
    active = list(range(n))
    while active:
        piv = max(active, key=lambda i: a[i][i])
        p = a[piv][piv]
        if p < 0:
            return False
        if p == 0:
            return all(a[i][j] == 0 for i in active for j in active)
        active.remove(piv)
        col = {i: a[i][piv] for i in active if a[i][piv]}
        for i, ci in col.items():
            f = ci / p
            row = a[i]
            for j, cj in col.items():
                row[j] -= f * cj
    return True


def rank(m: Matrix) -> int:
    """Rank by fraction-exact Gaussian elimination."""
    a = [[Fraction(x) for x in row] for row in m]
    if not a:
        return 0
    rows, cols = len(a), len(a[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, rows):
            if a[i][c]:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == rows:
            break
    return r
