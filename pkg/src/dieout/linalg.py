"""Exact linear algebra over the rationals.

Elimination is fraction-free: every row is scaled to integers first and row
operations are of the form ``g*row_i - f*row_p`` followed by division by the
row gcd, so entries stay small integers and no Fraction arithmetic happens in
the inner loop.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Sequence


def _integer_row(row) -> list:
    fr = [Fraction(x) for x in row]
    den = reduce(lcm, (x.denominator for x in fr), 1)
    return [int(x * den) for x in fr]


def _primitive_int(row: list) -> list:
    g = reduce(gcd, row, 0)
    if g > 1:
        return [a // g for a in row]
    return row


def echelon(M: Sequence[Sequence]) -> tuple:
    """Reduced row echelon form with integer entries.

    Returns ``(rows, pivots)``: ``rows`` are the non-zero rows of an integer
    matrix row-equivalent to ``M`` where each pivot column has a single
    non-zero entry; ``pivots`` lists the pivot columns in order.
    """
    A = [_primitive_int(_integer_row(row)) for row in M]
    nrows = len(A)
    ncols = len(A[0]) if A else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        prow = A[r]
        g = prow[c]
        for i in range(nrows):
            f = A[i][c]
            if i == r or f == 0:
                continue
            A[i] = _primitive_int([g * a - f * b for a, b in zip(A[i], prow)])
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(M: Sequence[Sequence]) -> int:
    if not M or not len(M[0]):
        return 0
    return len(echelon(M)[1])


def transpose(M: Sequence[Sequence], ncols: int | None = None) -> list:
    if not M:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*M)]


def primitive(v: Sequence) -> tuple:
    """Scale a non-zero rational vector to coprime integers, first non-zero positive."""
    ints = _primitive_int(_integer_row(v))
    lead = next((a for a in ints if a != 0), 0)
    if lead == 0:
        raise ValueError("zero vector has no primitive representative")
    if lead < 0:
        ints = [-a for a in ints]
    return tuple(ints)


def null_space(M: Sequence[Sequence], ncols: int) -> list:
    """Basis of {v : M v = 0} as primitive integer tuples of length ``ncols``."""
    if not M:
        return [tuple(1 if j == i else 0 for j in range(ncols)) for i in range(ncols)]
    rows, pivots = echelon(M)
    pivot_set = set(pivots)
    scale = reduce(lcm, (abs(rows[r][c]) for r, c in enumerate(pivots)), 1)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [0] * ncols
        v[f] = scale
        for r, c in enumerate(pivots):
            v[c] = -rows[r][f] * scale // rows[r][c]
        basis.append(primitive(v))
    return basis


def left_null_space(S: Sequence[Sequence], d: int, dprime: int, rows: Sequence[int] | None = None) -> list:
    """Basis of {nu : nu S = 0} restricted to ``rows``.

    Vectors come back with length ``d`` and zeros outside ``rows``. With
    ``dprime == 0`` every vector is a left null vector.
    """
    if rows is None:
        rows = range(d)
    rows = list(rows)
    if dprime == 0:
        sub_basis = null_space([], len(rows))
    else:
        # nu_sub S[rows] = 0  <=>  S[rows]^T nu_sub^T = 0
        ST = [[S[i][j] for i in rows] for j in range(dprime)]
        sub_basis = null_space(ST, len(rows))
    out = []
    for b in sub_basis:
        v = [0] * d
        for pos, i in enumerate(rows):
            v[i] = b[pos]
        out.append(tuple(v))
    return out


def vec_mat(nu: Sequence, S: Sequence[Sequence], dprime: int) -> tuple:
    """Row vector times matrix, exact."""
    return tuple(sum((Fraction(nu[i]) * S[i][j] for i in range(len(nu))), Fraction(0)) for j in range(dprime))


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((Fraction(a) * Fraction(b) for a, b in zip(u, v)), Fraction(0))
