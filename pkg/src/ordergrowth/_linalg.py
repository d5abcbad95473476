"""Exact row reduction over the rationals."""
from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence


def row_reduce(rows: Sequence[Sequence]) -> List[List[Fraction]]:
    """Reduced row echelon form; zero rows dropped."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return []
    ncols = len(m[0])
    out = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                factor = m[i][c]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    out = [row for row in m[:r]]
    return out


def rank(rows: Sequence[Sequence]) -> int:
    return len(row_reduce(rows))


def solve(rows: Sequence[Sequence], rhs: Sequence):
    """One exact solution of ``rows @ x = rhs`` (free variables set to zero), or None."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red = row_reduce(aug)
    ncols = len(rows[0])
    x = [Fraction(0)] * ncols
    for row in red:
        lead = next(i for i, v in enumerate(row) if v != 0)
        if lead == ncols:
            return None
        x[lead] = row[-1]
    return x
