"""Exact and ball-arithmetic elimination kernels shared by the rank code."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from flint import arb

from .numbers import GUARD_BITS, ball_abs_lower, ball_abs_upper, lift, pow2, working_precision


def _integer_rows(rows: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    """Clear denominators row by row (row scaling keeps the rank)."""
    out = []
    for row in rows:
        row = [Fraction(x) for x in row]
        den = 1
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
        out.append([int(x * den) for x in row])
    return out


def bareiss_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank by fraction-free Gaussian elimination with pivot search."""
    m = _integer_rows(rows)
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    rank = 0
    prev = 1
    col = 0
    while rank < nrows and col < ncols:
        piv = next((r for r in range(rank, nrows) if m[r][col] != 0), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][col]
        for r in range(rank + 1, nrows):
            mr = m[r]
            f = mr[col]
            pr = m[rank]
            for c in range(col + 1, ncols):
                mr[c] = (p * mr[c] - f * pr[c]) // prev
            mr[col] = 0
        prev = p
        rank += 1
        col += 1
    return rank


@dataclass
class BallElimination:
    """Outcome of one complete-pivoting pass on a ball matrix."""

    rank: int
    precision: int
    tolerance: arb
    # a rejected entry had certified modulus above zero but not above tolerance
    straddles: bool
    # every rejected entry contained zero
    rejected_contain_zero: bool
    pivots: list = field(default_factory=list)


def ball_rank(rows: Sequence[Sequence], precision: int) -> BallElimination:
    """Complete-pivoting elimination on balls.

    A candidate pivot is accepted when its certified modulus lower bound exceeds
    ``max|M| * 2**(-precision/2)``.  Ties go to the largest lower bound, then to the
    lowest ``(row, column)``.
    """
    with working_precision(precision + GUARD_BITS):
        m = [[lift(x) for x in row] for row in rows]
        nrows = len(m)
        ncols = len(m[0]) if nrows else 0
        norm = arb(0)
        for row in m:
            for x in row:
                u = ball_abs_upper(x)
                if u > norm:
                    norm = u
        tol = norm * pow2(-(precision // 2))
        tol_f = float(tol)
        live_rows = list(range(nrows))
        live_cols = list(range(ncols))
        pivots = []
        while live_rows and live_cols:
            best = None
            best_val = -1.0
            for r in live_rows:
                row = m[r]
                for c in live_cols:
                    v = float(row[c].abs_lower())
                    if v > best_val:
                        best_val = v
                        best = (r, c)
            r0, c0 = best
            piv = m[r0][c0]
            if not (best_val > tol_f and ball_abs_lower(piv) > tol):
                break
            pivots.append(best)
            live_rows.remove(r0)
            live_cols.remove(c0)
            prow = m[r0]
            inv = 1 / piv
            for r in live_rows:
                row = m[r]
                f = row[c0] * inv
                if f == 0:
                    continue
                for c in live_cols:
                    row[c] = row[c] - f * prow[c]
        straddles = False
        contain_zero = True
        for r in live_rows:
            for c in live_cols:
                x = m[r][c]
                if not x.contains(0):
                    contain_zero = False
                if ball_abs_upper(x) > tol:
                    straddles = True
        return BallElimination(
            rank=len(pivots),
            precision=precision,
            tolerance=tol,
            straddles=straddles,
            rejected_contain_zero=contain_zero,
            pivots=pivots,
        )


def det(m: Sequence[Sequence]):
    """Determinant by cofactor expansion (small matrices, any ring)."""
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


def cramer_kernel(H: Sequence[Sequence], rows: Sequence[int], cols: Sequence[int]) -> dict[int, list]:
    """Kernel basis of a rank-``len(rows)`` matrix from a nonsingular block.

    For each free column ``k`` returns ``v`` with ``v[k] = det(B)`` and
    ``v[cols] = -adj(B) H[rows, k]``, where ``B = H[rows, cols]``.
    """
    n = len(H[0])
    block = [[H[i][j] for j in cols] for i in rows]
    D = det(block)
    r = len(rows)
    zero = D * 0
    out = {}
    for k in range(n):
        if k in cols:
            continue
        v = [zero] * n
        v[k] = D
        rhs = [H[i][k] for i in rows]
        # Cramer: solution of B x = -rhs, scaled by det(B)
        for t, cj in enumerate(cols):
            mod = [list(row) for row in block]
            for i in range(r):
                mod[i][t] = -rhs[i]
            v[cj] = det(mod)
        out[k] = v
    return out


__all__ = ["bareiss_rank", "ball_rank", "BallElimination", "det", "cramer_kernel"]
