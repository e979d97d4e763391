"""Independent reference computations used by the tests."""

from __future__ import annotations

from fractions import Fraction


def det_fraction(M) -> Fraction:
    """Determinant by Gaussian elimination over the rationals."""
    a = [[Fraction(x) for x in row] for row in M]
    n = len(a)
    d = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        d *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return d


def minor_rank(M) -> int:
    """Rank as the size of a nonzero minor all of whose bordering minors vanish.

    Grows a nonzero minor one row and column at a time; by the bordering-minors
    theorem the size at which no bordering minor is nonzero is the rank.
    """
    nrows = len(M)
    ncols = len(M[0]) if nrows else 0
    rows: list[int] = []
    cols: list[int] = []
    while True:
        grown = False
        for r in range(nrows):
            if r in rows:
                continue
            for c in range(ncols):
                if c in cols:
                    continue
                R, C = rows + [r], cols + [c]
                if det_fraction([[M[i][j] for j in C] for i in R]) != 0:
                    rows, cols = R, C
                    grown = True
                    break
            if grown:
                break
        if not grown:
            return len(rows)


def random_rational_matrix(rng, nrows: int, ncols: int, rank: int | None = None):
    """Random rational matrix, optionally of prescribed (generic) rank."""
    def q():
        return Fraction(rng.randint(-9, 9), rng.randint(1, 5))

    if rank is None:
        return [[q() for _ in range(ncols)] for _ in range(nrows)]
    L = [[q() for _ in range(rank)] for _ in range(nrows)]
    R = [[q() for _ in range(ncols)] for _ in range(rank)]
    return [[sum(L[i][k] * R[k][j] for k in range(rank)) for j in range(ncols)] for i in range(nrows)]
