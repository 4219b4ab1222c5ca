"""Exact linear algebra over the integers and rationals.

Small dense routines: fraction-free (Bareiss) row echelon, rank, integer
nullspace bases and a rational square solver.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def bareiss_echelon(rows, ncols: int):
    """Fraction-free row echelon form of an integer matrix.

    Returns ``(echelon, pivot_columns)``; ``echelon`` holds only the nonzero
    rows. Pivoting picks the smallest nonzero magnitude in the column.
    """
    a = [list(map(int, row)) for row in rows]
    m = len(a)
    pivots = []
    prev = 1
    p = 0
    for c in range(ncols):
        if p == m:
            break
        best = None
        for i in range(p, m):
            v = a[i][c]
            if v and (best is None or abs(v) < abs(a[best][c])):
                best = i
        if best is None:
            continue
        a[p], a[best] = a[best], a[p]
        piv_row = a[p]
        pv = piv_row[c]
        for i in range(p + 1, m):
            row = a[i]
            f = row[c]
            for j in range(c + 1, ncols):
                row[j] = (pv * row[j] - f * piv_row[j]) // prev
            row[c] = 0
        prev = pv
        pivots.append(c)
        p += 1
    return a[:p], pivots


def rank(rows, ncols: int) -> int:
    return len(bareiss_echelon(rows, ncols)[1])


def primitive(vec):
    """Scale a rational vector to coprime integers with a positive leading entry."""
    qs = [Fraction(v) for v in vec]
    den = 1
    for q in qs:
        den = den * q.denominator // gcd(den, q.denominator)
    ints = [int(q * den) for q in qs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g == 0:
        return ints
    ints = [v // g for v in ints]
    lead = next(v for v in ints if v)
    if lead < 0:
        ints = [-v for v in ints]
    return ints


def nullspace(rows, ncols: int):
    """Integer basis of ``{x : A x = 0}``, one primitive vector per free column."""
    ech, pivots = bareiss_echelon(rows, ncols)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, c in zip(reversed(ech), reversed(pivots)):
            s = sum(row[j] * x[j] for j in range(c + 1, ncols) if row[j] and x[j])
            x[c] = Fraction(-s, row[c]) if s else Fraction(0)
        basis.append(primitive(x))
    return basis


def solve(matrix, rhs):
    """Solve a square nonsingular system exactly with Fraction elimination."""
    n = len(matrix)
    a = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular system")
        a[c], a[p] = a[p], a[c]
        pr = a[c]
        inv = 1 / pr[c]
        for i in range(n):
            if i == c:
                continue
            f = a[i][c]
            if f:
                f *= inv
                row = a[i]
                for j in range(c, n + 1):
                    if pr[j]:
                        row[j] -= f * pr[j]
    return [a[i][n] / a[i][i] for i in range(n)]


def matvec(matrix, vec):
    return [sum(m * v for m, v in zip(row, vec) if m) for row in matrix]
