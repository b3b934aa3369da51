"""Smith normal form of integer matrices, with unimodular transforms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass
class SmithResult:
    diagonal: list  # full diagonal of D, length min(nrows, ncols)
    D: list         # transformed matrix U @ M @ V, as row lists
    U: list         # unimodular row transform
    V: list         # unimodular column transform

    @property
    def invariant_factors(self):
        return [d for d in self.diagonal if d != 0]


def _ident(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _row_op(m, i, j, q):
    # row_i <- row_i - q * row_j
    m[i] = [a - q * b for a, b in zip(m[i], m[j])]


def _col_op(m, i, j, q):
    # col_i <- col_i - q * col_j
    for row in m:
        row[i] -= q * row[j]


def smith_normal_form(rows) -> SmithResult:
    """Diagonalize an integer matrix: returns D = U @ M @ V with d1 | d2 | ...

    U and V are unimodular (determinant +-1).
    """
    D = [[int(x) for x in r] for r in rows]
    n = len(D)
    m = len(D[0]) if n else 0
    U = _ident(n)
    V = _ident(m)
    t = 0
    size = min(n, m)
    while t < size:
        # locate a nonzero entry of least magnitude in the trailing block
        best = None
        for i in range(t, n):
            for j in range(t, m):
                v = D[i][j]
                if v != 0 and (best is None or abs(v) < abs(D[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        if bi != t:
            D[t], D[bi] = D[bi], D[t]
            U[t], U[bi] = U[bi], U[t]
        if bj != t:
            for row in D:
                row[t], row[bj] = row[bj], row[t]
            for row in V:
                row[t], row[bj] = row[bj], row[t]
        while True:
            # clear the pivot column
            dirty = False
            for i in range(t + 1, n):
                if D[i][t] != 0:
                    q = D[i][t] // D[t][t]
                    _row_op(D, i, t, q)
                    _row_op(U, i, t, q)
                    if D[i][t] != 0:
                        D[t], D[i] = D[i], D[t]
                        U[t], U[i] = U[i], U[t]
                        dirty = True
            if dirty:
                continue
            # clear the pivot row
            for j in range(t + 1, m):
                if D[t][j] != 0:
                    q = D[t][j] // D[t][t]
                    _col_op(D, j, t, q)
                    _col_op(V, j, t, q)
                    if D[t][j] != 0:
                        for row in D:
                            row[t], row[j] = row[j], row[t]
                        for row in V:
                            row[t], row[j] = row[j], row[t]
                        dirty = True
            if dirty:
                continue
            # pivot must divide the rest of the block
            offender = None
            for i in range(t + 1, n):
                for j in range(t + 1, m):
                    if D[i][j] % D[t][t] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            _row_op(D, t, offender, -1)
            _row_op(U, t, offender, -1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    diagonal = [D[i][i] for i in range(size)]
    return SmithResult(diagonal=diagonal, D=D, U=U, V=V)


def int_det(rows) -> Fraction:
    """Exact determinant of a square integer matrix."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    a = [[Fraction(x) for x in r] for r in rows]
    det = Fraction(1)
    for c in range(n):
        piv = None
        for i in range(c, n):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def mat_mul_int(a, b):
    n, k = len(a), len(b)
    m = len(b[0]) if k else 0
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        for t in range(k):
            x = a[i][t]
            if x:
                for j in range(m):
                    out[i][j] += x * b[t][j]
    return out
