"""Dense exact matrices over a scalar field.

Semantics are dense; values are treated as immutable after
construction.  Prime-field reductions are routed through the int64
kernels in modp_kernels, rational reductions run in exact Fraction
arithmetic.
"""

from __future__ import annotations

import numpy as np

from .fields import PrimeField, QQ
from . import modp_kernels


class Matrix:
    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field, rows, ncols=None):
        self.field = field
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        if self.nrows:
            widths = {len(r) for r in self.rows}
            if len(widths) != 1:
                raise ValueError("ragged rows")
            self.ncols = widths.pop()
            if ncols is not None and ncols != self.ncols:
                raise ValueError("ncols mismatch")
        else:
            self.ncols = 0 if ncols is None else ncols

    # -- constructors -------------------------------------------------

    @classmethod
    def zeros(cls, field, nrows, ncols):
        z = field.zero
        return cls(field, [[z] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, field, n):
        m = cls.zeros(field, n, n)
        for i in range(n):
            m.rows[i][i] = field.one
        return m

    @classmethod
    def from_int_rows(cls, field, rows, ncols=None):
        return cls(field, [[field.coerce(x) for x in r] for r in rows], ncols)

    @classmethod
    def column(cls, field, vec):
        return cls(field, [[x] for x in vec], 1)

    @classmethod
    def from_columns(cls, field, cols, nrows=None):
        if not cols:
            return cls.zeros(field, nrows or 0, 0)
        n = len(cols[0])
        return cls(field, [[c[i] for c in cols] for i in range(n)], len(cols))

    # -- basic structure ----------------------------------------------

    def __getitem__(self, rc):
        r, c = rc
        return self.rows[r][c]

    def shape(self):
        return (self.nrows, self.ncols)

    def copy(self):
        return Matrix(self.field, self.rows, self.ncols)

    def column_vector(self, c):
        return [self.rows[r][c] for r in range(self.nrows)]

    def columns(self):
        return [self.column_vector(c) for c in range(self.ncols)]

    def transpose(self):
        return Matrix(
            self.field,
            [[self.rows[r][c] for r in range(self.nrows)] for c in range(self.ncols)],
            self.nrows,
        )

    def hstack(self, other):
        if other.nrows != self.nrows:
            raise ValueError("row count mismatch")
        return Matrix(
            self.field,
            [self.rows[r] + other.rows[r] for r in range(self.nrows)],
            self.ncols + other.ncols,
        )

    def is_zero(self):
        fz = self.field.is_zero
        return all(fz(x) for row in self.rows for x in row)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self):
        raise TypeError("Matrix is not hashable")

    def __repr__(self):
        return f"Matrix({self.field!r}, {self.nrows}x{self.ncols})"

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        f = self.field
        return Matrix(
            f,
            [
                [f.add(a, b) for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ],
            self.ncols,
        )

    def __sub__(self, other):
        f = self.field
        return Matrix(
            f,
            [
                [f.sub(a, b) for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ],
            self.ncols,
        )

    def __neg__(self):
        f = self.field
        return Matrix(f, [[f.neg(a) for a in r] for r in self.rows], self.ncols)

    def scale(self, s):
        f = self.field
        return Matrix(f, [[f.mul(s, a) for a in r] for r in self.rows], self.ncols)

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in product")
        f = self.field
        fz = f.is_zero
        out = Matrix.zeros(f, self.nrows, other.ncols)
        for i in range(self.nrows):
            ri = self.rows[i]
            oi = out.rows[i]
            for k in range(self.ncols):
                a = ri[k]
                if fz(a):
                    continue
                rk = other.rows[k]
                for j in range(other.ncols):
                    b = rk[j]
                    if not fz(b):
                        oi[j] = f.add(oi[j], f.mul(a, b))
        return out

    def apply(self, vec):
        """Matrix-vector product (vec as a plain list)."""
        f = self.field
        fz = f.is_zero
        out = [f.zero] * self.nrows
        for i, row in enumerate(self.rows):
            acc = f.zero
            for a, x in zip(row, vec):
                if not fz(a) and not fz(x):
                    acc = f.add(acc, f.mul(a, x))
            out[i] = acc
        return out

    # -- elimination ----------------------------------------------------

    def rref(self):
        """Row-reduced echelon form; returns (Matrix, pivot column list)."""
        if isinstance(self.field, PrimeField):
            arr = np.array(
                [[int(x) for x in row] for row in self.rows], dtype=np.int64
            ).reshape(self.nrows, self.ncols)
            red, piv = modp_kernels.rref_modp(arr, self.field.p)
            m = Matrix(
                self.field,
                [[int(x) for x in red[i]] for i in range(self.nrows)],
                self.ncols,
            )
            return m, [int(c) for c in piv]
        return self._rref_generic()

    def _rref_generic(self):
        f = self.field
        fz = f.is_zero
        rows = [list(r) for r in self.rows]
        nrows, ncols = self.nrows, self.ncols
        pivots = []
        r = 0
        for c in range(ncols):
            if r == nrows:
                break
            piv = None
            for i in range(r, nrows):
                if not fz(rows[i][c]):
                    piv = i
                    break
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            inv = f.inv(rows[r][c])
            if inv != f.one:
                rows[r] = [f.mul(inv, x) for x in rows[r]]
            prow = rows[r]
            for i in range(nrows):
                if i == r:
                    continue
                a = rows[i][c]
                if fz(a):
                    continue
                na = f.neg(a)
                ri = rows[i]
                for j in range(c, ncols):
                    x = prow[j]
                    if not fz(x):
                        ri[j] = f.add(ri[j], f.mul(na, x))
            pivots.append(c)
            r += 1
        return Matrix(f, rows, ncols), pivots

    def rank(self):
        return len(self.rref()[1])

    def kernel_basis(self):
        """Basis of the right null space as a list of column vectors."""
        f = self.field
        red, pivots = self.rref()
        piv_set = set(pivots)
        free = [c for c in range(self.ncols) if c not in piv_set]
        basis = []
        for fc in free:
            v = [f.zero] * self.ncols
            v[fc] = f.one
            for i, pc in enumerate(pivots):
                v[pc] = f.neg(red.rows[i][fc])
            basis.append(v)
        return basis

    def image_basis(self):
        """Columns of self forming a basis of the column space."""
        _, pivots = self.rref()
        return [self.column_vector(c) for c in pivots]

    def solve(self, b):
        """One solution x of self @ x = b, or None if inconsistent."""
        aug = self.hstack(Matrix.column(self.field, b))
        red, pivots = aug.rref()
        if self.ncols in pivots:
            return None
        f = self.field
        x = [f.zero] * self.ncols
        for i, pc in enumerate(pivots):
            x[pc] = red.rows[i][self.ncols]
        return x

    def det(self):
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        f = self.field
        fz = f.is_zero
        rows = [list(r) for r in self.rows]
        n = self.nrows
        det = f.one
        for c in range(n):
            piv = None
            for i in range(c, n):
                if not fz(rows[i][c]):
                    piv = i
                    break
            if piv is None:
                return f.zero
            if piv != c:
                rows[c], rows[piv] = rows[piv], rows[c]
                det = f.neg(det)
            det = f.mul(det, rows[c][c])
            inv = f.inv(rows[c][c])
            for i in range(c + 1, n):
                a = rows[i][c]
                if fz(a):
                    continue
                factor = f.neg(f.mul(a, inv))
                for j in range(c, n):
                    rows[i][j] = f.add(rows[i][j], f.mul(factor, rows[c][j]))
        return det


def span_contains(field, spanning, vec):
    """Is vec in the column span of the given vectors?"""
    if not spanning:
        return all(field.is_zero(x) for x in vec)
    m = Matrix.from_columns(field, spanning)
    return m.solve(vec) is not None


def span_rank(field, vectors, dim=None):
    if not vectors:
        return 0
    return Matrix.from_columns(field, vectors, dim).rank()


def coordinates_in_basis(field, basis, vec):
    """Coordinates of vec in the given (independent) spanning set, or None."""
    m = Matrix.from_columns(field, basis)
    return m.solve(vec)


def vec(field, coeffs, dim):
    v = [field.zero] * dim
    for i, c in coeffs.items():
        v[i] = c
    return v


def qq_matrix(rows, ncols=None):
    return Matrix.from_int_rows(QQ, rows, ncols)
