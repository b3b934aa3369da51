"""Sparse exact matrices and elimination.

The window complexes produced elsewhere in the package (Koszul windows,
endomorphism complexes) have thousands of rows but only a handful of
entries per column, so ranks are computed here with a bucket-driven
sparse Gaussian elimination instead of dense reduction.  Works over any
field object from .fields.
"""

from __future__ import annotations

from .matrix import Matrix


class SparseMatrix:
    __slots__ = ("field", "nrows", "ncols", "entries")

    def __init__(self, field, nrows, ncols, entries=None):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        # entries: dict (r, c) -> nonzero value
        self.entries = {}
        if entries:
            fz = field.is_zero
            for (r, c), v in entries.items():
                if not (0 <= r < nrows and 0 <= c < ncols):
                    raise IndexError(f"entry {(r, c)} outside {nrows}x{ncols}")
                if not fz(v):
                    self.entries[(r, c)] = v

    @classmethod
    def from_triplets(cls, field, nrows, ncols, triplets):
        m = cls(field, nrows, ncols)
        f = field
        fz = f.is_zero
        for r, c, v in triplets:
            if not (0 <= r < nrows and 0 <= c < ncols):
                raise IndexError(f"entry {(r, c)} outside {nrows}x{ncols}")
            key = (r, c)
            if key in m.entries:
                v = f.add(m.entries[key], v)
            if fz(v):
                m.entries.pop(key, None)
            else:
                m.entries[key] = v
        return m

    @classmethod
    def from_dense(cls, mat: Matrix):
        m = cls(mat.field, mat.nrows, mat.ncols)
        fz = mat.field.is_zero
        for r, row in enumerate(mat.rows):
            for c, v in enumerate(row):
                if not fz(v):
                    m.entries[(r, c)] = v
        return m

    def nnz(self):
        return len(self.entries)

    def is_zero(self):
        return not self.entries

    def shape(self):
        return (self.nrows, self.ncols)

    def to_dense(self) -> Matrix:
        out = Matrix.zeros(self.field, self.nrows, self.ncols)
        for (r, c), v in self.entries.items():
            out.rows[r][c] = v
        return out

    def transpose(self):
        t = SparseMatrix(self.field, self.ncols, self.nrows)
        t.entries = {(c, r): v for (r, c), v in self.entries.items()}
        return t

    def scale(self, s):
        f = self.field
        out = SparseMatrix(f, self.nrows, self.ncols)
        if not f.is_zero(s):
            out.entries = {k: f.mul(s, v) for k, v in self.entries.items()}
        return out

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in sparse product")
        f = self.field
        fz = f.is_zero
        by_row = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        acc = {}
        for (r, k), a in self.entries.items():
            for c, b in by_row.get(k, ()):
                key = (r, c)
                cur = acc.get(key)
                val = f.mul(a, b) if cur is None else f.add(cur, f.mul(a, b))
                acc[key] = val
        out = SparseMatrix(f, self.nrows, other.ncols)
        out.entries = {k: v for k, v in acc.items() if not fz(v)}
        return out

    def apply(self, vec):
        f = self.field
        out = [f.zero] * self.nrows
        fz = f.is_zero
        for (r, c), v in self.entries.items():
            x = vec[c]
            if not fz(x):
                out[r] = f.add(out[r], f.mul(v, x))
        return out

    def rank(self) -> int:
        return eliminate(self)[0]

    def kernel_basis(self):
        """Basis of the right null space (list of column vectors)."""
        _, pivots, reduced = eliminate(self, reduce=True)
        f = self.field
        piv_cols = {pc for pc, _ in reduced}
        basis = []
        for fc in range(self.ncols):
            if fc in piv_cols:
                continue
            v = [f.zero] * self.ncols
            v[fc] = f.one
            for pc, row in reduced:
                if fc in row:
                    v[pc] = f.neg(row[fc])
            basis.append(v)
        return basis


def eliminate(sm: SparseMatrix, reduce=False):
    """Sparse Gaussian elimination with smallest-row pivoting.

    Returns (rank, pivots, reduced): pivots is a list of (row, col) in
    elimination order.  With reduce=True the third component lists
    (pivot col, row dict) back-substituted so each row holds only its
    pivot column (value 1) and free columns; otherwise it is None.
    """
    f = sm.field
    fz = f.is_zero
    rows: dict[int, dict[int, object]] = {}
    for (r, c), v in sm.entries.items():
        rows.setdefault(r, {})[c] = v
    cols: dict[int, set[int]] = {}
    for r, row in rows.items():
        for c in row:
            cols.setdefault(c, set()).add(r)

    buckets: dict[int, set[int]] = {}
    sizes: dict[int, int] = {}
    for r, row in rows.items():
        sizes[r] = len(row)
        buckets.setdefault(len(row), set()).add(r)

    def resize(r, new):
        old = sizes[r]
        if old == new:
            return
        b = buckets[old]
        b.discard(r)
        if not b:
            del buckets[old]
        if new:
            buckets.setdefault(new, set()).add(r)
            sizes[r] = new
        else:
            del sizes[r]

    def detach(r):
        """Remove row r from all indexes and return its entries."""
        row = rows.pop(r)
        resize(r, 0)
        for c in row:
            s = cols.get(c)
            if s is not None:
                s.discard(r)
                if not s:
                    del cols[c]
        return row

    pivots = []
    done = []  # (pivot col, normalized row dict)
    minsize = 1
    while rows:
        while not buckets.get(minsize):
            minsize += 1
        r = next(iter(buckets[minsize]))
        row = rows[r]
        pc = min(row, key=lambda c: (len(cols.get(c, ())), c))
        pv = row[pc]
        prow = detach(r)
        inv = f.inv(pv)
        if inv != f.one:
            prow = {c: f.mul(inv, v) for c, v in prow.items()}
        pivots.append((r, pc))
        done.append((pc, prow))
        for r2 in list(cols.get(pc, ())):
            row2 = rows[r2]
            factor = f.neg(row2[pc])
            for c, v in prow.items():
                cur = row2.get(c)
                if cur is None:
                    nv = f.mul(factor, v)
                    if not fz(nv):
                        row2[c] = nv
                        cols.setdefault(c, set()).add(r2)
                else:
                    nv = f.add(cur, f.mul(factor, v))
                    if fz(nv):
                        del row2[c]
                        s = cols.get(c)
                        if s is not None:
                            s.discard(r2)
                            if not s:
                                del cols[c]
                    else:
                        row2[c] = nv
            new = len(row2)
            if new == 0:
                rows.pop(r2)
                resize(r2, 0)
            else:
                resize(r2, new)
                if new < minsize:
                    minsize = new
    rank = len(pivots)
    if not reduce:
        return rank, pivots, None
    # Back-substitution.  When pivot i was formed, every earlier pivot
    # column had already been cleared from its row, so row i can only
    # contain pivot columns of later pivots; walking i downwards makes a
    # single pass sufficient.
    col_of = {pc: i for i, (pc, _) in enumerate(done)}
    for i in range(len(done) - 1, -1, -1):
        pc_i, row_i = done[i]
        later = [c for c in row_i if c != pc_i and c in col_of]
        for c in later:
            v = row_i.pop(c)
            nv = f.neg(v)
            row_j = done[col_of[c]][1]
            for cc, vv in row_j.items():
                if cc == c:
                    continue
                cur = row_i.get(cc)
                val = f.mul(nv, vv) if cur is None else f.add(cur, f.mul(nv, vv))
                if fz(val):
                    row_i.pop(cc, None)
                else:
                    row_i[cc] = val
    return rank, pivots, done
