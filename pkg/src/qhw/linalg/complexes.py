"""Bounded complexes of finite-dimensional spaces and their cohomology."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import DegreeOutsideWindowError
from .matrix import Matrix
from .sparse import SparseMatrix


@dataclass
class CohomologyResult:
    degree: int
    dim: int
    truncated: bool
    representatives: list | None = None


class BoundedComplex:
    """A finite window lo..hi of spaces with differentials d^n: X^n -> X^{n+1}.

    Differentials are given for lo <= n < hi (shape dims[n+1] x dims[n]);
    degrees outside the window are treated as zero.  d o d = 0 is
    asserted at construction on every representable pair.
    """

    def __init__(self, field, lo, hi, dims, diffs, check=True):
        if lo > hi:
            raise ValueError("empty window")
        self.field = field
        self.lo = lo
        self.hi = hi
        self.dims = {n: int(dims.get(n, 0)) for n in range(lo, hi + 1)}
        self.diffs = {}
        for n in range(lo, hi):
            d = diffs.get(n)
            if d is None:
                d = SparseMatrix(field, self.dims[n + 1], self.dims[n])
            elif isinstance(d, Matrix):
                d = SparseMatrix.from_dense(d)
            if d.shape() != (self.dims[n + 1], self.dims[n]):
                raise ValueError(
                    f"differential at degree {n} has shape {d.shape()}, "
                    f"expected {(self.dims[n + 1], self.dims[n])}"
                )
            self.diffs[n] = d
        if check:
            for n in range(lo, hi - 1):
                if not (self.diffs[n + 1] @ self.diffs[n]).is_zero():
                    raise ValueError(f"d o d != 0 at degree {n}")

    def differential(self, n) -> SparseMatrix:
        d = self.diffs.get(n)
        if d is not None:
            return d
        tgt = self.dims.get(n + 1, 0)
        src = self.dims.get(n, 0)
        return SparseMatrix(self.field, tgt, src)

    def cohomology(self, n, representatives=False) -> CohomologyResult:
        """dim ker d^n - dim im d^{n-1}; degrees at the window edge are
        computed with zero maps and flagged truncated."""
        if n < self.lo or n > self.hi:
            raise DegreeOutsideWindowError(
                f"degree {n} outside window [{self.lo}, {self.hi}]"
            )
        truncated = n in (self.lo, self.hi)
        d_out = self.differential(n)
        d_in = self.differential(n - 1)
        ker_dim = self.dims[n] - d_out.rank()
        im_dim = d_in.rank()
        dim = ker_dim - im_dim
        reps = None
        if representatives:
            reps = self._representatives(n, d_out, d_in)
            assert len(reps) == dim
        return CohomologyResult(degree=n, dim=dim, truncated=truncated,
                                representatives=reps)

    def _representatives(self, n, d_out, d_in):
        field = self.field
        kernel = d_out.kernel_basis()
        image = d_in.to_dense().image_basis()
        if not kernel:
            return []
        stacked = Matrix.from_columns(field, image + kernel, self.dims[n])
        _, pivots = stacked.rref()
        k = len(image)
        return [kernel[c - k] for c in pivots if c >= k]

    def betti_numbers(self, representatives=False):
        return [
            self.cohomology(n, representatives=representatives)
            for n in range(self.lo, self.hi + 1)
        ]

    def conjugated(self, change):
        """Conjugate all differentials by per-degree invertible matrices.

        change: dict degree -> dense Matrix g_n (dims[n] x dims[n]); the new
        differential is g_{n+1} d^n g_n^{-1}.  Used to test basis
        independence of cohomology.
        """
        field = self.field
        inv = {}
        for n, g in change.items():
            ident = Matrix.identity(field, g.nrows)
            cols = [g.solve(ident.column_vector(c)) for c in range(g.nrows)]
            if any(c is None for c in cols):
                raise ValueError(f"change of basis at degree {n} not invertible")
            inv[n] = Matrix.from_columns(field, cols)
        diffs = {}
        for n in range(self.lo, self.hi):
            d = self.diffs[n].to_dense()
            g_t = change.get(n + 1, Matrix.identity(field, self.dims[n + 1]))
            g_s_inv = inv.get(n, Matrix.identity(field, self.dims[n]))
            diffs[n] = g_t @ d @ g_s_inv
        return BoundedComplex(field, self.lo, self.hi, self.dims, diffs)
