"""Finite-dimensional algebras by structure constants and their modules."""

from __future__ import annotations

import itertools
import random

from .linalg import Matrix, span_rank
from .errors import NotAModuleError

_EXHAUSTIVE_LIMIT = 24


class FinDimAlgebra:
    """Associative unital algebra over an exact field.

    mult[i][j] is the coefficient vector of basis_i * basis_j in the
    chosen basis; unit is the coefficient vector of 1.
    """

    def __init__(self, field, labels, mult, unit, name=""):
        self.field = field
        self.labels = list(labels)
        self.dim = len(self.labels)
        self.mult = mult
        self.unit = list(unit)
        self.name = name
        if len(mult) != self.dim or any(len(row) != self.dim for row in mult):
            raise ValueError("structure constant table has wrong shape")

    def zero_vec(self):
        return [self.field.zero] * self.dim

    def basis_vec(self, i):
        v = self.zero_vec()
        v[i] = self.field.one
        return v

    def multiply(self, x, y):
        f = self.field
        fz = f.is_zero
        out = self.zero_vec()
        for i, a in enumerate(x):
            if fz(a):
                continue
            for j, b in enumerate(y):
                if fz(b):
                    continue
                ab = f.mul(a, b)
                row = self.mult[i][j]
                for k, c in enumerate(row):
                    if not fz(c):
                        out[k] = f.add(out[k], f.mul(ab, c))
        return out

    def left_regular(self, i) -> Matrix:
        """Matrix of left multiplication by basis_i in the basis."""
        cols = [self.mult[i][j] for j in range(self.dim)]
        return Matrix.from_columns(self.field, cols)

    def right_regular(self, i) -> Matrix:
        cols = [self.mult[j][i] for j in range(self.dim)]
        return Matrix.from_columns(self.field, cols)

    def opposite(self) -> "FinDimAlgebra":
        mult = [[self.mult[j][i] for j in range(self.dim)] for i in range(self.dim)]
        return FinDimAlgebra(
            self.field, self.labels, mult, self.unit, name=self.name + "^op"
        )

    def verify(self, rng: random.Random | None = None, samples=2000):
        """Check unit axioms and associativity.

        Exhaustive on basis triples up to dimension 24, seeded random
        sampling of triples beyond that.
        """
        f = self.field
        for i in range(self.dim):
            b = self.basis_vec(i)
            if self.multiply(self.unit, b) != b or self.multiply(b, self.unit) != b:
                raise ValueError(f"unit axiom fails on basis element {self.labels[i]}")
        if self.dim <= _EXHAUSTIVE_LIMIT:
            triples = itertools.product(range(self.dim), repeat=3)
        else:
            rng = rng or random.Random(0)
            triples = (
                tuple(rng.randrange(self.dim) for _ in range(3))
                for _ in range(samples)
            )
        for i, j, k in triples:
            bi, bj, bk = (self.basis_vec(t) for t in (i, j, k))
            lhs = self.multiply(self.multiply(bi, bj), bk)
            rhs = self.multiply(bi, self.multiply(bj, bk))
            if lhs != rhs:
                raise ValueError(
                    f"associativity fails on ({self.labels[i]}, {self.labels[j]}, "
                    f"{self.labels[k]})"
                )
        return True

    def regular_module(self) -> "FinDimModule":
        return FinDimModule(
            self, self.dim, [self.left_regular(i) for i in range(self.dim)]
        )

    def __repr__(self):
        return f"FinDimAlgebra({self.name or '?'}, dim={self.dim})"


def algebra_iso_check(a: FinDimAlgebra, b: FinDimAlgebra, phi: Matrix) -> bool:
    """Does the coordinate map phi: a -> b define an algebra isomorphism?"""
    if a.dim != b.dim or phi.rank() != a.dim:
        return False
    if phi.apply(a.unit) != b.unit:
        return False
    for i in range(a.dim):
        for j in range(a.dim):
            lhs = phi.apply(a.mult[i][j])
            rhs = b.multiply(phi.apply(a.basis_vec(i)), phi.apply(a.basis_vec(j)))
            if lhs != rhs:
                return False
    return True


class FinDimModule:
    """Left module over a FinDimAlgebra, given by one action matrix per
    algebra basis element."""

    def __init__(self, algebra: FinDimAlgebra, dim, action, check=False):
        self.algebra = algebra
        self.dim = dim
        self.action = list(action)
        if len(self.action) != algebra.dim:
            raise ValueError("need one action matrix per algebra basis element")
        for m in self.action:
            if m.shape() != (dim, dim):
                raise ValueError("action matrix shape mismatch")
        if check:
            self.verify()

    def verify(self):
        """Assert the action respects unit and all structure constants."""
        alg = self.algebra
        f = alg.field
        unit_mat = self.act_matrix(alg.unit)
        if unit_mat != Matrix.identity(f, self.dim):
            raise NotAModuleError("unit does not act as identity")
        for i in range(alg.dim):
            for j in range(alg.dim):
                lhs = self.action[i] @ self.action[j]
                rhs = self.act_matrix(alg.mult[i][j])
                if lhs != rhs:
                    raise NotAModuleError(
                        f"action fails on ({alg.labels[i]}, {alg.labels[j]})"
                    )
        return True

    def act_matrix(self, coeffs) -> Matrix:
        f = self.algebra.field
        fz = f.is_zero
        out = Matrix.zeros(f, self.dim, self.dim)
        for i, c in enumerate(coeffs):
            if fz(c):
                continue
            m = self.action[i]
            for r in range(self.dim):
                row = m.rows[r]
                orow = out.rows[r]
                for col in range(self.dim):
                    if not fz(row[col]):
                        orow[col] = f.add(orow[col], f.mul(c, row[col]))
        return out

    def act(self, coeffs, vec):
        return self.act_matrix(coeffs).apply(vec)

    def submodule_closure(self, vectors):
        """Basis (echelonized spanning set) of the submodule generated by
        the given vectors."""
        f = self.algebra.field
        basis: list = []

        def add(v):
            if not basis:
                if any(not f.is_zero(x) for x in v):
                    basis.append(v)
                    return True
                return False
            m = Matrix.from_columns(f, basis + [v], self.dim)
            if m.rank() > len(basis):
                basis.append(v)
                return True
            return False

        queue = [list(v) for v in vectors]
        while queue:
            v = queue.pop()
            if add(v):
                for i in range(self.algebra.dim):
                    queue.append(self.action[i].apply(v))
        return basis

    def restrict_to_submodule(self, basis):
        """Module structure on the span of `basis` (must be action stable)."""
        f = self.algebra.field
        mat = Matrix.from_columns(f, basis, self.dim)
        action = []
        for i in range(self.algebra.dim):
            cols = []
            for b in basis:
                w = self.action[i].apply(b)
                sol = mat.solve(w)
                if sol is None:
                    raise ValueError("span is not action stable")
                cols.append(sol)
            action.append(Matrix.from_columns(f, cols, len(basis)))
        return FinDimModule(self.algebra, len(basis), action)

    def change_basis(self, new_basis):
        """Same module expressed in the given basis of the ambient space."""
        return self.restrict_to_submodule(new_basis)

    def quotient_by(self, sub_basis) -> "FinDimModule":
        """Quotient module M / <sub_basis> (the span must be action
        stable); representatives are ambient basis vectors chosen by
        pivoting."""
        f = self.algebra.field
        if not sub_basis:
            return self
        ident = Matrix.identity(f, self.dim)
        stacked = Matrix.from_columns(
            f, list(sub_basis) + ident.columns(), self.dim
        )
        _, pivots = stacked.rref()
        k = len(sub_basis)
        rep_idx = [c - k for c in pivots if c >= k]
        basis_mat = Matrix.from_columns(
            f, list(sub_basis) + [ident.column_vector(i) for i in rep_idx], self.dim
        )
        qdim = len(rep_idx)

        def project(vec):
            sol = basis_mat.solve(vec)
            if sol is None:
                raise ValueError("projection failed")
            return sol[len(sub_basis):]

        action = []
        for i in range(self.algebra.dim):
            cols = [
                project(self.action[i].apply(ident.column_vector(r)))
                for r in rep_idx
            ]
            action.append(Matrix.from_columns(f, cols, qdim))
        return FinDimModule(self.algebra, qdim, action)

    def direct_sum(self, other) -> "FinDimModule":
        f = self.algebra.field
        n, m = self.dim, other.dim
        action = []
        for i in range(self.algebra.dim):
            big = Matrix.zeros(f, n + m, n + m)
            for r in range(n):
                for c in range(n):
                    big.rows[r][c] = self.action[i].rows[r][c]
            for r in range(m):
                for c in range(m):
                    big.rows[n + r][n + c] = other.action[i].rows[r][c]
            action.append(big)
        return FinDimModule(self.algebra, n + m, action)

    def annihilated_by(self, coeff_vectors):
        """Subspace killed by every listed algebra element (a basis)."""
        f = self.algebra.field
        if not coeff_vectors:
            return [
                Matrix.identity(f, self.dim).column_vector(i)
                for i in range(self.dim)
            ]
        stacked_rows = []
        for coeffs in coeff_vectors:
            stacked_rows.extend(self.act_matrix(coeffs).rows)
        return Matrix(f, stacked_rows, self.dim).kernel_basis()


def hom_space(m1: FinDimModule, m2: FinDimModule):
    """Basis of Hom over the algebra: matrices F with F a = a F for all a.

    Returned as a list of dense matrices (m2.dim x m1.dim).
    """
    if m1.algebra is not m2.algebra and m1.algebra.labels != m2.algebra.labels:
        raise ValueError("modules over different algebras")
    f = m1.algebra.field
    n_unknowns = m2.dim * m1.dim
    rows = []
    for i in range(m1.algebra.dim):
        a1 = m1.action[i]
        a2 = m2.action[i]
        # condition F @ a1 - a2 @ F = 0, row by row
        for r in range(m2.dim):
            for c in range(m1.dim):
                coeff = [f.zero] * n_unknowns
                # (F @ a1)[r, c] = sum_k F[r, k] a1[k, c]
                for k in range(m1.dim):
                    v = a1.rows[k][c]
                    if not f.is_zero(v):
                        coeff[r * m1.dim + k] = f.add(coeff[r * m1.dim + k], v)
                # (a2 @ F)[r, c] = sum_k a2[r, k] F[k, c]
                for k in range(m2.dim):
                    v = a2.rows[r][k]
                    if not f.is_zero(v):
                        idx = k * m1.dim + c
                        coeff[idx] = f.sub(coeff[idx], v)
                rows.append(coeff)
    kernel = Matrix(f, rows, n_unknowns).kernel_basis() if rows else []
    homs = []
    for v in kernel:
        homs.append(
            Matrix(f, [v[r * m1.dim:(r + 1) * m1.dim] for r in range(m2.dim)],
                   m1.dim)
        )
    return homs


def module_iso_exists(m1: FinDimModule, m2: FinDimModule) -> bool:
    if m1.dim != m2.dim:
        return False
    fld = m1.algebra.field
    homs = hom_space(m1, m2)
    if not homs:
        return m1.dim == 0
    # random combinations almost surely hit an iso when one exists; fall
    # back to a small deterministic search over coefficient patterns
    rng = random.Random(12345)
    for _ in range(64):
        coeffs = [fld.coerce(rng.randint(-3, 3)) for _ in homs]
        cand = Matrix.zeros(fld, m1.dim, m1.dim)
        for c, h in zip(coeffs, homs):
            if not fld.is_zero(c):
                cand = cand + h.scale(c)
        if cand.rank() == m1.dim:
            return True
    return False
