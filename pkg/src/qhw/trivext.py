"""Trivial extensions of strongly graded stages, complete resolutions,
stable Hom with a brute-force oracle, Gorenstein-projective splitting,
and the finite singularity-category model.

A GradedStageInput packages finitely many components A^n of a strongly
graded algebra with semisimple A^0: the degree-0 algebra by structure
constants, a basis per component, and all multiplication pairings
A^n x A^m -> A^{n+m} inside the window.  The trivial extension is
Lambda = A^0 x A^{-1} with (a, b)(a', b') = (aa', ab' + ba').
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import (
    HasSinkError,
    InvalidStageError,
    NotGorensteinProjectiveError,
    NotSemisimpleError,
    StageNotStronglyGradedError,
    WindowNotGeneratedError,
)
from .findim import FinDimAlgebra, FinDimModule, hom_space
from .linalg import BoundedComplex, Matrix, QQ
from .quiver import Quiver


class TensorOverA0:
    """X (x)_{A0} M presented as the quotient of X (x)_k M by the
    relations x.a (x) m - x (x) a.m.

    right_act_x[t]: X -> X is x |-> x . a_t; left_act_m[t]: M -> M is
    m |-> a_t . m.  Representatives are pure tensors of basis vectors
    chosen by pivoting, so `include` and `project` convert between
    quotient coordinates and X (x)_k M coordinates.
    """

    def __init__(self, field, x_dim, m_dim, right_act_x, left_act_m):
        self.field = field
        self.x_dim = x_dim
        self.m_dim = m_dim
        big = x_dim * m_dim
        rels = []
        for t in range(len(right_act_x)):
            rx = right_act_x[t]
            lm = left_act_m[t]
            for xi in range(x_dim):
                for mi in range(m_dim):
                    vec = [field.zero] * big
                    for xj in range(x_dim):
                        c = rx.rows[xj][xi]
                        if not field.is_zero(c):
                            vec[xj * m_dim + mi] = field.add(
                                vec[xj * m_dim + mi], c
                            )
                    for mj in range(m_dim):
                        c = lm.rows[mj][mi]
                        if not field.is_zero(c):
                            idx = xi * m_dim + mj
                            vec[idx] = field.sub(vec[idx], c)
                    if any(not field.is_zero(v) for v in vec):
                        rels.append(vec)
        if rels:
            rel_mat = Matrix.from_columns(field, rels, big)
            red, pivots = rel_mat.rref()
            rel_basis = [rel_mat.column_vector(c) for c in pivots]
        else:
            rel_basis = []
        self.rel_basis = rel_basis
        ident = Matrix.identity(field, big)
        stacked = Matrix.from_columns(
            field, rel_basis + ident.columns(), big
        )
        _, pivots = stacked.rref()
        k = len(rel_basis)
        self.rep_pairs = [c - k for c in pivots if c >= k]
        self.dim = len(self.rep_pairs)
        self._solver = Matrix.from_columns(
            field,
            rel_basis + [ident.column_vector(i) for i in self.rep_pairs],
            big,
        )

    def project(self, vec):
        """X (x)_k M coordinates -> quotient coordinates."""
        sol = self._solver.solve(vec)
        if sol is None:
            raise AssertionError("tensor projection failed")
        return sol[len(self.rel_basis):]

    def include(self, coords):
        """Quotient coordinates -> a representative in X (x)_k M."""
        big = self.x_dim * self.m_dim
        vec = [self.field.zero] * big
        for c, idx in zip(coords, self.rep_pairs):
            vec[idx] = c
        return vec

    def pure(self, xi, mi):
        big = self.x_dim * self.m_dim
        vec = [self.field.zero] * big
        vec[xi * self.m_dim + mi] = self.field.one
        return self.project(vec)

    def factors_through(self, phi_k: Matrix) -> bool:
        """Does a map defined on X (x)_k M kill the relations?"""
        for rel in self.rel_basis:
            if any(
                not self.field.is_zero(v) for v in phi_k.apply(rel)
            ):
                return False
        return True

    def induced_map(self, phi_k: Matrix) -> Matrix:
        """The induced map on the quotient, as a matrix on quotient
        coordinates (phi_k must kill the relations)."""
        cols = [phi_k.apply(self.include(unit)) for unit in
                Matrix.identity(self.field, self.dim).columns()]
        return Matrix.from_columns(self.field, cols, self.dim)


@dataclass
class Block:
    """One matrix block of a semisimple algebra: units[(i, j)] are the
    coefficient vectors of a full system of matrix units."""

    label: str
    size: int
    units: dict


class GradedStageInput:
    def __init__(self, field, a0: FinDimAlgebra, lo, hi, comp_labels,
                 pairings, blocks=None, name=""):
        self.field = field
        self.a0 = a0
        self.lo = lo
        self.hi = hi
        self.comp_labels = {n: list(comp_labels[n]) for n in range(lo, hi + 1)}
        if self.comp_labels.get(0) is None or len(self.comp_labels[0]) != a0.dim:
            raise InvalidStageError("degree-0 component must match the algebra")
        self.pairings = pairings
        self.blocks = blocks
        self.name = name
        self._unit_coords = None

    def dim(self, n):
        if n < self.lo or n > self.hi:
            return None
        return len(self.comp_labels[n])

    def require(self, n):
        if self.dim(n) is None:
            raise WindowNotGeneratedError(
                f"stage window [{self.lo}, {self.hi}] misses degree {n}"
            )
        return self.dim(n)

    def pairing_table(self, n, m):
        if (n, m) not in self.pairings:
            raise WindowNotGeneratedError(f"missing pairing ({n}, {m})")
        return self.pairings[(n, m)]

    def pair(self, n, m, xvec, yvec):
        """Multiply x in A^n by y in A^m; result in A^{n+m} coordinates."""
        f = self.field
        table = self.pairing_table(n, m)
        out = [f.zero] * self.require(n + m)
        for i, a in enumerate(xvec):
            if f.is_zero(a):
                continue
            row = table[i]
            for j, b in enumerate(yvec):
                if f.is_zero(b):
                    continue
                ab = f.mul(a, b)
                for k, c in enumerate(row[j]):
                    if not f.is_zero(c):
                        out[k] = f.add(out[k], f.mul(ab, c))
        return out

    def left_action(self, n):
        """Matrices of a_t . (-) on A^n, one per A^0 basis element."""
        f = self.field
        table = self.pairing_table(0, n)
        dim = self.require(n)
        out = []
        for t in range(self.a0.dim):
            cols = [table[t][j] for j in range(dim)]
            out.append(Matrix.from_columns(f, cols, dim))
        return out

    def right_action(self, n):
        f = self.field
        table = self.pairing_table(n, 0)
        dim = self.require(n)
        out = []
        for t in range(self.a0.dim):
            cols = [table[j][t] for j in range(dim)]
            out.append(Matrix.from_columns(f, cols, dim))
        return out

    def tensor(self, n, m) -> TensorOverA0:
        """A^n (x)_{A0} A^m."""
        return TensorOverA0(
            self.field,
            self.require(n),
            self.require(m),
            self.right_action(n),
            self.left_action(m),
        )

    def pairing_matrix_on_tensor(self, n, m) -> Matrix:
        """The multiplication map A^n (x)_k A^m -> A^{n+m}."""
        f = self.field
        dim_n, dim_m = self.require(n), self.require(m)
        table = self.pairing_table(n, m)
        cols = []
        for i in range(dim_n):
            for j in range(dim_m):
                cols.append(table[i][j])
        return Matrix.from_columns(f, cols, self.require(n + m))

    def validate(self, check_invertibility=True):
        """Stage axioms: unit, pairing associativity, strong gradedness
        at degree +-1, and bijectivity of the induced tensor maps."""
        f = self.field
        self.a0.verify()
        ident_fail = None
        for n in range(self.lo, self.hi + 1):
            dim = self.dim(n)
            if dim == 0:
                raise StageNotStronglyGradedError(
                    f"component A^{n} is zero; the stage cannot be strongly graded"
                )
            lid = Matrix.zeros(f, dim, dim)
            for t, c in enumerate(self.a0.unit):
                if not f.is_zero(c):
                    lid = lid + self.left_action(n)[t].scale(c)
            rid = Matrix.zeros(f, dim, dim)
            for t, c in enumerate(self.a0.unit):
                if not f.is_zero(c):
                    rid = rid + self.right_action(n)[t].scale(c)
            if lid != Matrix.identity(f, dim) or rid != Matrix.identity(f, dim):
                raise InvalidStageError(f"unit does not act as identity on A^{n}")
        # associativity on basis triples
        for n in range(self.lo, self.hi + 1):
            for m in range(self.lo, self.hi + 1):
                if not (self.lo <= n + m <= self.hi):
                    continue
                for l in range(self.lo, self.hi + 1):
                    if not (self.lo <= m + l <= self.hi):
                        continue
                    if not (self.lo <= n + m + l <= self.hi):
                        continue
                    self._assoc_check(n, m, l)
        # strong gradedness through degree +-1
        for n, m in ((1, -1), (-1, 1)):
            if self.dim(n) is None or self.dim(m) is None:
                raise WindowNotGeneratedError(
                    "stage window must contain degrees -1 and 1"
                )
            if self.pairing_matrix_on_tensor(n, m).rank() != self.a0.dim:
                raise StageNotStronglyGradedError(
                    f"pairing A^{n} A^{m} does not cover A^0"
                )
        if check_invertibility:
            for n in range(self.lo, self.hi + 1):
                for m in range(self.lo, self.hi + 1):
                    if not (self.lo <= n + m <= self.hi):
                        continue
                    t = self.tensor(n, m)
                    target = self.require(n + m)
                    phi_k = self.pairing_matrix_on_tensor(n, m)
                    if not t.factors_through(phi_k):
                        raise InvalidStageError(
                            f"multiplication A^{n} x A^{m} is not balanced"
                        )
                    induced = t.induced_map(phi_k)
                    if t.dim != target or induced.rank() != target:
                        raise StageNotStronglyGradedError(
                            f"A^{n} (x) A^{m} -> A^{n + m} is not bijective"
                        )
        return True

    def _assoc_check(self, n, m, l):
        f = self.field
        dn, dm, dl = self.require(n), self.require(m), self.require(l)
        for i in range(dn):
            x = [f.one if k == i else f.zero for k in range(dn)]
            for j in range(dm):
                y = [f.one if k == j else f.zero for k in range(dm)]
                xy = self.pair(n, m, x, y)
                for k in range(dl):
                    z = [f.one if t == k else f.zero for t in range(dl)]
                    lhs = self.pair(n + m, l, xy, z)
                    rhs = self.pair(n, m + l, x, self.pair(m, l, y, z))
                    if lhs != rhs:
                        raise InvalidStageError(
                            f"pairing not associative on A^{n} x A^{m} x A^{l}"
                        )

    def unit_vec(self):
        return list(self.a0.unit)

    def to_matrix_units(self, vec):
        """Express an A^0 element in the block matrix units."""
        if self.blocks is None:
            raise NotSemisimpleError("no semisimple block data on this stage")
        if self._unit_coords is None:
            cols = []
            self._unit_triples = []
            for b in self.blocks:
                for i in range(b.size):
                    for j in range(b.size):
                        cols.append(b.units[(i, j)])
                        self._unit_triples.append((b.label, i, j))
            self._unit_coords = Matrix.from_columns(self.field, cols, self.a0.dim)
        sol = self._unit_coords.solve(vec)
        if sol is None:
            raise NotSemisimpleError("block units do not span the algebra")
        return {
            t: c
            for t, c in zip(self._unit_triples, sol)
            if not self.field.is_zero(c)
        }


def dual_numbers_stage(field=QQ, lo=-5, hi=5) -> GradedStageInput:
    """The Laurent stage with every component one-dimensional; its
    trivial extension is the dual numbers."""
    a0 = FinDimAlgebra(field, ["e"], [[[field.one]]], [field.one], name="k")
    labels = {n: [f"t^{n}"] for n in range(lo, hi + 1)}
    pairings = {}
    for n in range(lo, hi + 1):
        for m in range(lo, hi + 1):
            if lo <= n + m <= hi:
                pairings[(n, m)] = [[[field.one]]]
    blocks = [Block(label="e", size=1, units={(0, 0): [field.one]})]
    return GradedStageInput(field, a0, lo, hi, labels, pairings, blocks,
                            name="dual-numbers stage")


def stage_from_leavitt(quiver: Quiver, stage: int, side="minus",
                       window=(-5, 5), field=QQ) -> GradedStageInput:
    """Stage slices of L(Q) as a GradedStageInput.

    side="minus" grades by the Leavitt degree (so A^{-1} = L^{-1} and
    the trivial extension is the stage of Lambda^-); side="plus" flips
    the grading (A^{-1} = L^{1}, giving the stage of Lambda^+).  The
    slices of a cycle-like quiver close under multiplication; when they
    do not, the stage is rejected.
    """
    from .leavitt import RewriteSystem, graded_basis, stage_algebra

    if not quiver.is_sink_free():
        raise HasSinkError(f"{quiver!r} has sinks {quiver.sinks()}")
    lo, hi = window
    if lo > -1 or hi < 1:
        raise WindowNotGeneratedError("window must contain degrees -1 and 1")
    rs = RewriteSystem(quiver, field)
    sa = stage_algebra(rs, stage)
    if not sa.blocks_verified:
        raise StageNotStronglyGradedError(
            f"stage algebra of {quiver!r} has no certified matrix-unit "
            f"decomposition"
        )
    sgn = 1 if side == "minus" else -1
    slices = {}
    for n in range(lo, hi + 1):
        if n == 0:
            slices[n] = sa.monomials
        else:
            slices[n] = graded_basis(rs, sgn * n, 2 * stage + abs(n))
    indexes = {n: {m: i for i, m in enumerate(slices[n])} for n in slices}
    f = field

    def coords(n, elt):
        vec = [f.zero] * len(slices[n])
        for m, c in elt.terms.items():
            pos = indexes[n].get(m)
            if pos is None:
                raise StageNotStronglyGradedError(
                    f"stage-{stage} slices of {quiver!r} are not closed under "
                    f"multiplication (degree {n} misses {m.format()})"
                )
            vec[pos] = c
        return vec

    pairings = {}
    for n in range(lo, hi + 1):
        for m in range(lo, hi + 1):
            if not (lo <= n + m <= hi):
                continue
            table = []
            for mono_x in slices[n]:
                row = []
                ex = rs.element({mono_x: f.one})
                for mono_y in slices[m]:
                    ey = rs.element({mono_y: f.one})
                    row.append(coords(n + m, ex * ey))
                table.append(row)
            pairings[(n, m)] = table

    # block matrix units, pulled back through the certified stage iso
    blocks = []
    triples = []
    for b in sa.blocks:
        for i in range(b.size):
            for j in range(b.size):
                triples.append((b.vertex, i, j))
    units_by_block = {b.vertex: {} for b in sa.blocks}
    for t_idx, (v, i, j) in enumerate(triples):
        target = [f.zero] * len(triples)
        target[t_idx] = f.one
        sol = sa.unit_map.solve(target)
        if sol is None:
            raise StageNotStronglyGradedError("matrix units not invertible")
        units_by_block[v][(i, j)] = sol
    for b in sa.blocks:
        blocks.append(Block(label=b.vertex, size=b.size, units=units_by_block[b.vertex]))

    s = GradedStageInput(
        field, sa.algebra, lo, hi,
        {n: [m.format() for m in slices[n]] for n in slices},
        pairings, blocks,
        name=f"L({quiver!r}) stage {stage} ({side})",
    )
    s.validate()
    return s


# -- the trivial extension ----------------------------------------------------


class TrivialExtension:
    """Lambda = A^0 x A^{-1} on the basis A^0 + A^{-1}."""

    def __init__(self, stage: GradedStageInput):
        self.stage = stage
        f = stage.field
        a0 = stage.a0
        self.dim0 = a0.dim
        self.dimx = stage.require(-1)
        dim = self.dim0 + self.dimx
        labels = [f"({lab}, 0)" for lab in a0.labels] + [
            f"(0, {lab})" for lab in stage.comp_labels[-1]
        ]

        def zero():
            return [f.zero] * dim

        left_x = stage.left_action(-1)   # a . x
        right_x = stage.right_action(-1)  # x . a
        mult = [[zero() for _ in range(dim)] for _ in range(dim)]
        for i in range(self.dim0):
            for j in range(self.dim0):
                vec = zero()
                for k, c in enumerate(a0.mult[i][j]):
                    vec[k] = c
                mult[i][j] = vec
        for i in range(self.dim0):
            for j in range(self.dimx):
                vec = zero()
                col = [left_x[i].rows[r][j] for r in range(self.dimx)]
                for r, c in enumerate(col):
                    vec[self.dim0 + r] = c
                mult[i][self.dim0 + j] = vec
        for i in range(self.dimx):
            for j in range(self.dim0):
                vec = zero()
                col = [right_x[j].rows[r][i] for r in range(self.dimx)]
                for r, c in enumerate(col):
                    vec[self.dim0 + r] = c
                mult[self.dim0 + i][j] = vec
        # X . X = 0: already zero vectors
        unit = zero()
        for k, c in enumerate(a0.unit):
            unit[k] = c
        self.algebra = FinDimAlgebra(f, labels, mult, unit,
                                     name=f"triv-ext({stage.name})")
        self.algebra.verify()

    @property
    def field(self):
        return self.stage.field

    @property
    def dim(self):
        return self.algebra.dim

    def embed0(self, vec):
        return list(vec) + [self.field.zero] * self.dimx

    def embedx(self, vec):
        return [self.field.zero] * self.dim0 + list(vec)

    def x_basis_elements(self):
        return [self.embedx([self.field.one if k == i else self.field.zero
                             for k in range(self.dimx)])
                for i in range(self.dimx)]

    def a0_module(self) -> FinDimModule:
        """A^0 = Lambda / A^{-1} as a left Lambda-module."""
        f = self.field
        action = []
        for i in range(self.dim0):
            action.append(self.stage.a0.left_regular(i))
        for _ in range(self.dimx):
            action.append(Matrix.zeros(f, self.dim0, self.dim0))
        return FinDimModule(self.algebra, self.dim0, action)

    def simple_modules(self):
        """Simple modules, one per block of A^0, with A^{-1} acting by 0."""
        stage = self.stage
        if stage.blocks is None:
            raise NotSemisimpleError("no block data")
        f = self.field
        out = []
        for b in stage.blocks:
            dim = b.size
            action = []
            for i in range(self.dim0):
                basis_vec = [f.one if k == i else f.zero
                             for k in range(self.dim0)]
                units = stage.to_matrix_units(basis_vec)
                m = Matrix.zeros(f, dim, dim)
                for (lab, r, c), coeff in units.items():
                    if lab == b.label:
                        m.rows[r][c] = f.add(m.rows[r][c], coeff)
                action.append(m)
            for _ in range(self.dimx):
                action.append(Matrix.zeros(f, dim, dim))
            mod = FinDimModule(self.algebra, dim, action)
            mod.verify()
            out.append((b.label, mod))
        return out

    def indecomposable_projectives(self):
        """Lambda e for the primitive idempotents e = E^b_{00}."""
        stage = self.stage
        if stage.blocks is None:
            raise NotSemisimpleError("no block data")
        reg = self.algebra.regular_module()
        out = []
        for b in stage.blocks:
            e = self.embed0(b.units[(0, 0)])
            basis = reg.submodule_closure([e])
            out.append((b.label, reg.restrict_to_submodule(basis)))
        return out


def build_trivext(stage: GradedStageInput) -> TrivialExtension:
    stage.validate(check_invertibility=False)
    return TrivialExtension(stage)


# -- Lambda-modules and stable Hom ---------------------------------------------


class LambdaModule:
    """A verified Lambda-module with its phi data.

    phi: A^{-1} (x)_{A0} M -> M is (0, b) (x) m |-> (0, b).m;
    K_M = {m : A^{-1}.m = 0} contains Im phi.
    """

    def __init__(self, ext: TrivialExtension, module: FinDimModule):
        alg = module.algebra
        if alg is not ext.algebra and not (
            alg.labels == ext.algebra.labels and alg.mult == ext.algebra.mult
        ):
            raise ValueError("module is not over this trivial extension")
        module.verify()
        self.ext = ext
        self.module = module
        f = ext.field
        x_mats = [module.action[ext.dim0 + i] for i in range(ext.dimx)]
        self.k_m = module.annihilated_by(
            [[f.one if k == ext.dim0 + i else f.zero for k in range(ext.dim)]
             for i in range(ext.dimx)]
        )
        im_vecs = []
        for xm in x_mats:
            im_vecs.extend(xm.columns())
        im_mat = Matrix.from_columns(f, im_vecs, module.dim)
        self.im_phi = im_mat.image_basis()
        # tensor A^{-1} (x)_{A0} M
        a0_act_m = [module.action[i] for i in range(ext.dim0)]
        self.tensor = TensorOverA0(
            f, ext.dimx, module.dim, ext.stage.right_action(-1), a0_act_m
        )
        cols = []
        for xi in range(ext.dimx):
            for mi in range(module.dim):
                unit = [f.one if k == mi else f.zero for k in range(module.dim)]
                cols.append(x_mats[xi].apply(unit))
        self.phi_k = Matrix.from_columns(f, cols, module.dim)
        if not self.tensor.factors_through(self.phi_k):
            raise AssertionError("phi does not factor through the tensor")
        self.phi = self.tensor.induced_map(self.phi_k)

    def verify_invariants(self):
        """phi o (id (x) phi) = 0, Im phi <= K_M, and Ker phi = A^{-1} (x) K_M."""
        ext = self.ext
        f = ext.field
        mod = self.module
        for i in range(ext.dimx):
            for j in range(ext.dimx):
                comp = mod.action[ext.dim0 + i] @ mod.action[ext.dim0 + j]
                if not comp.is_zero():
                    return False
        from .linalg import span_contains
        for v in self.im_phi:
            if not span_contains(f, self.k_m, v):
                return False
        ker_dim = self.tensor.dim - Matrix.from_columns(
            f, [self.phi.column_vector(c) for c in range(self.phi.ncols)],
            self.phi.nrows,
        ).rank() if self.tensor.dim else 0
        if self.k_m:
            sub = mod.restrict_to_submodule(self.k_m)
            t_k = TensorOverA0(
                f, ext.dimx, sub.dim, ext.stage.right_action(-1),
                [sub.action[i] for i in range(ext.dim0)],
            )
            expected = t_k.dim
        else:
            expected = 0
        return ker_dim == expected

    def stable_hom_formula(self):
        """(dimension, representative vectors) of K_M / Im phi_M."""
        f = self.ext.field
        dim_k = len(self.k_m)
        if dim_k == 0:
            return 0, []
        stacked = Matrix.from_columns(
            f, self.im_phi + self.k_m, self.module.dim
        )
        _, pivots = stacked.rref()
        k = len(self.im_phi)
        reps = [self.k_m[c - k] for c in pivots if c >= k]
        return dim_k - len(self.im_phi), reps


def resolution_term(ext: TrivialExtension, n) -> FinDimModule:
    """P^n = A^n + A^{n-1} with (a, b).(x, y) = (ax, ay + bx)."""
    stage = ext.stage
    f = ext.field
    da, db = stage.require(n), stage.require(n - 1)
    dim = da + db
    left_n = stage.left_action(n)
    left_n1 = stage.left_action(n - 1)
    action = []
    for i in range(ext.dim0):
        m = Matrix.zeros(f, dim, dim)
        for r in range(da):
            for c in range(da):
                m.rows[r][c] = left_n[i].rows[r][c]
        for r in range(db):
            for c in range(db):
                m.rows[da + r][da + c] = left_n1[i].rows[r][c]
        action.append(m)
    table = stage.pairing_table(-1, n)  # b . x in A^{n-1}
    for i in range(ext.dimx):
        m = Matrix.zeros(f, dim, dim)
        for c in range(da):
            vec = table[i][c]
            for r, v in enumerate(vec):
                m.rows[da + r][c] = v
        action.append(m)
    mod = FinDimModule(ext.algebra, dim, action)
    mod.verify()
    return mod


@dataclass
class StableHomResult:
    formula_dim: int
    oracle_dim: int
    representatives: list
    iso_matched: bool
    approximation_ok: bool

    @property
    def passed(self):
        return (
            self.formula_dim == self.oracle_dim
            and self.iso_matched
            and self.approximation_ok
        )


def stable_hom(ext: TrivialExtension, module: FinDimModule) -> StableHomResult:
    """The stable Hom from A^0: formula side K_M / Im phi against the
    brute-force oracle (solve for all Hom_Lambda(A^0, M), quotient by
    the maps factoring through the projective approximation d: A^0 -> P^1,
    and match the two through f |-> f(1))."""
    f = ext.field
    lm = LambdaModule(ext, module)
    formula_dim, reps = lm.stable_hom_formula()

    a0mod = ext.a0_module()
    homs = hom_space(a0mod, module)
    p1 = resolution_term(ext, 1)
    d_cols = []
    for i in range(ext.dim0):
        vec = [f.zero] * p1.dim
        vec[ext.stage.require(1) + i] = f.one
        d_cols.append(vec)
    d_mat = Matrix.from_columns(f, d_cols, p1.dim)  # a |-> (0, a)
    homs_p1 = hom_space(p1, module)
    through = [g @ d_mat for g in homs_p1]

    def flat(m):
        return [x for row in m.rows for x in row]

    hom_flat = [flat(h) for h in homs]
    through_flat = [flat(g) for g in through]
    ncoords = module.dim * ext.dim0
    rank_homs = Matrix.from_columns(f, hom_flat, ncoords).rank() if hom_flat else 0
    rank_p = Matrix.from_columns(f, through_flat, ncoords).rank() if through_flat else 0
    rank_both = Matrix.from_columns(
        f, hom_flat + through_flat, ncoords
    ).rank() if hom_flat or through_flat else 0
    # maps factoring through projectives form a subspace of Hom
    subspace_ok = rank_both == rank_homs
    oracle_dim = rank_homs - rank_p

    # f |-> f(1) matches Hom with K_M and the projective part with Im phi
    unit = ext.stage.unit_vec()
    one_images = [h.apply(unit) for h in homs]
    through_images = [g.apply(unit) for g in through]
    from .linalg import span_rank
    iso_matched = (
        subspace_ok
        and span_rank(f, one_images, module.dim) == len(lm.k_m) == rank_homs
        and span_rank(f, through_images + lm.im_phi, module.dim)
        == span_rank(f, through_images, module.dim)
        == len(lm.im_phi)
        == rank_p
    )

    # d is a left Lambda-Proj-approximation: Hom(A^0, Lambda) factors through d
    reg = ext.algebra.regular_module()
    homs_to_free = hom_space(a0mod, reg)
    homs_p1_free = hom_space(p1, reg)
    through_free = [flat(g @ d_mat) for g in homs_p1_free]
    free_flat = [flat(h) for h in homs_to_free]
    nfree = ext.dim * ext.dim0
    approx_ok = (
        Matrix.from_columns(f, free_flat + through_free, nfree).rank()
        == Matrix.from_columns(f, through_free, nfree).rank()
        if free_flat or through_free
        else True
    )
    return StableHomResult(
        formula_dim=formula_dim,
        oracle_dim=oracle_dim,
        representatives=reps,
        iso_matched=iso_matched,
        approximation_ok=approx_ok,
    )


@dataclass
class StableEndoResult:
    stable_dim: int
    a0_dim: int
    right_mult_is_iso: bool
    anti_multiplicative: bool

    @property
    def passed(self):
        return (
            self.stable_dim == self.a0_dim
            and self.right_mult_is_iso
            and self.anti_multiplicative
        )


def stable_endo_ring(ext: TrivialExtension) -> StableEndoResult:
    """Stable endomorphisms of A^0 computed by the oracle, compared with
    (A^0)^op acting by right multiplications."""
    f = ext.field
    a0 = ext.stage.a0
    a0mod = ext.a0_module()
    homs = hom_space(a0mod, a0mod)
    p1 = resolution_term(ext, 1)
    d_cols = []
    for i in range(ext.dim0):
        vec = [f.zero] * p1.dim
        vec[ext.stage.require(1) + i] = f.one
        d_cols.append(vec)
    d_mat = Matrix.from_columns(f, d_cols, p1.dim)
    through = [g @ d_mat for g in hom_space(p1, a0mod)]

    def flat(m):
        return [x for row in m.rows for x in row]

    n2 = ext.dim0 * ext.dim0
    rank_homs = Matrix.from_columns(f, [flat(h) for h in homs], n2).rank() if homs else 0
    rank_p = Matrix.from_columns(f, [flat(g) for g in through], n2).rank() if through else 0
    stable_dim = rank_homs - rank_p

    rights = [a0.right_regular(i) for i in range(a0.dim)]
    right_flat = [flat(r) for r in rights]
    all_rank = Matrix.from_columns(
        f, right_flat + [flat(g) for g in through], n2
    ).rank()
    is_iso = (
        Matrix.from_columns(f, right_flat, n2).rank() == a0.dim
        and all_rank == rank_homs
        and stable_dim == a0.dim
    )
    anti = True
    for i in range(a0.dim):
        for j in range(a0.dim):
            # r_{b_i} o r_{b_j} should be right multiplication by b_j b_i
            comp = rights[i] @ rights[j]
            prod = a0.mult[j][i]
            expected = Matrix.zeros(f, a0.dim, a0.dim)
            for k, c in enumerate(prod):
                if not f.is_zero(c):
                    expected = expected + a0.right_regular(k).scale(c)
            if comp != expected:
                anti = False
    return StableEndoResult(
        stable_dim=stable_dim,
        a0_dim=a0.dim,
        right_mult_is_iso=is_iso,
        anti_multiplicative=anti,
    )


# -- the complete resolution ---------------------------------------------------


class CompleteResolutionWindow:
    """The window lo..hi of P with P^n = A^n + A^{n-1} and
    d^n(a^n, a^{n-1}) = (0, a^n)."""

    def __init__(self, ext: TrivialExtension, lo, hi):
        stage = ext.stage
        if stage.dim(lo - 1) is None or stage.dim(hi) is None:
            raise WindowNotGeneratedError(
                f"resolution window [{lo}, {hi}] needs stage degrees "
                f"[{lo - 1}, {hi}]"
            )
        self.ext = ext
        self.lo = lo
        self.hi = hi
        f = ext.field
        self.modules = {n: resolution_term(ext, n) for n in range(lo, hi + 1)}
        self.diffs = {}
        for n in range(lo, hi):
            src = self.modules[n]
            tgt = self.modules[n + 1]
            da = stage.require(n)
            m = Matrix.zeros(f, tgt.dim, src.dim)
            for i in range(da):
                m.rows[stage.require(n + 1) + i][i] = f.one
            self.diffs[n] = m
        dims = {n: self.modules[n].dim for n in range(lo, hi + 1)}
        self.complex = BoundedComplex(f, lo, hi, dims, self.diffs)
        for n in range(lo, hi):
            self._check_linear(n)

    def _check_linear(self, n):
        d = self.diffs[n]
        src = self.modules[n]
        tgt = self.modules[n + 1]
        for i in range(self.ext.dim):
            if d @ src.action[i] != tgt.action[i] @ d:
                raise AssertionError(f"differential at {n} is not Lambda-linear")

    def verify_projective(self, n) -> bool:
        """Exhibit P^n = Lambda (x)_{A0} A^n via (a, b) (x) x |-> (ax, bx)."""
        ext = self.ext
        stage = ext.stage
        f = ext.field
        da = stage.require(n)
        # right multiplication on Lambda: column i holds basis_i . (a_t, 0)
        right_lambda = []
        for t in range(ext.dim0):
            cols = []
            for i in range(ext.dim):
                bi = [f.one if k == i else f.zero for k in range(ext.dim)]
                at = ext.embed0([f.one if k == t else f.zero
                                 for k in range(ext.dim0)])
                cols.append(ext.algebra.multiply(bi, at))
            right_lambda.append(Matrix.from_columns(f, cols, ext.dim))
        tensor = TensorOverA0(
            f, ext.dim, da, right_lambda, stage.left_action(n)
        )
        if tensor.dim != self.modules[n].dim:
            return False
        # psi on pure tensors
        table_bx = stage.pairing_table(-1, n)
        table_ax = stage.pairing_table(0, n)
        cols = []
        for li in range(ext.dim):
            for xi in range(da):
                vec = [f.zero] * self.modules[n].dim
                if li < ext.dim0:
                    for k, c in enumerate(table_ax[li][xi]):
                        vec[k] = c
                else:
                    for k, c in enumerate(table_bx[li - ext.dim0][xi]):
                        vec[da + k] = c
                cols.append(vec)
        psi_k = Matrix.from_columns(f, cols, self.modules[n].dim)
        if not tensor.factors_through(psi_k):
            return False
        psi = tensor.induced_map(psi_k)
        if psi.rank() != self.modules[n].dim:
            return False
        # Lambda-linearity of psi: act on the Lambda tensor factor
        lam_tensor_act = []
        for i in range(ext.dim):
            cols = []
            for li in range(ext.dim):
                for xi in range(da):
                    bi = [f.one if k == i else f.zero for k in range(ext.dim)]
                    bl = [f.one if k == li else f.zero for k in range(ext.dim)]
                    prod = ext.algebra.multiply(bi, bl)
                    big = [f.zero] * (ext.dim * da)
                    for k, c in enumerate(prod):
                        big[k * da + xi] = c
                    cols.append(tensor.project(big))
            lam_tensor_act.append(Matrix.from_columns(f, cols, tensor.dim))
        # columns above are images of pure tensors; express in quotient coords
        pure_cols = [tensor.pure(li, xi)
                     for li in range(ext.dim) for xi in range(da)]
        pure_mat = Matrix.from_columns(f, pure_cols, tensor.dim)
        for i in range(ext.dim):
            lhs = psi @ lam_tensor_act[i]
            rhs = self.modules[n].action[i] @ psi @ pure_mat
            # lam_tensor_act columns are indexed by pure tensors, so
            # compare against psi composed with the module action on the
            # same pure-tensor columns
            if lhs != rhs:
                return False
        return True

    def verify_z1(self) -> bool:
        """Z^1(P) = A^0 via a |-> (0, a)."""
        ext = self.ext
        f = ext.field
        if not (self.lo <= 0 and 1 <= self.hi):
            raise WindowNotGeneratedError("window must contain degrees 0 and 1")
        d1 = self.diffs.get(1)
        p1 = self.modules[1]
        da = ext.stage.require(1)
        if d1 is not None:
            ker_vecs = d1.kernel_basis()
        else:
            ker_vecs = Matrix.identity(f, p1.dim).columns()
        from .linalg import span_rank, span_contains
        iota_cols = []
        for i in range(ext.dim0):
            vec = [f.zero] * p1.dim
            vec[da + i] = f.one
            iota_cols.append(vec)
        if span_rank(f, ker_vecs, p1.dim) != ext.dim0:
            return False
        for v in iota_cols:
            if not span_contains(f, ker_vecs, v):
                return False
        # iota is Lambda-linear onto Z^1 with the A^0-module structure
        a0mod = ext.a0_module()
        iota = Matrix.from_columns(f, iota_cols, p1.dim)
        for i in range(ext.dim):
            if iota @ a0mod.action[i] != p1.action[i] @ iota:
                return False
        return True


def complete_resolution(stage: GradedStageInput, window=(-4, 4)) -> CompleteResolutionWindow:
    ext = build_trivext(stage)
    crw = CompleteResolutionWindow(ext, window[0], window[1])
    for n in range(crw.lo, crw.hi + 1):
        if not crw.verify_projective(n):
            raise AssertionError(f"P^{n} is not exhibited as Lambda (x) A^{n}")
    if crw.lo <= 0 and 1 <= crw.hi:
        if not crw.verify_z1():
            raise AssertionError("Z^1(P) != A^0")
    return crw


@dataclass
class TotalAcyclicityReport:
    interior_betti: dict
    dual_interior_betti: dict
    dual_differential_matches: bool
    failed_degrees: list

    @property
    def passed(self):
        return not self.failed_degrees and self.dual_differential_matches


def _dual_identification(ext: TrivialExtension, n):
    """Columns of the map (u, w) in A^{-n} + A^{-n-1} |-> the hom
    P^n -> Lambda, (x, y) |-> (x u, x w + y u), flattened."""
    stage = ext.stage
    f = ext.field
    da, db = stage.require(n), stage.require(n - 1)
    dim_u, dim_w = stage.require(-n), stage.require(-n - 1)
    pn_dim = da + db
    cols = []
    for which, j in [(0, j) for j in range(dim_u)] + [(1, j) for j in range(dim_w)]:
        # hom matrix: P^n -> Lambda, columns over P^n basis
        h = Matrix.zeros(f, ext.dim, pn_dim)
        for xi in range(da):
            if which == 0:
                xu = stage.pairing_table(n, -n)[xi][j]
                for k, c in enumerate(xu):
                    h.rows[k][xi] = c
            else:
                xw = stage.pairing_table(n, -n - 1)[xi][j]
                for k, c in enumerate(xw):
                    h.rows[ext.dim0 + k][xi] = c
        if which == 0:
            for yi in range(db):
                yu = stage.pairing_table(n - 1, -n)[yi][j]
                for k, c in enumerate(yu):
                    h.rows[ext.dim0 + k][da + yi] = c
        cols.append(h)
    return cols


def verify_totally_acyclic(crw: CompleteResolutionWindow) -> TotalAcyclicityReport:
    """Interior cohomology of P and of Hom(P, Lambda) vanishes, and the
    dual differential is (u, w) |-> (-1)^n (0, u) under the explicit
    identification Hom(P^n, Lambda) = A^{-n} + A^{-n-1}."""
    ext = crw.ext
    stage = ext.stage
    f = ext.field
    failed = []
    interior = {}
    for n in range(crw.lo + 1, crw.hi):
        d = crw.complex.cohomology(n).dim
        interior[n] = d
        if d != 0:
            failed.append(("P", n))

    # duals, expressed in the identified coordinates
    reg = ext.algebra.regular_module()
    ident = {}
    hom_dims = {}
    for n in range(crw.lo, crw.hi + 1):
        if stage.dim(-n) is None or stage.dim(-n - 1) is None:
            continue
        cols = _dual_identification(ext, n)
        flat = [
            [x for row in h.rows for x in row] for h in cols
        ]
        homs = hom_space(crw.modules[n], reg)
        hom_flat = [[x for row in h.rows for x in row] for h in homs]
        ncoord = ext.dim * crw.modules[n].dim
        rank_id = Matrix.from_columns(f, flat, ncoord).rank() if flat else 0
        rank_hom = Matrix.from_columns(f, hom_flat, ncoord).rank() if hom_flat else 0
        both = Matrix.from_columns(f, flat + hom_flat, ncoord).rank()
        if not (rank_id == len(flat) == rank_hom == both):
            failed.append(("dual-identification", n))
        ident[n] = cols
        hom_dims[n] = rank_hom

    matches = True
    dual_interior = {}
    dual_diffs = {}
    for n in sorted(ident):
        if n + 1 not in ident:
            continue
        src_cols = ident[n + 1]
        dim_u = stage.require(-n - 1)
        dim_w = stage.require(-n - 2)
        tgt_cols = ident[n]
        tgt_flat = Matrix.from_columns(
            f,
            [[x for row in h.rows for x in row] for h in tgt_cols],
            ext.dim * crw.modules[n].dim,
        )
        sign = f.one if n % 2 == 0 else f.neg(f.one)
        rows = []
        for idx, h in enumerate(src_cols):
            comp = h @ crw.diffs[n]
            comp = comp.scale(sign)
            flat = [x for row in comp.rows for x in row]
            sol = tgt_flat.solve(flat)
            if sol is None:
                matches = False
                break
            rows.append(sol)
        if not matches:
            break
        # expected: (u, w) |-> (-1)^n (0, u)
        tgt_du = stage.require(-n)
        for idx in range(len(src_cols)):
            got = rows[idx]
            expected = [f.zero] * (tgt_du + stage.require(-n - 1))
            if idx < dim_u:
                expected[tgt_du + idx] = sign
            if got != expected:
                matches = False
        dual_diffs[n] = Matrix(
            f, [[rows[c][r] for c in range(len(rows))]
                for r in range(tgt_du + stage.require(-n - 1))],
            len(rows),
        )
    # dual complex cohomology in identified coordinates: term at n is
    # Hom(P^n, Lambda), with map Hom(P^{n+1}, -) -> Hom(P^n, -)
    ns = sorted(dual_diffs)
    for n in ns:
        if n - 1 in dual_diffs:
            # exactness at Hom(P^n, Lambda): outgoing has source Hom(P^n),
            # incoming has target Hom(P^n)
            incoming = dual_diffs[n]
            outgoing = dual_diffs[n - 1]
            ker_dim = len(outgoing.kernel_basis()) if outgoing.ncols else 0
            h = ker_dim - incoming.rank()
            dual_interior[n] = h
            if h != 0:
                failed.append(("dual", n))
    return TotalAcyclicityReport(
        interior_betti=interior,
        dual_interior_betti=dual_interior,
        dual_differential_matches=matches,
        failed_degrees=failed,
    )


def corrupted_acyclicity_fails(stage: GradedStageInput, window=(-3, 3)) -> bool:
    """Negative control: flip an entry of one differential and check the
    acyclicity verdict turns false."""
    ext = build_trivext(stage)
    crw = CompleteResolutionWindow(ext, window[0], window[1])
    f = ext.field
    mid = (window[0] + window[1]) // 2
    d = crw.diffs[mid]
    bad = Matrix(f, [list(r) for r in d.rows], d.ncols)
    for r in range(bad.nrows):
        hit = False
        for c in range(bad.ncols):
            if not f.is_zero(bad.rows[r][c]):
                bad.rows[r][c] = f.zero  # drop one needed entry
                hit = True
                break
        if hit:
            break
    dims = {n: crw.modules[n].dim for n in range(crw.lo, crw.hi + 1)}
    diffs = dict(crw.diffs)
    diffs[mid] = bad
    cx = BoundedComplex(f, crw.lo, crw.hi, dims, diffs, check=False)
    bad_betti = [cx.cohomology(n).dim for n in range(crw.lo + 1, crw.hi)]
    return any(b != 0 for b in bad_betti)


# -- End(P) and the quasi-isomorphism Phi --------------------------------------


def _hom_pair_matrix(ext: TrivialExtension, p, n, uvec, wvec) -> Matrix:
    """The Lambda-hom P^p -> P^{p+n} attached to (u, w) in A^n + A^{n-1}:
    (x, y) |-> (x u, x w + y u)."""
    stage = ext.stage
    f = ext.field
    da, db = stage.require(p), stage.require(p - 1)
    ta, tb = stage.require(p + n), stage.require(p + n - 1)
    out = Matrix.zeros(f, ta + tb, da + db)
    for xi in range(da):
        xu = stage.pair(p, n, _unit(f, da, xi), uvec)
        for k, c in enumerate(xu):
            out.rows[k][xi] = c
        xw = stage.pair(p, n - 1, _unit(f, da, xi), wvec)
        for k, c in enumerate(xw):
            out.rows[ta + k][xi] = f.add(out.rows[ta + k][xi], c)
    for yi in range(db):
        yu = stage.pair(p - 1, n, _unit(f, db, yi), uvec)
        for k, c in enumerate(yu):
            out.rows[ta + k][da + yi] = f.add(out.rows[ta + k][da + yi], c)
    return out


def _unit(f, dim, i):
    return [f.one if k == i else f.zero for k in range(dim)]


@dataclass
class PhiQuasiIsoReport:
    reliable_range: tuple
    cohomology: dict          # degree -> (dim, expected)
    identification_complete: bool
    differential_formula_matches: bool
    phi_cocycle: bool
    phi_independent: bool
    sign_flip_detected: bool | None

    @property
    def passed(self):
        ok = (
            self.identification_complete
            and self.differential_formula_matches
            and self.phi_cocycle
            and self.phi_independent
            and all(d == e for d, e in self.cohomology.values())
        )
        if self.sign_flip_detected is not None:
            ok = ok and self.sign_flip_detected
        return ok


def verify_phi_quasi_iso(stage: GradedStageInput, window=(-4, 4),
                         check_sign_control=True) -> PhiQuasiIsoReport:
    """Materialize End(P) on a staircase of blocks, check the
    differential formula {(x_p, y_p)} -> {(0, x_p - (-1)^n x_{p+1})}
    against honest matrix composition, and verify H^n = A^n via Phi,
    Phi(a)_p = ((-1)^{pn} a, 0).

    Blocks: End^n uses components f_p: P^p -> P^{p+n} for p in
    [lo+R+1, hi-R-1-n]; with this family every materialized
    differential entry carries both of its terms, so degrees |n| <= R
    are free of truncation artifacts (R = (hi - lo - 3) // 3).
    """
    ext = build_trivext(stage)
    lo, hi = window
    R = (hi - lo - 3) // 3
    if R < 0:
        raise WindowNotGeneratedError("window too small for any reliable degree")
    crw = CompleteResolutionWindow(ext, lo, hi)
    f = ext.field
    a_lo = lo + R + 1
    b_of = lambda n: hi - R - 1 - n

    def blocks(n):
        return list(range(a_lo, b_of(n) + 1))

    def coords(n):
        idx = []
        for p in blocks(n):
            for j in range(stage.require(n)):
                idx.append((p, "x", j))
            for j in range(stage.require(n - 1)):
                idx.append((p, "y", j))
        return idx

    indexes = {n: coords(n) for n in range(-R - 1, R + 2)}
    lookup = {n: {c: i for i, c in enumerate(indexes[n])} for n in indexes}

    def formula_matrix(n) -> Matrix:
        src = indexes[n]
        tgt = indexes[n + 1]
        out = Matrix.zeros(f, len(tgt), len(src))
        sign = f.one if n % 2 == 0 else f.neg(f.one)
        for col, (p, slot, j) in enumerate(src):
            if slot != "x":
                continue
            # d(f)_q = (0, x_q - (-1)^n x_{q+1})
            for q in blocks(n + 1):
                if q == p:
                    out.rows[lookup[n + 1][(q, "y", j)]][col] = f.one
                if q + 1 == p:
                    out.rows[lookup[n + 1][(q, "y", j)]][col] = f.neg(sign)
        return out

    diffs = {n: formula_matrix(n) for n in range(-R - 1, R + 1)}

    # identification completeness: Hom_Lambda(P^p, P^{p+n}) has dimension
    # dim A^n + dim A^{n-1}, and every pair map is Lambda-linear
    ident_ok = True
    for n in range(-R, R + 1):
        dn, dn1 = stage.require(n), stage.require(n - 1)
        for p in blocks(n):
            src_mod = crw.modules[p]
            tgt_mod = crw.modules[p + n]
            if len(hom_space(src_mod, tgt_mod)) != dn + dn1:
                ident_ok = False
            for j in range(dn):
                h = _hom_pair_matrix(ext, p, n, _unit(f, dn, j), [f.zero] * dn1)
                for t in range(ext.dim):
                    if h @ src_mod.action[t] != tgt_mod.action[t] @ h:
                        ident_ok = False
            for j in range(dn1):
                h = _hom_pair_matrix(ext, p, n, [f.zero] * dn, _unit(f, dn1, j))
                for t in range(ext.dim):
                    if h @ src_mod.action[t] != tgt_mod.action[t] @ h:
                        ident_ok = False

    # the formula differential against honest d o f - (-1)^n f o d
    formula_ok = True
    for n in range(-R, R + 1):
        dn, dn1 = stage.require(n), stage.require(n - 1)
        sign = f.one if n % 2 == 0 else f.neg(f.one)
        for col, (p, slot, j) in enumerate(indexes[n]):
            uvec = _unit(f, dn, j) if slot == "x" else [f.zero] * dn
            wvec = _unit(f, dn1, j) if slot == "y" else [f.zero] * dn1
            # component maps of d(f) at each target block q
            for q in blocks(n + 1):
                acc = Matrix.zeros(f, crw.modules[q + n + 1].dim,
                                   crw.modules[q].dim)
                if q == p:  # d_P o f_p
                    h = _hom_pair_matrix(ext, p, n, uvec, wvec)
                    acc = acc + crw.diffs[p + n] @ h
                if q + 1 == p:  # - (-1)^n f_{p+1} o d_P
                    h = _hom_pair_matrix(ext, p, n, uvec, wvec)
                    acc = acc - (h @ crw.diffs[q]).scale(sign)
                # expand in the identified coordinates of Hom(P^q, P^{q+n+1})
                tn, tn1 = stage.require(n + 1), stage.require(n)
                cols = []
                for jj in range(tn):
                    cols.append(_hom_pair_matrix(ext, q, n + 1,
                                                 _unit(f, tn, jj),
                                                 [f.zero] * tn1))
                for jj in range(tn1):
                    cols.append(_hom_pair_matrix(ext, q, n + 1,
                                                 [f.zero] * tn,
                                                 _unit(f, tn1, jj)))
                flat_cols = [[x for row in m.rows for x in row] for m in cols]
                target_flat = [x for row in acc.rows for x in row]
                sol = Matrix.from_columns(
                    f, flat_cols, len(target_flat)
                ).solve(target_flat)
                if sol is None:
                    formula_ok = False
                    continue
                for jj in range(tn):
                    expected = diffs[n].rows[lookup[n + 1][(q, "x", jj)]][col]
                    if sol[jj] != expected:
                        formula_ok = False
                for jj in range(tn1):
                    expected = diffs[n].rows[lookup[n + 1][(q, "y", jj)]][col]
                    if sol[tn + jj] != expected:
                        formula_ok = False

    cohomology = {}
    for n in range(-R, R + 1):
        ker = len(indexes[n]) - diffs[n].rank()
        im = diffs[n - 1].rank()
        cohomology[n] = (ker - im, stage.require(n))

    def phi_vector(n, j, flip=False):
        vec = [f.zero] * len(indexes[n])
        for p in blocks(n):
            exp = p * (n + (1 if flip else 0))
            vec[lookup[n][(p, "x", j)]] = (
                f.one if exp % 2 == 0 else f.neg(f.one)
            )
        return vec

    phi_cocycle = True
    phi_independent = True
    for n in range(-R, R + 1):
        dn = stage.require(n)
        xs = []
        for j in range(dn):
            v = phi_vector(n, j)
            if any(not f.is_zero(t) for t in diffs[n].apply(v)):
                phi_cocycle = False
            xs.append(v)
        # coboundaries live in the y coordinates only
        y_only = all(
            indexes[n][r][1] == "y"
            for r in range(len(indexes[n]))
            for c in range(len(indexes[n - 1]))
            if not f.is_zero(diffs[n - 1].rows[r][c])
        )
        x_rows = [i for i, (_, slot, _) in enumerate(indexes[n]) if slot == "x"]
        x_parts = [[v[i] for i in x_rows] for v in xs]
        from .linalg import span_rank
        if not (y_only and span_rank(f, x_parts, len(x_rows)) == dn):
            phi_independent = False

    sign_flag = None
    if check_sign_control:
        # a flipped sign in Phi must fail to be a cocycle somewhere
        sign_flag = False
        for n in range(-R, R + 1):
            for j in range(stage.require(n)):
                v = phi_vector(n, j, flip=True)
                if any(not f.is_zero(t) for t in diffs[n].apply(v)):
                    sign_flag = True
    return PhiQuasiIsoReport(
        reliable_range=(-R, R),
        cohomology=cohomology,
        identification_complete=ident_ok,
        differential_formula_matches=formula_ok,
        phi_cocycle=phi_cocycle,
        phi_independent=phi_independent,
        sign_flip_detected=sign_flag,
    )


# -- Gorenstein-projective splitting -------------------------------------------


def _a0_complement(ext: TrivialExtension, module: FinDimModule, sub_basis,
                   within_basis=None):
    """An A^0-submodule complement of span(sub_basis) inside
    span(within_basis) (default: the whole module), via the block
    projections E_{00} and the lifts E_{i0}.  Deterministic: complement
    representatives are chosen by pivot order."""
    stage = ext.stage
    f = ext.field
    if stage.blocks is None:
        raise NotSemisimpleError("complement needs block data")
    if within_basis is None:
        within_basis = Matrix.identity(f, module.dim).columns()
    comp = []
    for b in stage.blocks:
        e00 = module.act_matrix(ext.embed0(b.units[(0, 0)]))
        sub_proj = [e00.apply(v) for v in sub_basis]
        within_proj = [e00.apply(v) for v in within_basis]
        sub_img = Matrix.from_columns(f, sub_proj, module.dim).image_basis() \
            if sub_proj else []
        stacked = Matrix.from_columns(
            f, sub_img + within_proj, module.dim
        )
        _, pivots = stacked.rref()
        k = len(sub_img)
        chosen = [within_proj[c - k] for c in pivots if c >= k]
        for c in chosen:
            for i in range(b.size):
                ei0 = module.act_matrix(ext.embed0(b.units[(i, 0)]))
                comp.append(ei0.apply(c))
    return comp


def lambda_tensor_module(ext: TrivialExtension, a0_action, dim_v):
    """Lambda (x)_{A0} V for an A^0-module V given by action matrices;
    returns (module, tensor, pure) with pure(li, vi) the quotient
    coordinates of basis_li (x) e_vi."""
    f = ext.field
    right_lambda = []
    for t in range(ext.dim0):
        cols = []
        at = ext.embed0([f.one if k == t else f.zero for k in range(ext.dim0)])
        for i in range(ext.dim):
            bi = [f.one if k == i else f.zero for k in range(ext.dim)]
            cols.append(ext.algebra.multiply(bi, at))
        right_lambda.append(Matrix.from_columns(f, cols, ext.dim))
    tensor = TensorOverA0(f, ext.dim, dim_v, right_lambda, a0_action)
    action = []
    for i in range(ext.dim):
        cols = []
        bi = [f.one if k == i else f.zero for k in range(ext.dim)]
        for li in range(ext.dim):
            bl = [f.one if k == li else f.zero for k in range(ext.dim)]
            prod = ext.algebra.multiply(bi, bl)
            for vi in range(dim_v):
                big = [f.zero] * (ext.dim * dim_v)
                for k, c in enumerate(prod):
                    big[k * dim_v + vi] = c
                cols.append(tensor.project(big))
        # columns are indexed by pure tensors (li, vi); express the action
        # on the quotient basis by solving through the pure-tensor matrix
        pure_mat = Matrix.from_columns(
            f,
            [tensor.pure(li, vi) for li in range(ext.dim) for vi in range(dim_v)],
            tensor.dim,
        )
        act_on_pure = Matrix.from_columns(f, cols, tensor.dim)
        act_cols = []
        for rep in range(tensor.dim):
            big = tensor.include(_unit(f, tensor.dim, rep))
            # big is supported on pure basis tensors
            vec = [f.zero] * tensor.dim
            for idx, c in enumerate(big):
                if not f.is_zero(c):
                    col = act_on_pure.column_vector(idx)
                    vec = [f.add(a, f.mul(c, x)) for a, x in zip(vec, col)]
            act_cols.append(vec)
        action.append(Matrix.from_columns(f, act_cols, tensor.dim))
    module = FinDimModule(ext.algebra, tensor.dim, action)
    module.verify()
    return module, tensor


@dataclass
class GprojDecomposition:
    k_prime: list
    im_phi: list
    k_second: list
    projective_rank: int
    reconstruction_ok: bool

    @property
    def passed(self):
        return self.reconstruction_ok


def gproj_decompose(stage_or_ext, module: FinDimModule) -> GprojDecomposition:
    """Split M as (Lambda (x) K') + K'' following the membership proof for
    Gproj = add(A^0 + Lambda): K' is an A^0-complement of K_M with
    phi: A^{-1} (x) K' = Im phi, and K'' complements Im phi inside K_M
    with trivial A^{-1}-action.  The reassembled action matrices must
    equal M's under the constructed basis."""
    if isinstance(stage_or_ext, TrivialExtension):
        ext = stage_or_ext
    else:
        ext = build_trivext(stage_or_ext)
    lm = LambdaModule(ext, module)
    f = ext.field
    if not lm.verify_invariants():
        raise NotGorensteinProjectiveError("phi invariants fail")
    k_prime = _a0_complement(ext, module, lm.k_m)
    k_second = _a0_complement(ext, module, lm.im_phi, within_basis=lm.k_m)
    if len(k_prime) + len(lm.k_m) != module.dim:
        raise NotGorensteinProjectiveError("K' does not complement K_M")
    if len(k_second) + len(lm.im_phi) != len(lm.k_m):
        raise NotGorensteinProjectiveError("K'' does not complement Im phi")

    # phi restricts to an isomorphism A^{-1} (x) K' = Im phi
    if k_prime:
        k_prime_mat = Matrix.from_columns(f, k_prime, module.dim)
        a0_act = []
        for t in range(ext.dim0):
            cols = [k_prime_mat.solve(module.action[t].apply(v)) for v in k_prime]
            if any(c is None for c in cols):
                raise NotGorensteinProjectiveError("K' is not A^0-stable")
            a0_act.append(Matrix.from_columns(f, cols, len(k_prime)))
        t_kp = TensorOverA0(f, ext.dimx, len(k_prime),
                            ext.stage.right_action(-1), a0_act)
        phi_images = []
        for i in range(ext.dimx):
            for v in k_prime:
                phi_images.append(module.action[ext.dim0 + i].apply(v))
        from .linalg import span_rank
        img_rank = span_rank(f, phi_images, module.dim)
        both = span_rank(f, phi_images + lm.im_phi, module.dim)
        if not (t_kp.dim == len(lm.im_phi) == img_rank == both):
            raise NotGorensteinProjectiveError(
                "phi does not map A^{-1} (x) K' isomorphically onto Im phi"
            )
        proj_part, _ = lambda_tensor_module(ext, a0_act, len(k_prime))
    else:
        a0_act = []
        proj_part = None

    # assemble the comparison module and the basis map into M
    k2_mat = Matrix.from_columns(f, k_second, module.dim) if k_second else None
    if k_second:
        a0_act2 = []
        for t in range(ext.dim0):
            cols = [k2_mat.solve(module.action[t].apply(v)) for v in k_second]
            if any(c is None for c in cols):
                raise NotGorensteinProjectiveError("K'' is not A^0-stable")
            a0_act2.append(Matrix.from_columns(f, cols, len(k_second)))
        triv_action = a0_act2 + [
            Matrix.zeros(f, len(k_second), len(k_second))
            for _ in range(ext.dimx)
        ]
        triv_part = FinDimModule(ext.algebra, len(k_second), triv_action)
        triv_part.verify()
    else:
        triv_part = None

    if proj_part is not None and triv_part is not None:
        model = proj_part.direct_sum(triv_part)
    elif proj_part is not None:
        model = proj_part
    elif triv_part is not None:
        model = triv_part
    else:
        raise NotGorensteinProjectiveError("empty decomposition")

    # basis map: pure tensors (lambda_li (x) k'_j) |-> lambda . k'_j, then K''
    cols = []
    if proj_part is not None:
        _, tensor = lambda_tensor_module(ext, a0_act, len(k_prime))
        for rep in range(tensor.dim):
            big = tensor.include(_unit(f, tensor.dim, rep))
            vec = [f.zero] * module.dim
            for idx, c in enumerate(big):
                if f.is_zero(c):
                    continue
                li, vi = divmod(idx, len(k_prime))
                lam = [f.one if k == li else f.zero for k in range(ext.dim)]
                moved = module.act(lam, k_prime[vi])
                vec = [f.add(a, f.mul(c, x)) for a, x in zip(vec, moved)]
            cols.append(vec)
    cols.extend(k_second)
    basis_map = Matrix.from_columns(f, cols, module.dim)
    ok = basis_map.nrows == basis_map.ncols == module.dim and \
        basis_map.rank() == module.dim
    if ok:
        for i in range(ext.dim):
            if basis_map @ model.action[i] != module.action[i] @ basis_map:
                ok = False
    return GprojDecomposition(
        k_prime=k_prime,
        im_phi=lm.im_phi,
        k_second=k_second,
        projective_rank=len(k_prime),
        reconstruction_ok=ok,
    )


# -- the singularity model -----------------------------------------------------


@dataclass
class SingularityModelReport:
    objects: list               # (block label, size)
    translation: list           # integer matrix, column v = class of A^1 (x) S_v
    unimodular: bool
    is_permutation: bool
    orbits: list | None

    @property
    def passed(self):
        return self.unimodular


def singularity_model(stage: GradedStageInput) -> SingularityModelReport:
    """Objects: the simple A^0-modules (one per block); translation:
    the class of A^1 (x)_{A0} S_v, decomposed by the central idempotents
    of the blocks."""
    from .linalg import int_det
    if stage.blocks is None:
        raise NotSemisimpleError("singularity model needs block data")
    f = stage.field
    blocks = stage.blocks
    nb = len(blocks)
    dim1 = stage.require(1)
    left1 = stage.left_action(1)

    def simple_action(b):
        acts = []
        for t in range(stage.a0.dim):
            vec = [f.one if k == t else f.zero for k in range(stage.a0.dim)]
            units = stage.to_matrix_units(vec)
            m = Matrix.zeros(f, b.size, b.size)
            for (lab, r, c), coeff in units.items():
                if lab == b.label:
                    m.rows[r][c] = f.add(m.rows[r][c], coeff)
            acts.append(m)
        return acts

    translation = [[0] * nb for _ in range(nb)]
    for vi, bv in enumerate(blocks):
        tens = TensorOverA0(f, dim1, bv.size, stage.right_action(1),
                            simple_action(bv))
        for wi, bw in enumerate(blocks):
            zvec = [f.zero] * stage.a0.dim
            for i in range(bw.size):
                zvec = [f.add(a, c) for a, c in zip(zvec, bw.units[(i, i)])]
            zmat = Matrix.zeros(f, dim1, dim1)
            for t, c in enumerate(zvec):
                if not f.is_zero(c):
                    zmat = zmat + left1[t].scale(c)
            cols = []
            for rep in range(tens.dim):
                big = tens.include(_unit(f, tens.dim, rep))
                moved = [f.zero] * (dim1 * bv.size)
                for idx, c in enumerate(big):
                    if f.is_zero(c):
                        continue
                    xi, mi = divmod(idx, bv.size)
                    zcol = zmat.column_vector(xi)
                    for xj, zc in enumerate(zcol):
                        if not f.is_zero(zc):
                            pos = xj * bv.size + mi
                            moved[pos] = f.add(moved[pos], f.mul(c, zc))
                cols.append(tens.project(moved))
            rank = Matrix.from_columns(f, cols, tens.dim).rank()
            if rank % bw.size != 0:
                raise AssertionError("isotypic rank is not a multiple of the block size")
            translation[wi][vi] = rank // bw.size
        if sum(translation[wi][vi] * blocks[wi].size for wi in range(nb)) != tens.dim:
            raise AssertionError("isotypic decomposition does not fill the tensor")

    det = int_det(translation)
    unimodular = det in (1, -1)
    is_perm = all(
        sum(translation[w][v] for w in range(nb)) == 1
        and sum(translation[v][w] for w in range(nb)) == 1
        for v in range(nb)
    ) and all(x in (0, 1) for row in translation for x in row)
    orbits = None
    if is_perm:
        succ = {}
        for v in range(nb):
            for w in range(nb):
                if translation[w][v] == 1:
                    succ[v] = w
        seen = set()
        orbits = []
        for v in range(nb):
            if v in seen:
                continue
            orbit = [v]
            seen.add(v)
            w = succ[v]
            while w != v:
                orbit.append(w)
                seen.add(w)
                w = succ[w]
            orbits.append(len(orbit))
        orbits.sort()
    return SingularityModelReport(
        objects=[(b.label, b.size) for b in blocks],
        translation=translation,
        unimodular=unimodular,
        is_permutation=is_perm,
        orbits=orbits,
    )


# -- random valid modules for the oracle suites ---------------------------------


def random_module(ext: TrivialExtension, rng: random.Random, dim_bound=6,
                  attempts=60) -> FinDimModule:
    """A random valid Lambda-module of dimension <= dim_bound, produced
    as a submodule or quotient of free modules."""
    reg = ext.algebra.regular_module()
    for _ in range(attempts):
        style = rng.randrange(3)
        if style == 0:
            big = reg
        elif style == 1:
            big = reg.direct_sum(reg)
        else:
            big = reg.direct_sum(ext.a0_module())
        f = ext.field
        n_gens = rng.randint(1, 2)
        gens = []
        for _ in range(n_gens):
            gens.append([f.coerce(rng.randint(-2, 2)) for _ in range(big.dim)])
        sub = big.submodule_closure(gens)
        if rng.random() < 0.5:
            if 1 <= len(sub) <= dim_bound:
                mod = big.restrict_to_submodule(sub)
                mod.verify()
                return mod
        else:
            qdim = big.dim - len(sub)
            if 1 <= qdim <= dim_bound:
                mod = big.quotient_by(sub)
                mod.verify()
                return mod
    # fall back to the regular module truncated through A^0
    return ext.a0_module()


# -- pipeline oracle: cycle stages against kC_n/J^2 ------------------------------


def compare_cycle_with_rs0(n: int, side="plus", field=QQ) -> bool:
    """stage_from_leavitt(C_n) + build_trivext against the path-algebra
    construction kC_n/J^2 by explicit structure-constant comparison.

    side="plus" matches basis labels on the nose (e_v and the arrows);
    side="minus" matches through the vertex relabeling v |-> -v, under
    which the ghost arrow a_v* corresponds to the arrow out of -v-1.
    """
    from .findim import algebra_iso_check
    from .pathalg import build_rs0
    from .quiver import cycle_quiver

    quiver = cycle_quiver(n)
    stage = stage_from_leavitt(quiver, 1, side=side, window=(-2, 2), field=field)
    ext = build_trivext(stage)
    rs0 = build_rs0(quiver, field)
    if ext.dim != rs0.algebra.dim:
        return False
    f = field
    # build the label correspondence Lambda basis -> rs0 basis
    target_index = {lab: i for i, lab in enumerate(rs0.algebra.labels)}
    phi = Matrix.zeros(f, rs0.algebra.dim, ext.dim)
    for col, lab in enumerate(ext.algebra.labels):
        # labels look like "(e_1, 0)" or "(a1*, 0)"/"(0, a1)" depending on side
        inner = lab.strip("()").split(", ")
        body = inner[1] if inner[0] == "0" else inner[0]
        if body.startswith("e_"):
            v = int(body[2:])
            if side == "plus":
                target = f"e_{v}"
            else:
                target = f"e_{((1 - v) % n) + 1}"
        elif body.endswith("*"):
            # ghost arrow a_i*, i.e. the minus side; a_i: i -> i+1
            i = int(body[1:-1])
            target = f"a{((-i) % n) + 1}"
        else:
            target = body  # plus side: the arrow itself
        phi.rows[target_index[target]][col] = f.one
    return algebra_iso_check(ext.algebra, rs0.algebra, phi)


# -- JSON interface for modules --------------------------------------------------


def module_to_json(ext: TrivialExtension, module: FinDimModule,
                   algebra_id="") -> dict:
    """{algebra: id, dim, action: {basis_element: matrix}}."""
    return {
        "algebra": algebra_id or ext.algebra.name,
        "dim": module.dim,
        "action": {
            ext.algebra.labels[i]: [
                [str(x) for x in row] for row in module.action[i].rows
            ]
            for i in range(ext.dim)
        },
    }


def module_from_json(ext: TrivialExtension, blob) -> FinDimModule:
    from fractions import Fraction

    f = ext.field
    dim = int(blob["dim"])
    action = []
    for label in ext.algebra.labels:
        rows = blob["action"][label]
        action.append(
            Matrix(f, [[f.coerce(Fraction(x)) for x in row] for row in rows],
                   dim)
        )
    mod = FinDimModule(ext.algebra, dim, action)
    mod.verify()
    return mod
