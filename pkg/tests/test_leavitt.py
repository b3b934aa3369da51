import random

import pytest

from qhw.errors import HasSinkError
from qhw.linalg import QQ, GF
from qhw.leavitt import (
    Monomial,
    RewriteSystem,
    bimodule_stage,
    check_local_confluence,
    graded_basis,
    order_independence_check,
    random_composable_word,
    stage_algebra,
    stage_embedding,
    verify_inverting,
    verify_iota_injective,
    verify_strongly_graded,
)


class TestNormalize:
    def test_ck1_mismatch(self, r2):
        rs = RewriteSystem(r2)
        assert rs.parse("a.b*").is_zero()

    def test_ck1_match(self, r2):
        rs = RewriteSystem(r2)
        assert rs.parse("a.a*") == rs.idempotent("v")

    def test_ck2_special(self, r2):
        rs = RewriteSystem(r2)
        # the special arrow at v is a (first in declaration order)
        got = rs.parse("a*.a")
        expected = rs.idempotent("v") - rs.parse("b*.b")
        assert got == expected

    def test_non_special_stays(self, r2):
        rs = RewriteSystem(r2)
        elt = rs.parse("b*.b")
        assert len(elt.terms) == 1

    def test_non_composable_zero(self, c2):
        rs = RewriteSystem(c2)
        assert rs.parse("a1.a1").is_zero()

    def test_idempotent_normalize(self, corpus):
        rng = random.Random(2)
        for q in corpus.values():
            rs = RewriteSystem(q)
            for _ in range(50):
                w = random_composable_word(rs, rng, 6)
                nf = rs.normalize_word(w)
                # renormalizing every monomial is the identity
                total = rs.zero()
                for m, c in nf.items():
                    again = rs.monomial_element(m.ghost, m.real).scale(c)
                    total = total + again
                assert total.terms == nf

    def test_degree_preserved(self, corpus):
        rng = random.Random(3)
        for q in corpus.values():
            rs = RewriteSystem(q)
            for _ in range(50):
                w = random_composable_word(rs, rng, 6)
                deg = sum(-1 if g else 1 for _, g in w)
                for m in rs.normalize_word(w):
                    assert m.degree == deg

    def test_grading_multiplicative(self, r2):
        rs = RewriteSystem(r2)
        rng = random.Random(4)
        for _ in range(30):
            w1 = random_composable_word(rs, rng, 4)
            w2 = random_composable_word(rs, rng, 4)
            x = rs.element(rs.normalize_word(w1))
            y = rs.element(rs.normalize_word(w2))
            dx = sum(-1 if g else 1 for _, g in w1)
            dy = sum(-1 if g else 1 for _, g in w2)
            prod = x * y
            assert prod.degrees() in ([], [dx + dy])


class TestInvolution:
    def test_generators(self, r2):
        rs = RewriteSystem(r2)
        e = rs.idempotent("v")
        assert e.involute() == e
        a = rs.arrow_element("a")
        assert a.involute() == rs.arrow_element("a", ghost=True)

    def test_involution_squared_and_antihom(self, corpus):
        rng = random.Random(5)
        for q in corpus.values():
            rs = RewriteSystem(q)
            for _ in range(25):
                x = rs.element(rs.normalize_word(
                    random_composable_word(rs, rng, 5)))
                y = rs.element(rs.normalize_word(
                    random_composable_word(rs, rng, 5)))
                assert x.involute().involute() == x
                assert (x * y).involute() == y.involute() * x.involute()

    def test_negates_degree(self, c3):
        rs = RewriteSystem(c3)
        x = rs.arrow_element("a1")
        assert x.degrees() == [1]
        assert x.involute().degrees() == [-1]


class TestConfluence:
    def test_corpus_resolves(self, corpus):
        for q in corpus.values():
            rep = check_local_confluence(RewriteSystem(q), 6)
            assert rep.all_resolved
            assert rep.pairs  # overlaps exist for every corpus quiver

    def test_order_independence(self, corpus):
        for q in corpus.values():
            ok, witness = order_independence_check(
                RewriteSystem(q), n_words=200, seed=7
            )
            assert ok, witness


class TestGradedBasis:
    def test_loop_degree_zero(self, r1):
        rs = RewriteSystem(r1)
        assert [m.format() for m in graded_basis(rs, 0, 4)] == ["e_v"]

    def test_rose_stage_one(self, r2):
        rs = RewriteSystem(r2)
        monos = graded_basis(rs, 0, 2)
        assert [m.format() for m in monos] == ["e_v", "a*.b", "b*.a", "b*.b"]

    def test_cycle_degree_one(self, c2):
        rs = RewriteSystem(c2)
        assert len(graded_basis(rs, 1, 3)) == 2

    def test_deterministic_order(self, r2):
        rs = RewriteSystem(r2)
        one = [m.format() for m in graded_basis(rs, 0, 4)]
        two = [m.format() for m in graded_basis(rs, 0, 4)]
        assert one == two
        lengths = [m.total_length for m in graded_basis(rs, 0, 4)]
        assert lengths == sorted(lengths)


class TestStronglyGraded:
    def test_rose_stage1(self, r2):
        res = verify_strongly_graded(RewriteSystem(r2), 1)
        assert res["pass"]

    def test_cycle_stage2(self, c2):
        res = verify_strongly_graded(RewriteSystem(c2), 2)
        assert res["pass"]
        assert res["plus_minus"]["stage_dim"] == 2

    def test_sink_rejected(self, path12):
        with pytest.raises(HasSinkError):
            verify_strongly_graded(RewriteSystem(path12), 1)

    def test_all_sink_free_stages(self, corpus):
        for q in corpus.values():
            rs = RewriteSystem(q)
            for m in (1, 2):
                assert verify_strongly_graded(rs, m)["pass"]


class TestStageAlgebras:
    def test_loop(self, r1):
        sa = stage_algebra(RewriteSystem(r1), 2)
        assert sa.algebra.dim == 1 and sa.block_sizes() == [1]
        assert sa.blocks_verified

    def test_cycle_any_stage(self, c2, c3):
        for q, n in ((c2, 2), (c3, 3)):
            for m in (1, 2, 3):
                sa = stage_algebra(RewriteSystem(q), m)
                assert sa.algebra.dim == n
                assert sa.block_sizes() == [1] * n
                assert sa.blocks_verified

    def test_rose_matrix_blocks(self, r2):
        sa1 = stage_algebra(RewriteSystem(r2), 1)
        assert sa1.algebra.dim == 4 and sa1.block_sizes() == [2]
        assert sa1.blocks_verified
        sa2 = stage_algebra(RewriteSystem(r2), 2)
        assert sa2.algebra.dim == 16 and sa2.block_sizes() == [4]
        assert sa2.blocks_verified

    def test_embedding_is_algebra_map(self, c2, r2):
        for q in (c2, r2):
            rs = RewriteSystem(q)
            small = stage_algebra(rs, 1)
            big = stage_algebra(rs, 2)
            emb = stage_embedding(rs, 1)
            f = QQ

            def embed(vec):
                out = [f.zero] * big.algebra.dim
                for i, c in enumerate(vec):
                    out[emb[i]] = c
                return out

            assert embed(small.algebra.unit) == big.algebra.unit
            for i in range(small.algebra.dim):
                for j in range(small.algebra.dim):
                    lhs = embed(small.algebra.mult[i][j])
                    rhs = big.algebra.multiply(
                        embed(small.algebra.basis_vec(i)),
                        embed(small.algebra.basis_vec(j)),
                    )
                    assert lhs == rhs

    def test_block_sizes_are_path_counts(self, corpus):
        for q in corpus.values():
            rs = RewriteSystem(q)
            sa = stage_algebra(rs, 2)
            expected = [
                sum(1 for p in q.enumerate_paths(2) if p.tgt == v)
                for v in q.vertices
            ]
            assert sa.block_sizes() == expected

    def test_prime_field_stage(self, r2):
        sa = stage_algebra(RewriteSystem(r2, GF(5)), 1)
        assert sa.algebra.dim == 4 and sa.blocks_verified


class TestBimoduleStage:
    def test_cycle(self, c2):
        rep = bimodule_stage(RewriteSystem(c2), -1, 1)
        assert rep.pass_ and len(rep.basis) >= 2

    def test_loop(self, r1):
        rep = bimodule_stage(RewriteSystem(r1), 1, 1)
        assert rep.pass_

    def test_rose(self, r2):
        rep = bimodule_stage(RewriteSystem(r2), 1, 1)
        assert rep.pass_

    def test_sink(self, path12):
        with pytest.raises(HasSinkError):
            bimodule_stage(RewriteSystem(path12), 1, 1)


class TestInverting:
    def test_loop_one_by_one(self, r1):
        rep = verify_inverting(r1)
        assert rep["pass"]
        assert rep["iota"][0]["inner"] == "e_v"

    def test_rose(self, r2):
        rep = verify_inverting(r2)
        assert rep["pass"]
        # outer product is the 2x2 identity over the target idempotents
        outer = rep["iota"][0]["outer"]
        assert outer[0][1] == "0" and outer[1][0] == "0"

    def test_corpus_all_vertices(self, corpus, path12):
        for q in list(corpus.values()) + [path12]:
            assert verify_inverting(q)["pass"]


class TestIotaInjective:
    def test_counts(self, r1, r2, c2):
        assert verify_iota_injective(RewriteSystem(r2), 3)["paths"] == 15
        assert verify_iota_injective(RewriteSystem(r1), 4)["paths"] == 5
        assert verify_iota_injective(RewriteSystem(c2), 3)["paths"] == 8

    def test_independent(self, corpus):
        for q in corpus.values():
            rep = verify_iota_injective(RewriteSystem(q), 3)
            assert rep["injective"] and rep["graded"]
