import pytest

from qhw.errors import DuplicateNameError, QuiverSyntaxError, UnknownVertexError
from qhw.linalg import mat_mul_int
from qhw.quiver import parse_quiver, Quiver, Arrow


class TestParsing:
    def test_loop(self):
        q = parse_quiver("vertices: v\narrows: a: v -> v")
        assert q.vertices == ["v"]
        assert q.arrows == [Arrow("a", "v", "v")]

    def test_cycle(self):
        q = parse_quiver("vertices: 1 2\narrows: a: 1 -> 2, b: 2 -> 1")
        assert [a.name for a in q.arrows] == ["a", "b"]

    def test_unknown_vertex(self):
        with pytest.raises(UnknownVertexError):
            parse_quiver("vertices: 1\narrows: a: 1 -> 2")
        with pytest.raises(UnknownVertexError):
            parse_quiver("arrows: a: 1 -> 2")

    def test_duplicates(self):
        with pytest.raises(DuplicateNameError):
            parse_quiver("vertices: v v")
        with pytest.raises(DuplicateNameError):
            parse_quiver("vertices: v\narrows: a: v -> v, a: v -> v")

    def test_syntax_error_has_position(self):
        with pytest.raises(QuiverSyntaxError) as exc:
            parse_quiver("vertices: v\nnonsense line")
        assert exc.value.line == 2

    def test_bad_arrow_clause(self):
        with pytest.raises(QuiverSyntaxError):
            parse_quiver("vertices: v\narrows: a v -> v")

    def test_multiple_arrow_lines(self):
        q = parse_quiver(
            "vertices: 1 2\narrows: a: 1 -> 2\narrows: b: 2 -> 1"
        )
        assert len(q.arrows) == 2

    def test_roundtrip(self, corpus):
        for q in corpus.values():
            assert parse_quiver(q.serialize()) == q
            # serialization of a parse is canonical (idempotent)
            assert parse_quiver(q.serialize()).serialize() == q.serialize()


class TestStructure:
    def test_opposite_involution(self, corpus):
        for q in corpus.values():
            assert q.opposite().opposite() == q

    def test_opposite_swaps_sinks_sources(self, path12):
        sinks, sources = path12.classify_vertices()
        assert (sinks, sources) == (["2"], ["1"])
        osinks, osources = path12.opposite().classify_vertices()
        assert (osinks, osources) == (["1"], ["2"])

    def test_opposite_transposes_adjacency(self, corpus):
        for q in corpus.values():
            adj = q.adjacency_matrix()
            opp = q.opposite().adjacency_matrix()
            n = len(q.vertices)
            assert all(
                adj[i][j] == opp[j][i] for i in range(n) for j in range(n)
            )

    def test_no_sinks_in_cycles(self, c3, r1):
        assert c3.classify_vertices() == ([], [])
        assert r1.classify_vertices() == ([], [])

    def test_adjacency_examples(self, r1, r2, c2):
        assert r1.adjacency_matrix() == [[1]]
        assert r2.adjacency_matrix() == [[2]]
        assert c2.adjacency_matrix() == [[0, 1], [1, 0]]

    def test_double_quiver(self, r2):
        d = r2.double().as_quiver()
        assert len(d.arrows) == 4
        ghost = d.arrow_by_name["a*"]
        base = r2.arrow_by_name["a"]
        assert (ghost.src, ghost.tgt) == (base.tgt, base.src)


class TestPaths:
    def test_rose_squared(self, r2):
        words = {p.format() for p in r2.enumerate_paths(2)}
        assert words == {"a.a", "a.b", "b.a", "b.b"}

    def test_cycle_length_three(self, c2):
        # one path of each length from each vertex
        assert len(c2.enumerate_paths(3)) == 2

    def test_trivial_paths(self, corpus):
        for q in corpus.values():
            paths = q.enumerate_paths(0)
            assert len(paths) == len(q.vertices)
            assert all(len(p) == 0 for p in paths)

    def test_counts_match_adjacency_powers(self, corpus):
        for q in corpus.values():
            adj = q.adjacency_matrix()
            power = [[1 if i == j else 0 for j in range(len(adj))]
                     for i in range(len(adj))]
            for n in range(5):
                expected = sum(sum(row) for row in power)
                assert len(q.enumerate_paths(n)) == expected
                power = mat_mul_int(power, adj)

    def test_composition_right_to_left(self, c2):
        a1 = c2.arrow_path("a1")  # 1 -> 2
        a2 = c2.arrow_path("a2")  # 2 -> 1
        p = c2.compose(a2, a1)    # apply a1 first
        assert p is not None and (p.src, p.tgt) == ("1", "1")
        assert c2.compose(a1, a1) is None
        assert p.format() == "a2.a1"

    def test_path_from_word(self, c2):
        p = c2.path_from_word(["a2", "a1"])
        assert (p.src, p.tgt, len(p)) == ("1", "1", 2)
        assert c2.path_from_word(["a1", "a1"]) is None
