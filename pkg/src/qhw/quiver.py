"""Finite quivers, paths, the quiver text format, and combinatorial queries.

Composition convention: paths compose right to left, i.e. p*q is
defined when s(p) = t(q) and means "apply q first".  A Path stores its
arrows in application order (arrows[0] is applied first), so the
written word alpha_n ... alpha_1 is the reverse of the stored tuple.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import (
    DuplicateNameError,
    QuiverSyntaxError,
    UnknownVertexError,
)

_NAME_RE = re.compile(r"[A-Za-z0-9_'-]+")


@dataclass(frozen=True)
class Arrow:
    name: str
    src: str
    tgt: str


@dataclass(frozen=True)
class Path:
    """A path in a fixed quiver; trivial paths carry their vertex in src == tgt."""

    arrows: tuple[str, ...]
    src: str
    tgt: str

    def __len__(self):
        return len(self.arrows)

    @property
    def word(self):
        """Arrow names in written order (last applied first)."""
        return tuple(reversed(self.arrows))

    def format(self):
        if not self.arrows:
            return f"e_{self.src}"
        return ".".join(self.word)

    def sort_key(self):
        return (len(self.arrows), self.word, self.src)


class Quiver:
    def __init__(self, vertices, arrows):
        self.vertices = list(vertices)
        self.arrows = [a if isinstance(a, Arrow) else Arrow(*a) for a in arrows]
        self._check()
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}
        self.arrow_by_name = {a.name: a for a in self.arrows}
        self._out = {v: [] for v in self.vertices}
        self._in = {v: [] for v in self.vertices}
        for a in self.arrows:
            self._out[a.src].append(a)
            self._in[a.tgt].append(a)

    def _check(self):
        seen = set()
        for v in self.vertices:
            if v in seen:
                raise DuplicateNameError(f"duplicate vertex name {v!r}")
            seen.add(v)
        vs = set(self.vertices)
        seen = set()
        for a in self.arrows:
            if a.name in seen:
                raise DuplicateNameError(f"duplicate arrow name {a.name!r}")
            seen.add(a.name)
            for endpoint in (a.src, a.tgt):
                if endpoint not in vs:
                    raise UnknownVertexError(
                        f"arrow {a.name!r} uses undeclared vertex {endpoint!r}"
                    )

    # -- basic queries ---------------------------------------------------

    def arrows_from(self, v):
        return list(self._out[v])

    def arrows_into(self, v):
        return list(self._in[v])

    def sinks(self):
        return [v for v in self.vertices if not self._out[v]]

    def sources(self):
        return [v for v in self.vertices if not self._in[v]]

    def classify_vertices(self):
        """(sinks, sources): no arrows start at a sink, none end at a source."""
        return self.sinks(), self.sources()

    def is_sink_free(self):
        return not self.sinks()

    def opposite(self) -> "Quiver":
        return Quiver(
            self.vertices, [Arrow(a.name, a.tgt, a.src) for a in self.arrows]
        )

    def double(self) -> "DoubleQuiver":
        return DoubleQuiver(self)

    def adjacency_matrix(self):
        """Integer matrix with entry (i, j) = number of arrows j -> i."""
        n = len(self.vertices)
        m = [[0] * n for _ in range(n)]
        for a in self.arrows:
            m[self.vertex_index[a.tgt]][self.vertex_index[a.src]] += 1
        return m

    # -- paths -------------------------------------------------------------

    def trivial_path(self, v) -> Path:
        if v not in self.vertex_index:
            raise UnknownVertexError(f"unknown vertex {v!r}")
        return Path((), v, v)

    def arrow_path(self, name) -> Path:
        a = self.arrow_by_name[name]
        return Path((name,), a.src, a.tgt)

    def compose(self, p: Path, q: Path) -> Path | None:
        """p*q, q applied first; None when s(p) != t(q)."""
        if p.src != q.tgt:
            return None
        return Path(q.arrows + p.arrows, q.src, p.tgt)

    def extend(self, p: Path, arrow: Arrow) -> Path | None:
        """arrow*p (apply p, then arrow)."""
        if arrow.src != p.tgt:
            return None
        return Path(p.arrows + (arrow.name,), p.src, arrow.tgt)

    def path_from_word(self, names) -> Path | None:
        """Build a path from arrow names in written order; None if not composable."""
        seq = list(names)
        if not seq:
            raise ValueError("empty word needs an anchor vertex; use trivial_path")
        p = self.arrow_path(seq[-1])
        for name in reversed(seq[:-1]):
            p = self.extend(p, self.arrow_by_name[name])
            if p is None:
                return None
        return p

    def enumerate_paths(self, n) -> list[Path]:
        """All length-n paths, ordered lexicographically by written word."""
        if n < 0:
            raise ValueError("path length must be >= 0")
        level = [self.trivial_path(v) for v in self.vertices]
        for _ in range(n):
            nxt = []
            for p in level:
                for a in self._out[p.tgt]:
                    nxt.append(self.extend(p, a))
            level = nxt
        return sorted(level, key=Path.sort_key)

    def paths_up_to(self, n):
        return {k: self.enumerate_paths(k) for k in range(n + 1)}

    # -- serialization -------------------------------------------------------

    def serialize(self) -> str:
        out = "vertices: " + " ".join(self.vertices) + "\n"
        if self.arrows:
            out += (
                "arrows: "
                + ", ".join(f"{a.name}: {a.src} -> {a.tgt}" for a in self.arrows)
                + "\n"
            )
        return out

    def __repr__(self):
        return f"Quiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"

    def __eq__(self, other):
        if not isinstance(other, Quiver):
            return NotImplemented
        return self.vertices == other.vertices and self.arrows == other.arrows

    def __hash__(self):
        return hash((tuple(self.vertices), tuple(self.arrows)))


class DoubleQuiver:
    """The base quiver plus one ghost arrow alpha* per arrow alpha.

    Ghost arrows are only addressable through this wrapper; their names
    are the base names suffixed with '*'.
    """

    def __init__(self, base: Quiver):
        self.base = base
        self.ghost_names = {a.name: a.name + "*" for a in base.arrows}

    def letter_endpoints(self, name: str, ghost: bool):
        a = self.base.arrow_by_name[name]
        return (a.tgt, a.src) if ghost else (a.src, a.tgt)

    def as_quiver(self) -> Quiver:
        arrows = list(self.base.arrows) + [
            Arrow(a.name + "*", a.tgt, a.src) for a in self.base.arrows
        ]
        return Quiver(self.base.vertices, arrows)


def _token_error(line_no, line, pos, message):
    return QuiverSyntaxError(message, line_no, pos + 1)


def parse_quiver(text: str) -> Quiver:
    """Parse the quiver text format.

    Lines:  `vertices: <name> <name> ...`
            `arrows: <name>: <src> -> <tgt>[, ...]`   (repeatable)
    """
    vertices = None
    arrows = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("vertices:"):
            if vertices is not None:
                raise _token_error(line_no, raw, 0, "repeated vertices line")
            names = line[len("vertices:"):].split()
            for name in names:
                if not _NAME_RE.fullmatch(name):
                    raise _token_error(
                        line_no, raw, raw.find(name), f"bad vertex name {name!r}"
                    )
            vertices = names
        elif line.startswith("arrows:"):
            body = line[len("arrows:"):].strip()
            if not body:
                continue
            for chunk in body.split(","):
                chunk = chunk.strip()
                m = re.fullmatch(
                    r"(?P<name>\S+)\s*:\s*(?P<src>\S+)\s*->\s*(?P<tgt>\S+)", chunk
                )
                if m is None:
                    raise _token_error(
                        line_no, raw, raw.find(chunk), f"bad arrow clause {chunk!r}"
                    )
                name = m.group("name")
                if not _NAME_RE.fullmatch(name):
                    raise _token_error(
                        line_no, raw, raw.find(name), f"bad arrow name {name!r}"
                    )
                arrows.append(Arrow(name, m.group("src"), m.group("tgt")))
        else:
            raise _token_error(
                line_no, raw, 0, "expected a 'vertices:' or 'arrows:' line"
            )
    if vertices is None:
        if arrows:
            raise UnknownVertexError("arrows declared before any vertices")
        raise QuiverSyntaxError("no vertices line", 1, 1)
    return Quiver(vertices, arrows)


def serialize_quiver(q: Quiver) -> str:
    return q.serialize()


# -- stock quivers used throughout the test corpus ------------------------


def loop_quiver() -> Quiver:
    """R1: one vertex, one loop."""
    return Quiver(["v"], [Arrow("a", "v", "v")])


def rose_quiver(k, vertex="v") -> Quiver:
    """R_k: one vertex, k loops named a, b, c, ..."""
    names = [chr(ord("a") + i) for i in range(k)]
    return Quiver([vertex], [Arrow(n, vertex, vertex) for n in names])


def cycle_quiver(n) -> Quiver:
    """C_n: vertices 1..n, arrows a1: 1 -> 2, ..., an: n -> 1."""
    vs = [str(i + 1) for i in range(n)]
    arrows = [
        Arrow(f"a{i + 1}", vs[i], vs[(i + 1) % n]) for i in range(n)
    ]
    return Quiver(vs, arrows)
