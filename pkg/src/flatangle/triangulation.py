"""Ideal triangulations: gluing tables, edge classes, vertex links, signatures.

Conventions: face ``f`` of a tetrahedron is the face opposite vertex ``f``.
A gluing of face ``f`` of tetrahedron ``t`` is a pair ``(t2, p)`` where ``p`` is
a permutation of ``(0, 1, 2, 3)`` (stored as a tuple, ``p[i]`` the image of
``i``) taking the vertices of ``t`` to those of ``t2``; the face lands on face
``p[f]`` of ``t2``.  Tetrahedron edges are indexed by position in ``EDGES``.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InconsistentGluing, InvalidEdge, MalformedInput, NonOrientable

Perm = tuple[int, int, int, int]

EDGES: tuple[tuple[int, int], ...] = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
EDGE_INDEX = {pair: i for i, pair in enumerate(EDGES)}
EDGE_INDEX.update({(b, a): i for (a, b), i in list(EDGE_INDEX.items())})
IDENTITY: Perm = (0, 1, 2, 3)
ALL_PERMS: tuple[Perm, ...] = tuple(itertools.permutations(range(4)))  # type: ignore[assignment]


def compose(p: Perm, q: Perm) -> Perm:
    """``p`` after ``q``."""
    return (p[q[0]], p[q[1]], p[q[2]], p[q[3]])


def inverse(p: Perm) -> Perm:
    inv = [0, 0, 0, 0]
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)  # type: ignore[return-value]


def parity(p: Perm) -> int:
    """0 for even permutations, 1 for odd."""
    inversions = sum(1 for i in range(4) for j in range(i + 1, 4) if p[i] > p[j])
    return inversions % 2


def edge_index(a: int, b: int) -> int:
    return EDGE_INDEX[(a, b)]


def face_vertices(f: int) -> tuple[int, int, int]:
    return tuple(v for v in range(4) if v != f)  # type: ignore[return-value]


def perm_str(p: Perm) -> str:
    return "".join(str(i) for i in p)


def parse_perm(text: str) -> Perm:
    if len(text) != 4 or sorted(text) != ["0", "1", "2", "3"]:
        raise MalformedInput(f"bad permutation {text!r}")
    return tuple(int(c) for c in text)  # type: ignore[return-value]


@dataclass(frozen=True)
class EdgeClass:
    id: int
    incidences: tuple[tuple[int, int], ...]  # (tet, edge index), cyclic order

    @property
    def degree(self) -> int:
        return len(self.incidences)


@dataclass(frozen=True)
class VertexLink:
    id: int
    corners: tuple[tuple[int, int], ...]  # (tet, vertex)
    vertices: int
    edges: int
    triangles: int

    @property
    def euler_char(self) -> int:
        return self.vertices - self.edges + self.triangles

    @property
    def is_torus(self) -> bool:
        return self.euler_char == 0

    @property
    def genus(self) -> int:
        return (2 - self.euler_char) // 2


class _UnionFind:
    def __init__(self, items: Iterable = ()):
        self.parent: dict = {}
        for x in items:
            self.parent[x] = x

    def find(self, x):
        parent = self.parent
        parent.setdefault(x, x)
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if repr(ra) < repr(rb):
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb

    def classes(self) -> dict:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


@dataclass(frozen=True)
class IdealTriangulation:
    """A closed, orientable gluing of ideal tetrahedra.

    Validation runs on construction; edge classes, vertex links and an
    orientation are computed eagerly and cached on the instance.
    """

    gluings: tuple[tuple[tuple[int, Perm], ...], ...]
    edge_classes: tuple[EdgeClass, ...] = field(init=False, repr=False, compare=False)
    vertex_links: tuple[VertexLink, ...] = field(init=False, repr=False, compare=False)
    orientation: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        gl = tuple(tuple((int(t), tuple(p)) for t, p in row) for row in self.gluings)
        object.__setattr__(self, "gluings", gl)
        _check_gluings(gl)
        object.__setattr__(self, "orientation", _orient(gl))
        object.__setattr__(self, "edge_classes", _edge_classes(gl))
        object.__setattr__(self, "vertex_links", _vertex_links(gl))

    @classmethod
    def from_table(cls, table: Sequence[Sequence[tuple[int, Sequence[int] | str]]]) -> "IdealTriangulation":
        rows = []
        for row in table:
            rows.append(tuple((t, parse_perm(p) if isinstance(p, str) else tuple(p)) for t, p in row))
        return cls(tuple(rows))

    @property
    def size(self) -> int:
        return len(self.gluings)

    def glue(self, t: int, f: int) -> tuple[int, Perm]:
        return self.gluings[t][f]

    def face_pairs(self) -> list[tuple[int, int]]:
        """One representative ``(t, f)`` per glued face pair, sorted."""
        out = []
        for t, row in enumerate(self.gluings):
            for f, (t2, p) in enumerate(row):
                if (t, f) <= (t2, p[f]):
                    out.append((t, f))
        return out

    def edge_class_of(self, t: int, e: int) -> EdgeClass:
        return self.edge_classes[self._edge_lookup[(t, e)]]

    @property
    def _edge_lookup(self) -> dict[tuple[int, int], int]:
        lookup = self.__dict__.get("_edge_lookup_cache")
        if lookup is None:
            lookup = {inc: ec.id for ec in self.edge_classes for inc in ec.incidences}
            self.__dict__["_edge_lookup_cache"] = lookup
        return lookup

    def vertex_class_of(self, t: int, v: int) -> VertexLink:
        lookup = self.__dict__.get("_vertex_lookup_cache")
        if lookup is None:
            lookup = {c: link.id for link in self.vertex_links for c in link.corners}
            self.__dict__["_vertex_lookup_cache"] = lookup
        return self.vertex_links[lookup[(t, v)]]

    def components(self) -> list[list[int]]:
        uf = _UnionFind(range(self.size))
        for t, row in enumerate(self.gluings):
            for t2, _ in row:
                uf.union(t, t2)
        comps = sorted(sorted(c) for c in uf.classes().values())
        return comps

    def relabel(self, order: Sequence[int], perms: Sequence[Perm]) -> "IdealTriangulation":
        """Tetrahedron ``t`` becomes ``order[t]`` with vertex ``i`` renamed ``perms[t][i]``."""
        n = self.size
        rows: list[list] = [[None] * 4 for _ in range(n)]
        for t in range(n):
            s = perms[t]
            for f in range(4):
                t2, p = self.gluings[t][f]
                new_p = compose(perms[t2], compose(p, inverse(s)))
                rows[order[t]][s[f]] = (order[t2], new_p)
        return IdealTriangulation(tuple(tuple(r) for r in rows))

    def to_text(self) -> str:
        return format_triangulation(self)


def _check_gluings(gl) -> None:
    n = len(gl)
    if n == 0:
        raise MalformedInput("triangulation has no tetrahedra")
    for t, row in enumerate(gl):
        if len(row) != 4:
            raise MalformedInput(f"tetrahedron {t} needs 4 gluings")
        for f, (t2, p) in enumerate(row):
            if not 0 <= t2 < n:
                raise InconsistentGluing(f"face ({t},{f}) glued to missing tetrahedron {t2}")
            if sorted(p) != [0, 1, 2, 3]:
                raise InconsistentGluing(f"face ({t},{f}) has invalid permutation {p}")
            f2 = p[f]
            if t2 == t and f2 == f:
                raise InconsistentGluing(f"face ({t},{f}) glued to itself")
            back_t, back_p = gl[t2][f2]
            if back_t != t or back_p != inverse(p):
                raise InconsistentGluing(
                    f"face ({t},{f}) -> ({t2},{f2}) is not reciprocated"
                )


def _orient(gl) -> tuple[int, ...]:
    """Orientation signs (+1/-1) making every gluing orientation reversing."""
    n = len(gl)
    sign = [0] * n
    for start in range(n):
        if sign[start]:
            continue
        sign[start] = 1
        queue = deque([start])
        while queue:
            t = queue.popleft()
            for f, (t2, p) in enumerate(gl[t]):
                # odd gluing keeps the sign, even gluing flips it
                want = sign[t] if parity(p) == 1 else -sign[t]
                if sign[t2] == 0:
                    sign[t2] = want
                    queue.append(t2)
                elif sign[t2] != want:
                    raise NonOrientable(f"orientation conflict across face ({t},{f})")
    return tuple(sign)


def _edge_classes(gl) -> tuple[EdgeClass, ...]:
    n = len(gl)
    seen: set[tuple[int, int]] = set()
    classes = []
    for t0 in range(n):
        for e0, (a0, b0) in enumerate(EDGES):
            if (t0, e0) in seen:
                continue
            c0, d0 = (v for v in range(4) if v not in (a0, b0))
            state = (t0, a0, b0, c0, d0)
            incidences = []
            while True:
                t, a, b, c, d = state
                e = edge_index(a, b)
                if (t, e) in seen:
                    raise InvalidEdge(f"edge {EDGES[e0]} of tetrahedron {t0} is identified with itself in reverse")
                seen.add((t, e))
                incidences.append((t, e))
                # leave through the face opposite c (it contains a, b, d)
                t2, p = gl[t][c]
                a2, b2 = p[a], p[b]
                c2 = p[d]
                d2 = p[c]
                state = (t2, a2, b2, c2, d2)
                if t2 == t0 and edge_index(a2, b2) == e0:
                    if (a2, b2) != (a0, b0):
                        raise InvalidEdge(f"edge {EDGES[e0]} of tetrahedron {t0} is identified with itself in reverse")
                    break
            classes.append(EdgeClass(len(classes), tuple(incidences)))
    return tuple(classes)


def _vertex_links(gl) -> tuple[VertexLink, ...]:
    n = len(gl)
    corners = _UnionFind((t, v) for t in range(n) for v in range(4))
    ends = _UnionFind((t, v, w) for t in range(n) for v in range(4) for w in range(4) if v != w)
    for t in range(n):
        for f in range(4):
            t2, p = gl[t][f]
            for v in range(4):
                if v == f:
                    continue
                corners.union((t, v), (t2, p[v]))
                for w in range(4):
                    if w != f and w != v:
                        ends.union((t, v, w), (t2, p[v], p[w]))
    corner_classes = sorted(sorted(c) for c in corners.classes().values())
    end_classes = ends.classes()
    links = []
    for i, cls in enumerate(corner_classes):
        members = set(cls)
        verts = sum(1 for root in end_classes if (root[0], root[1]) in members)
        tris = len(cls)
        links.append(VertexLink(i, tuple(cls), verts, 3 * tris // 2, tris))
    return tuple(links)


# ---------------------------------------------------------------- file format

_TET_LINE = re.compile(r"^t\s*(\d+)\s*:\s*(.*)$")


def parse_triangulation(text: str) -> IdealTriangulation:
    """Parse the ``tets N`` / ``t i: t0 p0 | ...`` text format."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if not lines:
        raise MalformedInput("empty triangulation file")
    lineno, head = lines[0]
    m = re.fullmatch(r"tets\s+(\d+)", head)
    if not m:
        raise MalformedInput(f"line {lineno}: expected 'tets N'")
    n = int(m.group(1))
    if n < 1:
        raise MalformedInput(f"line {lineno}: need at least one tetrahedron")
    if len(lines) - 1 != n:
        raise MalformedInput(f"expected {n} tetrahedron lines, found {len(lines) - 1}")
    rows: list = [None] * n
    for lineno, line in lines[1:]:
        m = _TET_LINE.match(line)
        if not m:
            raise MalformedInput(f"line {lineno}: expected 't <i>: ...'")
        t = int(m.group(1))
        if t >= n or rows[t] is not None:
            raise MalformedInput(f"line {lineno}: bad or repeated tetrahedron index {t}")
        parts = [p.split() for p in m.group(2).split("|")]
        if len(parts) != 4 or any(len(p) != 2 for p in parts):
            raise MalformedInput(f"line {lineno}: expected four '<tet> <perm>' entries")
        row = []
        for dest, perm in parts:
            if not dest.isdigit():
                raise MalformedInput(f"line {lineno}: bad tetrahedron {dest!r}")
            try:
                row.append((int(dest), parse_perm(perm)))
            except MalformedInput as exc:
                raise MalformedInput(f"line {lineno}: {exc}") from None
        rows[t] = tuple(row)
    return IdealTriangulation(tuple(rows))


def format_triangulation(tri: IdealTriangulation) -> str:
    out = [f"tets {tri.size}"]
    for t, row in enumerate(tri.gluings):
        entries = " | ".join(f"{t2} {perm_str(p)}" for t2, p in row)
        out.append(f"t {t}: {entries}")
    return "\n".join(out) + "\n"


# ------------------------------------------------------------ signatures

def _component_code(tri: IdealTriangulation, comp: Sequence[int]):
    best = None
    for start in comp:
        for sigma in ALL_PERMS:
            order = {start: 0}
            labels = {start: sigma}
            queue = [start]
            code = []
            i = 0
            while i < len(queue):
                t = queue[i]
                i += 1
                s = labels[t]
                s_inv = inverse(s)
                for new_face in range(4):
                    old_face = s_inv[new_face]
                    t2, p = tri.gluings[t][old_face]
                    if t2 not in order:
                        order[t2] = len(queue)
                        labels[t2] = compose(s, inverse(p))
                        queue.append(t2)
                    new_p = compose(labels[t2], compose(p, s_inv))
                    code.append((order[t2], new_p))
                if best is not None and code > best[: len(code)]:
                    break
            else:
                if best is None or code < best:
                    best = code
    return best


def iso_signature(tri: IdealTriangulation) -> str:
    """Canonical text for ``tri`` up to relabelling tetrahedra and vertices."""
    parts = []
    for comp in tri.components():
        code = _component_code(tri, comp)
        n = len(comp)
        body = ",".join(f"{d}/{perm_str(p)}" for d, p in code)
        parts.append(f"{n};{body}")
    return "+".join(sorted(parts))


def from_signature(sig: str) -> IdealTriangulation:
    rows: list = []
    try:
        for part in sig.strip().split("+"):
            head, body = part.split(";")
            n = int(head)
            entries = body.split(",")
            if len(entries) != 4 * n:
                raise ValueError
            offset = len(rows)
            for t in range(n):
                row = []
                for f in range(4):
                    d, p = entries[4 * t + f].split("/")
                    row.append((offset + int(d), parse_perm(p)))
                rows.append(tuple(row))
    except (ValueError, MalformedInput):
        raise MalformedInput(f"bad signature {sig!r}") from None
    return IdealTriangulation(tuple(rows))


def edge_classes(tri: IdealTriangulation) -> list[EdgeClass]:
    return list(tri.edge_classes)


def vertex_links(tri: IdealTriangulation) -> list[VertexLink]:
    return list(tri.vertex_links)
