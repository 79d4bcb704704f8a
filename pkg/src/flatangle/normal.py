"""2-normal surfaces: coordinates, matching equations, area, Euler characteristic, assembly.

Each tetrahedron carries ten coordinates::

    T0 T1 T2 T3   triangle cutting off vertex v
    S01 S02 S03   square separating {0, k} from the other pair
    O01 O02 O03   octagon separating {0, k} from the other pair, crossing
                  edge 0k and its opposite edge twice

A square or octagon of index ``k`` has pairing ``{0, k} | {i, j}``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import DiscsNotAdjacent, MalformedInput, NegativeEntry, NotAdmissible, NotMatching, ReferenceMismatch
from .triangulation import EDGE_INDEX, EDGES, IdealTriangulation, _UnionFind, face_vertices, parity

NormalVector = tuple[int, ...]

COORDS = 10
NAMES = ("T0", "T1", "T2", "T3", "S01", "S02", "S03", "O01", "O02", "O03")
TRIANGLE, SQUARE, OCTAGON = "triangle", "square", "octagon"


def kind(j: int) -> str:
    return TRIANGLE if j < 4 else SQUARE if j < 7 else OCTAGON


def pairing(j: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """The vertex pairing of square/octagon coordinate ``j``, the group holding 0 first."""
    k = (j - 4) % 3 + 1
    i, l = (v for v in (1, 2, 3) if v != k)
    return (0, k), (i, l)


def pairing_index(a: int, b: int) -> int:
    """Index 1..3 of the pairing that puts ``a`` and ``b`` together."""
    if 0 in (a, b):
        return a + b
    return next(v for v in (1, 2, 3) if v not in (a, b))


def square_of(a: int, b: int) -> int:
    return 3 + pairing_index(a, b)


def octagon_of(a: int, b: int) -> int:
    return 6 + pairing_index(a, b)


def edge_multiplicity(j: int) -> tuple[int, ...]:
    """How many times one piece of coordinate ``j`` crosses each of the six edges."""
    if j < 4:
        return tuple(1 if j in e else 0 for e in EDGES)
    (a, b), (c, d) = pairing(j)
    inner = {EDGE_INDEX[(a, b)], EDGE_INDEX[(c, d)]}
    if j < 7:
        return tuple(0 if i in inner else 1 for i in range(6))
    return tuple(2 if i in inner else 1 for i in range(6))


MULT = tuple(edge_multiplicity(j) for j in range(COORDS))


def arc_pieces(f: int, v: int) -> tuple[int, ...]:
    """Coordinates whose pieces contribute one arc cutting off ``v`` in face ``f``."""
    x, y = (w for w in range(4) if w not in (f, v))
    return (v, square_of(f, v), octagon_of(v, x), octagon_of(v, y))


# ------------------------------------------------------------------ vectors

def check_vector(tri: IdealTriangulation, v: Sequence[int]) -> NormalVector:
    if len(v) != COORDS * tri.size:
        raise ReferenceMismatch(f"vector has {len(v)} entries, expected {COORDS * tri.size}")
    if any(x < 0 for x in v):
        raise NegativeEntry("normal coordinates must be non-negative")
    return tuple(int(x) for x in v)


def tet_coords(v: Sequence[int], t: int) -> Sequence[int]:
    return v[COORDS * t:COORDS * (t + 1)]


def is_admissible(v: Sequence[int]) -> bool:
    if any(x < 0 for x in v):
        raise NegativeEntry("normal coordinates must be non-negative")
    for t in range(len(v) // COORDS):
        block = tet_coords(v, t)
        if sum(1 for x in block[4:] if x) > 1:
            return False
    return True


def octagon_count(v: Sequence[int]) -> int:
    return sum(v[COORDS * t + j] for t in range(len(v) // COORDS) for j in range(7, 10))


def has_quads_or_octs(v: Sequence[int]) -> bool:
    return any(v[COORDS * t + j] for t in range(len(v) // COORDS) for j in range(4, 10))


@dataclass(frozen=True)
class MatchingSystem:
    rows: tuple[tuple[int, ...], ...]
    labels: tuple[tuple[int, int, int], ...]  # (tet, face, vertex cut off) of each row

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0]) if self.rows else 0

    def residual(self, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(a * x for a, x in zip(row, v) if a) for row in self.rows)

    def satisfied(self, v: Sequence[int]) -> bool:
        return not any(self.residual(v))


def matching_matrix(tri: IdealTriangulation) -> MatchingSystem:
    rows, labels = [], []
    width = COORDS * tri.size
    for t, f in tri.face_pairs():
        t2, p = tri.glue(t, f)
        for v in face_vertices(f):
            row = [0] * width
            for j in arc_pieces(f, v):
                row[COORDS * t + j] += 1
            for j in arc_pieces(p[f], p[v]):
                row[COORDS * t2 + j] -= 1
            rows.append(tuple(row))
            labels.append((t, f, v))
    return MatchingSystem(tuple(rows), tuple(labels))


def vertex_link_vector(tri: IdealTriangulation, link_id: Optional[int] = None) -> NormalVector:
    """Triangle vector of one vertex link (or of all of them)."""
    v = [0] * (COORDS * tri.size)
    for link in tri.vertex_links:
        if link_id is not None and link.id != link_id:
            continue
        for t, w in link.corners:
            v[COORDS * t + w] += 1
    return tuple(v)


def _require_surface(tri: IdealTriangulation, v: Sequence[int]) -> NormalVector:
    v = check_vector(tri, v)
    if not is_admissible(v):
        raise NotAdmissible("two square/octagon types share a tetrahedron")
    if not matching_matrix(tri).satisfied(v):
        raise NotMatching("vector violates the matching equations")
    return v


# ------------------------------------------------------------------ area and chi

def piece_area(j: int, angles: Sequence[Fraction]) -> Fraction:
    """Area of one piece of coordinate ``j``, in units of pi."""
    return sum((m * (1 - angles[e]) for e, m in enumerate(MULT[j]) if m), Fraction(0)) - 2


def combinatorial_area(tri: IdealTriangulation, v: Sequence[int], angles: Sequence[Sequence[Fraction]]) -> Fraction:
    if len(angles) != tri.size:
        raise ReferenceMismatch(f"{len(angles)} angle rows for {tri.size} tetrahedra")
    v = check_vector(tri, v)
    total = Fraction(0)
    for t in range(tri.size):
        for j, x in enumerate(tet_coords(v, t)):
            if x:
                total += x * piece_area(j, angles[t])
    return total


def edge_weight(v: Sequence[int], t: int, e: int) -> int:
    block = tet_coords(v, t)
    return sum(MULT[j][e] * block[j] for j in range(COORDS))


def euler_characteristic(tri: IdealTriangulation, v: Sequence[int], angles=None) -> int:
    """V - E + F from cell counts; with angles, also checks area = -2 pi chi."""
    v = _require_surface(tri, v)
    verts = sum(edge_weight(v, *ec.incidences[0]) for ec in tri.edge_classes)
    arcs2 = sum(v[COORDS * t + j] * sum(MULT[j]) for t in range(tri.size) for j in range(COORDS))
    faces = sum(v)
    chi = verts - arcs2 // 2 + faces
    if angles is not None:
        area = combinatorial_area(tri, v, angles)
        if area != -2 * chi:
            raise AssertionError(f"area {area} does not equal -2 chi = {-2 * chi}")
    return chi


# ------------------------------------------------------------------ assembly

Piece = tuple[int, int, int]  # (tet, coordinate, copy)


def _rank_order(j: int, count: int, v: int) -> list[int]:
    """Copies of square/octagon ``j`` ordered by distance from vertex ``v``."""
    first, _ = pairing(j)
    return list(range(count)) if v in first else list(range(count - 1, -1, -1))


def _around(v: Sequence[int], t: int, f: int, vert: int) -> list[Piece]:
    """Pieces with an arc cutting off ``vert`` in face ``f``, nearest the vertex first."""
    block = tet_coords(v, t)
    out = [(t, vert, c) for c in range(block[vert])]
    for j in arc_pieces(f, vert)[1:]:
        out.extend((t, j, c) for c in _rank_order(j, block[j], vert))
    return out


def edge_sequence(v: Sequence[int], t: int, a: int, b: int) -> list[Piece]:
    """Pieces crossing edge ``ab`` of tetrahedron ``t``, in order from ``a``."""
    block = tet_coords(v, t)
    e = EDGE_INDEX[(min(a, b), max(a, b))]
    middle_a: list[Piece] = []
    middle_b: list[Piece] = []
    for j in range(4, COORDS):
        if block[j] and MULT[j][e]:
            middle_a += [(t, j, c) for c in _rank_order(j, block[j], a)]
            if MULT[j][e] == 2:
                middle_b += [(t, j, c) for c in _rank_order(j, block[j], b)]
    near_a = [(t, a, c) for c in range(block[a])]
    near_b = [(t, b, c) for c in range(block[b])]
    return near_a + middle_a + middle_b[::-1] + near_b[::-1]


@dataclass
class Component:
    pieces: list[Piece]
    euler_char: int
    orientable: bool
    vertices: int
    edges: int

    @property
    def genus(self) -> Optional[int]:
        return (2 - self.euler_char) // 2 if self.orientable else None

    @property
    def triangle_only(self) -> bool:
        return all(j < 4 for _, j, _ in self.pieces)

    @property
    def octagons(self) -> int:
        return sum(1 for _, j, _ in self.pieces if j >= 7)


@dataclass
class SurfaceComplex:
    vector: NormalVector
    components: list[Component]
    component_of: dict[Piece, int] = field(repr=False)
    flips: dict[Piece, int] = field(repr=False)
    cycles: dict[Piece, list] = field(repr=False)
    orientation: tuple[int, ...] = field(default=(), repr=False)

    @property
    def euler_char(self) -> int:
        return sum(c.euler_char for c in self.components)


def reconstruct_surface(tri: IdealTriangulation, v: Sequence[int]) -> SurfaceComplex:
    """Glue parallel copies of the pieces into a cell complex and read off its topology."""
    v = _require_surface(tri, v)
    n = tri.size
    pieces: list[Piece] = [
        (t, j, c) for t in range(n) for j in range(COORDS) for c in range(v[COORDS * t + j])
    ]
    # points on tetrahedron edges: (t, edge, index from the lower endpoint)
    seq = {}
    for t in range(n):
        for a, b in EDGES:
            seq[t, a, b] = edge_sequence(v, t, a, b)
            seq[t, b, a] = seq[t, a, b][::-1]

    def point(t: int, a: int, b: int, k: int) -> tuple[int, int, int]:
        if a < b:
            return (t, EDGE_INDEX[(a, b)], k)
        return (t, EDGE_INDEX[(b, a)], len(seq[t, b, a]) - 1 - k)

    # arcs (t, f, vert, k) and their endpoints
    arc_piece: dict[tuple, Piece] = {}
    arc_ends: dict[tuple, tuple] = {}
    for t in range(n):
        for f in range(4):
            for vert in face_vertices(f):
                x, y = (w for w in face_vertices(f) if w != vert)
                for k, pc in enumerate(_around(v, t, f, vert)):
                    # the arc's endpoints are the k-th crossings from vert on vx and vy
                    assert seq[t, vert, x][k] == pc and seq[t, vert, y][k] == pc
                    arc_piece[t, f, vert, k] = pc
                    arc_ends[t, f, vert, k] = (point(t, vert, x, k), point(t, vert, y, k))

    # boundary cycle of each piece, as a list of (arc, start point, end point)
    by_piece: dict[Piece, list] = {pc: [] for pc in pieces}
    for arc, pc in arc_piece.items():
        by_piece[pc].append(arc)
    cycles: dict[Piece, list] = {}
    for pc, arcs in by_piece.items():
        at_point: dict = {}
        for arc in arcs:
            for p in arc_ends[arc]:
                at_point.setdefault(p, []).append(arc)
        assert all(len(a) == 2 for a in at_point.values()), pc
        start = min(arcs)
        cyc = []
        arc, here = start, arc_ends[start][0]
        while True:
            p0, p1 = arc_ends[arc]
            there = p1 if here == p0 else p0
            cyc.append((arc, here, there))
            nxt = [a for a in at_point[there] if a != arc][0]
            arc, here = nxt, there
            if arc == start:
                break
        assert len(cyc) == len(arcs), pc
        cycles[pc] = cyc

    # glue arcs across faces
    piece_uf = _UnionFind(pieces)
    point_uf = _UnionFind(p for ends in arc_ends.values() for p in ends)
    arc_pairs = []
    flip_edges: dict[Piece, list] = {pc: [] for pc in pieces}
    direction: dict[tuple, tuple] = {}
    for pc, cyc in cycles.items():
        for arc, here, there in cyc:
            direction[arc] = (here, there)
    for t, f in tri.face_pairs():
        t2, p = tri.glue(t, f)
        for vert in face_vertices(f):
            k = 0
            while (t, f, vert, k) in arc_piece:
                a1 = (t, f, vert, k)
                a2 = (t2, p[f], p[vert], k)
                if a2 not in arc_piece:
                    raise NotMatching(f"unmatched arc at face ({t},{f})")
                x, y = (w for w in face_vertices(f) if w != vert)
                e1 = {point(t, vert, x, k): point(t2, p[vert], p[x], k), point(t, vert, y, k): point(t2, p[vert], p[y], k)}
                for q1, q2 in e1.items():
                    point_uf.union(q1, q2)
                pc1, pc2 = arc_piece[a1], arc_piece[a2]
                piece_uf.union(pc1, pc2)
                s1, _ = direction[a1]
                s2, _ = direction[a2]
                same = e1[s1] == s2
                # consistent orientations traverse a shared arc in opposite directions
                flip_edges[pc1].append((pc2, 1 if same else 0))
                flip_edges[pc2].append((pc1, 1 if same else 0))
                arc_pairs.append((pc1, a1))
                k += 1
            if (t2, p[f], p[vert], k) in arc_piece:
                raise NotMatching(f"unmatched arc at face ({t2},{p[f]})")

    roots = sorted({piece_uf.find(pc) for pc in pieces}, key=lambda r: min(x for x in pieces if piece_uf.find(x) == r))
    comp_index = {r: i for i, r in enumerate(roots)}
    component_of = {pc: comp_index[piece_uf.find(pc)] for pc in pieces}
    members: list[list[Piece]] = [[] for _ in roots]
    for pc in pieces:
        members[component_of[pc]].append(pc)

    flips: dict[Piece, int] = {}
    orientable = [True] * len(roots)
    for ci, comp in enumerate(members):
        start = comp[0]
        flips[start] = 0
        stack = [start]
        while stack:
            pc = stack.pop()
            for other, rel in flip_edges[pc]:
                want = flips[pc] ^ rel
                if other not in flips:
                    flips[other] = want
                    stack.append(other)
                elif flips[other] != want:
                    orientable[ci] = False

    point_classes: dict = {}
    for arc, (p0, p1) in arc_ends.items():
        ci = component_of[arc_piece[arc]]
        for q in (p0, p1):
            point_classes.setdefault(ci, set()).add(point_uf.find(q))
    edge_count = [0] * len(roots)
    for pc, _ in arc_pairs:
        edge_count[component_of[pc]] += 1
    comps = []
    for ci, comp in enumerate(members):
        nv = len(point_classes.get(ci, ()))
        chi = nv - edge_count[ci] + len(comp)
        comps.append(Component(comp, chi, orientable[ci], nv, edge_count[ci]))
    return SurfaceComplex(v, comps, component_of, flips, cycles, tri.orientation)


def classify_peripheral(tri: IdealTriangulation, sc: SurfaceComplex) -> list[bool]:
    """A component is peripheral when it is built from triangles only and links a torus cusp."""
    out = []
    for comp in sc.components:
        if not comp.triangle_only:
            out.append(False)
            continue
        links = {tri.vertex_class_of(t, j).id for t, j, _ in comp.pieces}
        out.append(len(links) == 1 and tri.vertex_links[links.pop()].is_torus)
    return out


# ------------------------------------------------------------------ tubes

@dataclass(frozen=True, order=True)
class Tube:
    """A tube parallel to edge ``edge`` of ``tet`` between the crossings ``gap`` and ``gap + 1``.

    ``gap`` counts from the lower endpoint of the edge.
    """

    tet: int
    edge: int
    gap: int
    disc_a: Piece
    disc_b: Piece


@dataclass(frozen=True)
class TubedSurface:
    base: NormalVector
    tube: Tube
    euler_char: int
    components: tuple[tuple[int, bool], ...]  # (chi, orientable) per component

    @property
    def genera(self) -> tuple[Optional[int], ...]:
        return tuple((2 - chi) // 2 if o else None for chi, o in self.components)


def tube_sites(tri: IdealTriangulation, v: Sequence[int]) -> list[Tube]:
    """One tube per pair of distinct discs that are consecutive along an edge of a tetrahedron."""
    seen = set()
    out = []
    for t in range(tri.size):
        for e, (a, b) in enumerate(EDGES):
            s = edge_sequence(v, t, a, b)
            for k in range(len(s) - 1):
                pa, pb = s[k], s[k + 1]
                key = (t, min(pa, pb), max(pa, pb))
                if pa == pb or key in seen:
                    continue
                seen.add(key)
                out.append(Tube(t, e, k, pa, pb))
    return out


def _normal_toward_b(sc: SurfaceComplex, pc: Piece, t: int, a: int, b: int, pt: tuple) -> bool:
    """Whether the oriented piece's normal points toward ``b`` where it crosses edge ``ab`` at ``pt``."""
    cyc = sc.cycles[pc]
    for i, (arc, here, there) in enumerate(cyc):
        if there == pt:
            f_in = arc[1]
            f_out = cyc[(i + 1) % len(cyc)][0][1]
            break
    else:
        raise DiscsNotAdjacent(f"{pc} does not cross the edge at {pt}")
    # leaving the face that holds a, b, c for the one holding a, b, d
    c, d = f_out, f_in
    sign = (1 if parity((a, b, c, d)) == 0 else -1) * sc.orientation[t]
    toward = sign == -1
    return toward != bool(sc.flips[pc])


def attach_tube(tri: IdealTriangulation, base: Sequence[int], tube: Tube, sc: Optional[SurfaceComplex] = None) -> TubedSurface:
    base = _require_surface(tri, base)
    if octagon_count(base):
        raise DiscsNotAdjacent("tubes attach to normal surfaces only")
    if not (0 <= tube.tet < tri.size and 0 <= tube.edge < 6):
        raise DiscsNotAdjacent("tube names a cell that does not exist")
    a, b = EDGES[tube.edge]
    s = edge_sequence(base, tube.tet, a, b)
    k = tube.gap
    if not (0 <= k < len(s) - 1) or (s[k], s[k + 1]) != (tube.disc_a, tube.disc_b) or s[k] == s[k + 1]:
        raise DiscsNotAdjacent(f"discs {tube.disc_a} and {tube.disc_b} are not consecutive along that edge")
    if sc is None:
        sc = reconstruct_surface(tri, base)
    pt_a = (tube.tet, tube.edge, k)
    pt_b = (tube.tet, tube.edge, k + 1)
    ca, cb = sc.component_of[tube.disc_a], sc.component_of[tube.disc_b]
    comps = [(c.euler_char, c.orientable) for c in sc.components]
    if ca == cb:
        chi, orient = comps[ca]
        face_a = _normal_toward_b(sc, tube.disc_a, tube.tet, a, b, pt_a)
        face_b = not _normal_toward_b(sc, tube.disc_b, tube.tet, a, b, pt_b)
        comps[ca] = (chi - 2, orient and face_a == face_b)
    else:
        lo, hi = sorted((ca, cb))
        merged = (comps[lo][0] + comps[hi][0] - 2, comps[lo][1] and comps[hi][1])
        comps[lo] = merged
        del comps[hi]
    return TubedSurface(base, tube, sc.euler_char - 2, tuple(comps))


def compress_tubes(ts: TubedSurface) -> NormalVector:
    return ts.base


# ------------------------------------------------------------------ files

_SURF_LINE = re.compile(r"^t\s*(\d+)\s*:\s*T\s+([\d\s]+)\|\s*S\s+([\d\s]+)\|\s*O\s+([\d\s]+)$")


def parse_surfaces(text: str) -> list[tuple[str, NormalVector]]:
    """Surface vector files may hold several ``surface <name>`` blocks."""
    out: list[tuple[str, dict[int, list[int]]]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("surface"):
            name = line[len("surface"):].strip()
            if not name:
                raise MalformedInput(f"line {lineno}: surface needs a name")
            out.append((name, {}))
            continue
        m = _SURF_LINE.match(line)
        if not m or not out:
            raise MalformedInput(f"line {lineno}: unrecognised {line!r}")
        groups = [g.split() for g in m.groups()[1:]]
        if [len(g) for g in groups] != [4, 3, 3]:
            raise MalformedInput(f"line {lineno}: need 4 + 3 + 3 coordinates")
        t = int(m.group(1))
        if t in out[-1][1]:
            raise MalformedInput(f"line {lineno}: tet {t} given twice")
        out[-1][1][t] = [int(x) for g in groups for x in g]
    result = []
    for name, rows in out:
        if sorted(rows) != list(range(len(rows))):
            raise MalformedInput(f"surface {name}: tetrahedra must be numbered 0..N-1")
        result.append((name, tuple(x for t in range(len(rows)) for x in rows[t])))
    if not result:
        raise MalformedInput("no surfaces")
    return result


def format_surface(name: str, v: Sequence[int]) -> str:
    lines = [f"surface {name}"]
    for t in range(len(v) // COORDS):
        b = tet_coords(v, t)
        lines.append(
            f"t {t}: T {' '.join(map(str, b[:4]))} | S {' '.join(map(str, b[4:7]))} | O {' '.join(map(str, b[7:]))}"
        )
    return "\n".join(lines) + "\n"


def vector_text(v: Iterable[int]) -> str:
    return ",".join(map(str, v))
