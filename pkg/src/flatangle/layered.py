"""Ideal polygon triangulations, flips, and layered polygons.

A layered polygon stacks one flat tetrahedron per flip.  Each flat
tetrahedron built here has vertex labels ``(i, j, k, l)``: the flipped
diagonal is ``ij`` (edge 01) and the new diagonal is ``kl`` (edge 23), so the
two edges carrying angle pi are the pair 01/23 (``PI_PAIRS[0]``).
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import (
    IllegalMoveInSequence,
    MalformedInput,
    MismatchedPolygon,
    NotADiagonal,
    NotFlippable,
    UncoveredBaseEdge,
)
from .triangulation import EDGES, IdealTriangulation, Perm, _UnionFind, edge_index, face_vertices

Diagonal = tuple[int, int]

# pattern k puts pi on the opposite edges PI_PAIRS[k]
PI_PAIRS: tuple[tuple[tuple[int, int], tuple[int, int]], ...] = (
    ((0, 1), (2, 3)),
    ((0, 2), (1, 3)),
    ((0, 3), (1, 2)),
)


def _diag(a: int, b: int) -> Diagonal:
    return (a, b) if a < b else (b, a)


def crosses(d1: Diagonal, d2: Diagonal) -> bool:
    a, b = d1
    c, d = d2
    if len({a, b, c, d}) < 4:
        return False
    return (a < c < b) != (a < d < b)


@dataclass(frozen=True)
class PolygonTriangulation:
    n: int
    diagonals: frozenset[Diagonal]

    def __post_init__(self) -> None:
        diags = frozenset(_diag(*d) for d in self.diagonals)
        object.__setattr__(self, "diagonals", diags)
        if self.n < 3:
            raise MalformedInput("a polygon needs at least 3 vertices")
        if len(diags) != self.n - 3:
            raise MalformedInput(f"{self.n}-gon needs {self.n - 3} diagonals, got {len(diags)}")
        for d in diags:
            if not (0 <= d[0] < d[1] < self.n) or self.is_side(d):
                raise MalformedInput(f"{d} is not a diagonal of the {self.n}-gon")
        ds = sorted(diags)
        for i, d1 in enumerate(ds):
            for d2 in ds[i + 1:]:
                if crosses(d1, d2):
                    raise MalformedInput(f"diagonals {d1} and {d2} cross")

    def is_side(self, d: Diagonal) -> bool:
        a, b = _diag(*d)
        return b - a == 1 or (a == 0 and b == self.n - 1)

    def sides(self) -> list[Diagonal]:
        return [_diag(i, (i + 1) % self.n) for i in range(self.n)]

    def has_edge(self, a: int, b: int) -> bool:
        d = _diag(a, b)
        return d in self.diagonals or self.is_side(d)

    @property
    def triangles(self) -> list[tuple[int, int, int]]:
        out = []
        n = self.n
        for i in range(n):
            for j in range(i + 1, n):
                if not self.has_edge(i, j):
                    continue
                for k in range(j + 1, n):
                    if self.has_edge(i, k) and self.has_edge(j, k):
                        out.append((i, j, k))
        return out

    def flanking(self, d: Diagonal) -> tuple[int, int]:
        """The apexes of the two triangles on either side of diagonal ``d``."""
        a, b = d
        apexes = [k for k in range(self.n) if k not in d and self.has_edge(a, k) and self.has_edge(b, k)]
        if len(apexes) != 2:
            raise NotFlippable(f"diagonal {d} is not flanked by two triangles")
        return apexes[0], apexes[1]

    @classmethod
    def fan(cls, n: int, apex: int = 0) -> "PolygonTriangulation":
        diags = [_diag(apex, (apex + k) % n) for k in range(2, n - 1)]
        return cls(n, frozenset(diags))


def polygon_flip(pt: PolygonTriangulation, diagonal: Sequence[int]) -> PolygonTriangulation:
    d = _diag(*diagonal)
    if d not in pt.diagonals:
        raise NotADiagonal(f"{d} is not a diagonal of this triangulation")
    k, l = pt.flanking(d)
    return PolygonTriangulation(pt.n, (pt.diagonals - {d}) | {_diag(k, l)})


def flip_result(pt: PolygonTriangulation, diagonal: Sequence[int]) -> Diagonal:
    k, l = pt.flanking(_diag(*diagonal))
    return _diag(k, l)


def _to_fan(pt: PolygonTriangulation) -> list[tuple[Diagonal, Diagonal]]:
    """Flips (old, new) carrying ``pt`` to the fan at vertex 0."""
    steps = []
    while True:
        for d in sorted(pt.diagonals):
            if 0 in d:
                continue
            k, l = pt.flanking(d)
            if 0 in (k, l):
                new = _diag(k, l)
                steps.append((d, new))
                pt = polygon_flip(pt, d)
                break
        else:
            return steps


def interpolate(a: PolygonTriangulation, b: PolygonTriangulation) -> list[Diagonal]:
    """A flip sequence from ``a`` to ``b`` touching every diagonal of ``a``.

    Both triangulations are flipped to the fan at vertex 0; the second path
    is reversed.  Diagonals of ``a`` left untouched get a flip and its
    inverse appended at the end.
    """
    if a.n != b.n:
        raise MismatchedPolygon(f"{a.n}-gon vs {b.n}-gon")
    if a == b:
        return []
    forward = [old for old, _ in _to_fan(a)]
    backward = [new for _, new in reversed(_to_fan(b))]
    seq = forward + backward
    flipped = set(seq)
    state = b
    for d in sorted(a.diagonals):
        if d not in flipped:
            new = flip_result(state, d)
            seq += [d, new]
    replay = a
    for d in seq:
        replay = polygon_flip(replay, d)
    assert replay == b
    return seq


def random_polygon_triangulation(rng, n: int, flips: int = 20) -> PolygonTriangulation:
    pt = PolygonTriangulation.fan(n, rng.randrange(n))
    for _ in range(flips):
        if pt.diagonals:
            pt = polygon_flip(pt, rng.choice(sorted(pt.diagonals)))
    return pt


# ------------------------------------------------------------ layered polygons

@dataclass(frozen=True)
class LayeredPolygonSpec:
    base: PolygonTriangulation
    moves: tuple[Diagonal, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "moves", tuple(_diag(*m) for m in self.moves))


@dataclass(frozen=True)
class LayeredComplex:
    """Flat tetrahedra stacked over a polygon, one per flip.

    ``tets[i]`` is the tetrahedron (an index into the ambient triangulation,
    or ``i`` for a freshly built complex) performing flip ``moves[i]``, and
    ``labels[i][v]`` the polygon vertex at its vertex ``v``.  ``gluings`` holds
    the internal face gluings ``(t, f) -> (t2, perm)``.
    """

    n: int
    tets: tuple[int, ...]
    labels: tuple[tuple[int, int, int, int], ...]
    patterns: tuple[int, ...]
    orientation: tuple[int, ...]  # which pi edge of PI_PAIRS[pattern] is the lower diagonal
    moves: tuple[Diagonal, ...]
    base: PolygonTriangulation
    top: PolygonTriangulation
    gluings: dict = field(compare=False, repr=False)
    base_faces: dict = field(compare=False, repr=False)
    top_faces: dict = field(compare=False, repr=False)

    @property
    def vertical_boundary(self) -> list[Diagonal]:
        return self.base.sides()

    @property
    def size(self) -> int:
        return len(self.tets)


def build_layered_polygon(spec: LayeredPolygonSpec) -> LayeredComplex:
    state = spec.base
    flipped: set[Diagonal] = set()
    # exposed triangle -> (tet, face) or None while it is still a base triangle
    exposed: dict[tuple[int, ...], Optional[tuple[int, int]]] = {tri: None for tri in state.triangles}
    base_faces: dict = {}
    gluings: dict = {}
    labels = []
    for step, d in enumerate(spec.moves):
        if d not in state.diagonals:
            raise IllegalMoveInSequence(f"move {step}: {d} is not a current diagonal")
        i, j = d
        k, l = state.flanking(d)
        lab = (i, j, k, l)
        labels.append(lab)
        t = step
        for f in (2, 3):  # faces holding the old diagonal ij
            tri_key = tuple(sorted(lab[v] for v in face_vertices(f)))
            below = exposed.pop(tri_key)
            if below is None:
                base_faces[tri_key] = (t, f)
            else:
                t2, f2 = below
                perm = _label_perm(lab, f, labels[t2], f2)
                gluings[t, f] = (t2, perm)
                gluings[t2, f2] = (t, _inv(perm))
        for f in (0, 1):  # faces holding the new diagonal kl
            exposed[tuple(sorted(lab[v] for v in face_vertices(f)))] = (t, f)
        flipped.add(d)
        state = polygon_flip(state, d)
    missing = sorted(spec.base.diagonals - flipped)
    if missing:
        raise UncoveredBaseEdge(f"base diagonals never flipped: {missing}")
    top_faces = {tri: face for tri, face in exposed.items() if face is not None}
    k = len(spec.moves)
    return LayeredComplex(
        n=spec.base.n,
        tets=tuple(range(k)),
        labels=tuple(labels),
        patterns=(0,) * k,
        orientation=(0,) * k,
        moves=spec.moves,
        base=spec.base,
        top=state,
        gluings=gluings,
        base_faces=base_faces,
        top_faces=top_faces,
    )


def _label_perm(src: Sequence[int], f: int, dst: Sequence[int], f2: int) -> Perm:
    """Vertex map from face ``f`` of one tetrahedron to face ``f2`` of another, matching polygon labels."""
    perm = [0] * 4
    for v in range(4):
        if v != f:
            perm[v] = [w for w in range(4) if w != f2 and dst[w] == src[v]][0]
    perm[f] = f2
    return tuple(perm)  # type: ignore[return-value]


def _inv(p: Sequence[int]) -> Perm:
    out = [0] * 4
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)  # type: ignore[return-value]


# ------------------------------------------------------------ recognition

@dataclass(frozen=True)
class Witness:
    kind: str  # "face", "edge" or "tet"
    where: tuple
    reason: str

    def __str__(self) -> str:
        return f"{self.kind} {self.where}: {self.reason}"


@dataclass(frozen=True)
class LayeringResult:
    accepted: bool
    complexes: tuple[LayeredComplex, ...] = ()
    witness: Optional[Witness] = None

    def __bool__(self) -> bool:
        return self.accepted


class _Reject(Exception):
    def __init__(self, kind: str, where: tuple, reason: str):
        super().__init__(reason)
        self.witness = Witness(kind, where, reason)


def _coherent_faces(pattern: int, lower: int) -> tuple[tuple[int, int], tuple[int, int], Diagonal, Diagonal]:
    """(bottom faces, top faces, bottom pi edge, top pi edge) for a flat tetrahedron."""
    e_low, e_high = PI_PAIRS[pattern] if lower == 0 else PI_PAIRS[pattern][::-1]
    # faces containing an edge are the faces opposite the other two vertices
    bottom = tuple(v for v in range(4) if v not in e_low)
    top = tuple(v for v in range(4) if v not in e_high)
    return bottom, top, e_low, e_high  # type: ignore[return-value]


def recognize_layered(
    tri: IdealTriangulation, flat_tets: Iterable[int], flat_patterns: dict[int, int]
) -> LayeringResult:
    """Decompose the flat tetrahedra into layered polygons, or reject with a witness."""
    flat = sorted(set(flat_tets))
    if not flat:
        return LayeringResult(True)
    for t in flat:
        if not 0 <= t < tri.size or flat_patterns.get(t) not in (0, 1, 2):
            return LayeringResult(False, witness=Witness("tet", (t,), "flat tetrahedron without a valid pi pattern"))
    flat_set = set(flat)
    uf = _UnionFind(flat)
    for t in flat:
        for f in range(4):
            t2, _ = tri.glue(t, f)
            if t2 in flat_set:
                uf.union(t, t2)
    comps = sorted(sorted(c) for c in uf.classes().values())
    complexes = []
    try:
        for comp in comps:
            complexes.append(_recognize_component(tri, comp, flat_patterns))
        _check_contacts(tri, complexes, flat_set)
    except _Reject as rej:
        return LayeringResult(False, witness=rej.witness)
    return LayeringResult(True, tuple(complexes))


def _recognize_component(tri: IdealTriangulation, comp: list[int], patterns: dict[int, int]) -> LayeredComplex:
    members = set(comp)
    # orient: each internal gluing must join a top face to a bottom face
    lower = {comp[0]: 0}
    queue = [comp[0]]
    while queue:
        t = queue.pop()
        bottom, _, _, _ = _coherent_faces(patterns[t], lower[t])
        for f in range(4):
            t2, p = tri.glue(t, f)
            if t2 not in members:
                continue
            f2 = p[f]
            is_bottom = f in bottom
            if t2 == t:
                raise _Reject("face", (t, f), "flat tetrahedron glued to itself")
            # need f2 on the opposite side of t2
            want = None
            for choice in (0, 1):
                b2, _, _, _ = _coherent_faces(patterns[t2], choice)
                if (f2 in b2) != is_bottom:
                    want = choice
            if t2 in lower:
                b2, _, _, _ = _coherent_faces(patterns[t2], lower[t2])
                if (f2 in b2) == is_bottom:
                    side = "bottom" if is_bottom else "top"
                    raise _Reject("face", (t, f), f"{side} face glued to a {side} face of a flat tetrahedron")
            else:
                lower[t2] = want
                queue.append(t2)

    # polygon vertex labels from internal gluings only
    labels_uf = _UnionFind((t, v) for t in comp for v in range(4))
    above: dict[int, set[int]] = {t: set() for t in comp}
    indeg = {t: 0 for t in comp}
    internal: dict = {}
    for t in comp:
        _, top, _, _ = _coherent_faces(patterns[t], lower[t])
        for f in range(4):
            t2, p = tri.glue(t, f)
            if t2 in members:
                internal[t, f] = (t2, p)
                for v in range(4):
                    if v != f:
                        labels_uf.union((t, v), (t2, p[v]))
                if f in top and t2 not in above[t]:
                    above[t].add(t2)
                    indeg[t2] += 1
    roots = sorted({labels_uf.find((t, v)) for t in comp for v in range(4)})
    name = {r: i for i, r in enumerate(roots)}
    labels = {t: tuple(name[labels_uf.find((t, v))] for v in range(4)) for t in comp}
    for t in comp:
        if len(set(labels[t])) != 4:
            raise _Reject("tet", (t,), "flat tetrahedron has two vertices at the same polygon corner")

    # base: bottom faces not glued inside the component
    base_faces = {}
    top_faces = {}
    for t in comp:
        bottom, top, _, _ = _coherent_faces(patterns[t], lower[t])
        for f in bottom:
            if (t, f) not in internal:
                key = tuple(sorted(labels[t][v] for v in face_vertices(f)))
                if key in base_faces:
                    raise _Reject("face", (t, f), "two base faces share their corners")
                base_faces[key] = (t, f)
        for f in top:
            if (t, f) not in internal:
                top_faces[(t, f)] = tuple(sorted(labels[t][v] for v in face_vertices(f)))
    n = len(roots)
    order = _boundary_cycle(list(base_faces), n)
    if order is None:
        t, f = min(base_faces.values())
        raise _Reject("face", (t, f), "base faces do not form a triangulated polygon")
    pos = {lab: i for i, lab in enumerate(order)}

    def relabel(x: int) -> int:
        return pos[x]

    base_diags = set()
    for tri_key in base_faces:
        for i in range(3):
            for j in range(i + 1, 3):
                d = _diag(relabel(tri_key[i]), relabel(tri_key[j]))
                base_diags.add(d)
    base = PolygonTriangulation(n, frozenset(d for d in base_diags if not _is_side(d, n)))

    # replay in topological order, smallest tetrahedron first
    exposed: dict[tuple[int, ...], tuple] = {
        tuple(sorted(relabel(x) for x in key)): ("base", face) for key, face in base_faces.items()
    }
    state = base
    heap = [t for t in comp if indeg[t] == 0]
    heapq.heapify(heap)
    seq_tets, seq_moves = [], []
    flipped = set()
    while heap:
        t = heapq.heappop(heap)
        bottom, top, e_low, e_high = _coherent_faces(patterns[t], lower[t])
        lab = tuple(relabel(x) for x in labels[t])
        d = _diag(lab[e_low[0]], lab[e_low[1]])
        if d not in state.diagonals:
            raise _Reject("face", (t, bottom[0]), f"flat tetrahedron flips {d}, which is not a current diagonal")
        for f in bottom:
            key = tuple(sorted(lab[v] for v in face_vertices(f)))
            have = exposed.get(key)
            if (t, f) in internal:
                t2, p = internal[t, f]
                expected = ("top", (t2, p[f]))
            else:
                expected = ("base", (t, f))
            if have != expected:
                raise _Reject("face", (t, f), "bottom face does not sit on the current surface")
            del exposed[key]
        new = flip_result(state, d)
        if _diag(lab[e_high[0]], lab[e_high[1]]) != new:
            raise _Reject("edge", (t, edge_index(*e_high)), "upper pi edge is not the flipped diagonal")
        for f in top:
            exposed[tuple(sorted(lab[v] for v in face_vertices(f)))] = ("top", (t, f))
        state = polygon_flip(state, d)
        flipped.add(d)
        seq_tets.append(t)
        seq_moves.append(d)
        for t2 in sorted(above[t]):
            indeg[t2] -= 1
            if indeg[t2] == 0:
                heapq.heappush(heap, t2)
    if len(seq_tets) != len(comp):
        t = min(set(comp) - set(seq_tets))
        raise _Reject("tet", (t,), "flat tetrahedra are stacked in a cycle")
    for (t, f) in top_faces:
        key = tuple(sorted(relabel(x) for x in top_faces[t, f]))
        if exposed.get(key) != ("top", (t, f)):
            raise _Reject("face", (t, f), "top face is not on the final surface")
    missing = sorted(base.diagonals - flipped)
    if missing:
        raise _Reject("edge", missing[0], "base diagonal never flipped")
    idx = {t: i for i, t in enumerate(seq_tets)}
    return LayeredComplex(
        n=n,
        tets=tuple(seq_tets),
        labels=tuple(tuple(relabel(x) for x in labels[t]) for t in seq_tets),
        patterns=tuple(patterns[t] for t in seq_tets),
        orientation=tuple(lower[t] for t in seq_tets),
        moves=tuple(seq_moves),
        base=base,
        top=state,
        gluings={k: v for k, v in internal.items()},
        base_faces={tuple(sorted(relabel(x) for x in k)): v for k, v in base_faces.items()},
        top_faces={tuple(sorted(relabel(x) for x in v)): k for k, v in top_faces.items()},
    )


def _is_side(d: Diagonal, n: int) -> bool:
    a, b = d
    return b - a == 1 or (a == 0 and b == n - 1)


def _boundary_cycle(triangles: list[tuple[int, ...]], n: int) -> Optional[list[int]]:
    """Cyclic vertex order of a triangulated disc on ``n`` labels, or None."""
    if len(triangles) != n - 2:
        return None
    count: dict[Diagonal, int] = {}
    for tri_key in triangles:
        for i in range(3):
            for j in range(i + 1, 3):
                d = _diag(tri_key[i], tri_key[j])
                count[d] = count.get(d, 0) + 1
    if any(c > 2 for c in count.values()):
        return None
    sides = [d for d, c in count.items() if c == 1]
    if len(sides) != n:
        return None
    nbrs: dict[int, list[int]] = {}
    for a, b in sides:
        nbrs.setdefault(a, []).append(b)
        nbrs.setdefault(b, []).append(a)
    if len(nbrs) != n or any(len(v) != 2 for v in nbrs.values()):
        return None
    order = [0]
    prev, cur = None, 0
    while True:
        a, b = nbrs[cur]
        nxt = a if a != prev else b
        if nxt == 0:
            break
        order.append(nxt)
        prev, cur = cur, nxt
    if len(order) != n:
        return None
    if n > 2 and order[1] > order[-1]:
        order = [order[0]] + order[1:][::-1]
    # interior edges must be non-crossing chords of this cycle
    pos = {v: i for i, v in enumerate(order)}
    chords = [_diag(pos[a], pos[b]) for (a, b), c in count.items() if c == 2]
    for i, d1 in enumerate(chords):
        if _is_side(d1, n):
            return None
        for d2 in chords[i + 1:]:
            if crosses(d1, d2):
                return None
    return order


def _check_contacts(tri: IdealTriangulation, complexes: Sequence[LayeredComplex], flat: set[int]) -> None:
    """Layered polygons may meet only along vertical boundary edges."""
    for lc in complexes:
        uf = _UnionFind((t, e) for t in lc.tets for e in range(6))
        for (t, f), (t2, p) in lc.gluings.items():
            for e, (a, b) in enumerate(EDGES):
                if f not in (a, b):
                    uf.union((t, e), (t2, edge_index(p[a], p[b])))
        label_of = dict(zip(lc.tets, lc.labels))
        classes = uf.classes()
        for _, incs in sorted(classes.items()):
            t, e = incs[0]
            a, b = EDGES[e]
            d = _diag(label_of[t][a], label_of[t][b])
            if _is_side(d, lc.n):
                continue
            inside = set(incs)
            ec = tri.edge_class_of(t, e)
            for t2, e2 in ec.incidences:
                if t2 in flat and (t2, e2) not in inside:
                    raise _Reject("edge", (t, e), "an interior edge of a layered polygon meets another flat tetrahedron")


# ------------------------------------------------------------ text format

def parse_layered_spec(text: str) -> LayeredPolygonSpec:
    n = None
    diags: list[Diagonal] = []
    moves: list[Diagonal] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if m := re.fullmatch(r"polygon\s+n\s*=\s*(\d+)", line):
            n = int(m.group(1))
        elif line.startswith("diagonals:"):
            diags = _parse_pairs(line[len("diagonals:"):], lineno)
        elif line.startswith("moves:"):
            moves = _parse_pairs(line[len("moves:"):], lineno)
        else:
            raise MalformedInput(f"line {lineno}: unrecognised {line!r}")
    if n is None:
        raise MalformedInput("missing 'polygon n=<n>' line")
    return LayeredPolygonSpec(PolygonTriangulation(n, frozenset(diags)), tuple(moves))


def _parse_pairs(text: str, lineno: int) -> list[Diagonal]:
    out = []
    for tok in text.split():
        m = re.fullmatch(r"(\d+)-(\d+)", tok)
        if not m:
            raise MalformedInput(f"line {lineno}: bad pair {tok!r}")
        out.append(_diag(int(m.group(1)), int(m.group(2))))
    return out


def format_layered_spec(spec: LayeredPolygonSpec) -> str:
    diags = " ".join(f"{a}-{b}" for a, b in sorted(spec.base.diagonals))
    moves = " ".join(f"{a}-{b}" for a, b in spec.moves)
    return f"polygon n={spec.base.n}\ndiagonals: {diags}\nmoves: {moves}\n"


def random_spec(rng, max_n: int = 8, max_moves: int = 12) -> LayeredPolygonSpec:
    """A random legal spec (n >= 4) flipping every base diagonal within ``max_moves``."""
    while True:
        n = rng.randint(4, max_n)
        base = random_polygon_triangulation(rng, n)
        state, moves, pending = base, [], set(base.diagonals)
        while pending and len(moves) < max_moves:
            pool = sorted(pending & state.diagonals) if rng.random() < 0.6 else []
            d = rng.choice(pool or sorted(state.diagonals))
            moves.append(d)
            pending.discard(d)
            state = polygon_flip(state, d)
        while len(moves) < max_moves and rng.random() < 0.3:
            d = rng.choice(sorted(state.diagonals))
            moves.append(d)
            state = polygon_flip(state, d)
        if not pending:
            return LayeredPolygonSpec(base, tuple(moves))


def complex_gluings(lc: LayeredComplex) -> dict:
    """Internal gluings of a freshly built complex (tets numbered 0..k-1)."""
    return dict(lc.gluings)
