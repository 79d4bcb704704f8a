"""Small named triangulations and census helpers used by tests and scripts."""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator

from .errors import FlatAngleError
from .triangulation import ALL_PERMS, IdealTriangulation, face_vertices, from_signature, iso_signature, parity

FIGURE_EIGHT_TEXT = """\
# two-tetrahedron census triangulation of the figure-eight knot complement
tets 2
t 0: 1 1302 | 1 2031 | 1 0321 | 1 2103
t 1: 0 1302 | 0 2031 | 0 0321 | 0 2103
"""


def figure_eight() -> IdealTriangulation:
    return IdealTriangulation.from_table(
        [
            [(1, "1302"), (1, "2031"), (1, "0321"), (1, "2103")],
            [(0, "1302"), (0, "2031"), (0, "0321"), (0, "2103")],
        ]
    )


# Triangulations carrying a verified angle structure.  The 4-tetrahedron
# entries come from figure-eight and m003 by two 2-3 moves and a relabelling.
STRUCTURED = {
    "figure-eight": "2;1/0123,1/1203,1/1032,1/3021,0/0123,0/1320,0/2013,0/1032",
    "m003": "2;1/0123,1/0231,1/3210,1/2013,0/0123,0/3210,0/0312,0/1203",
    "genus2-cusp-a": "2;0/1230,0/3012,1/0123,1/0231,1/3012,0/0312,0/0123,1/1230",
    "genus2-cusp-b": "2;1/0123,1/0231,1/1032,1/2301,0/0123,0/2301,0/0312,0/1032",
    "m003-23": "4;0/1230,0/3012,1/0123,2/0123,2/1230,2/3012,0/0123,3/0123,"
    "1/1230,1/3012,3/3210,0/0123,3/2310,2/3210,3/3201,1/0123",
    "fig8-23": "4;0/1230,0/3012,1/0123,2/0123,3/0123,3/2301,0/0123,2/0132,"
    "3/1032,3/3210,1/0132,0/0123,1/0123,2/1032,2/3210,1/2301",
}

# (triangulation, flat tetrahedra with their patterns) admitting a structure
# with a non-empty layered flat part.
FLAT_EXAMPLES = (
    ("m003-23", {1: 1}),
    ("m003-23", {2: 1}),
    ("fig8-23", {1: 0}),
    ("fig8-23", {2: 0}),
)


def structured(name: str) -> IdealTriangulation:
    return from_signature(STRUCTURED[name])


def _pairings(items: list):
    if not items:
        yield []
        return
    first = items[0]
    for i in range(1, len(items)):
        rest = items[1:i] + items[i + 1:]
        for tail in _pairings(rest):
            yield [(first, items[i])] + tail


def census(n: int) -> Iterator[IdealTriangulation]:
    """All connected closed orientable ideal triangulations with ``n`` tetrahedra.

    Yields one representative per isomorphism class, in signature order.
    """
    for sig in _census_signatures(n):
        yield from_signature(sig)


@lru_cache(maxsize=None)
def _census_signatures(n: int) -> tuple[str, ...]:
    """Signatures for ``census``; the search is slow, so it runs once per size.

    Only odd gluing permutations are tried: every orientable triangulation
    has a relabelling with all tetrahedra positively oriented.
    """
    faces = [(t, f) for t in range(n) for f in range(4)]
    odd = {}
    for f in range(4):
        for g in range(4):
            odd[f, g] = [p for p in ALL_PERMS if p[f] == g and parity(p) == 1]
    seen: dict[str, IdealTriangulation] = {}
    for pairing in _pairings(faces):
        if any(a == b for a, b in pairing):
            continue
        choices = [odd[a[1], b[1]] for a, b in pairing]
        for perms in itertools.product(*choices):
            rows = [[None] * 4 for _ in range(n)]
            for ((t, f), (t2, f2)), p in zip(pairing, perms):
                inv = [0] * 4
                for i, j in enumerate(p):
                    inv[j] = i
                rows[t][f] = (t2, p)
                rows[t2][f2] = (t, tuple(inv))
            try:
                tri = IdealTriangulation(tuple(tuple(r) for r in rows))
            except FlatAngleError:
                continue
            if len(tri.components()) != 1:
                continue
            sig = iso_signature(tri)
            seen.setdefault(sig, tri)
    return tuple(sorted(seen))


def cone_off(gluings: dict[tuple[int, int], tuple[int, tuple[int, ...]]], size: int) -> IdealTriangulation:
    """Close a partial gluing by coning each unglued face to a new apex.

    ``gluings`` maps ``(t, f)`` to ``(t2, perm)`` for the glued faces of a
    complex with ``size`` tetrahedra (both directions present).  One cone
    tetrahedron is appended per unglued face, with the face on its vertices
    0, 1, 2 (in increasing order of the original labels) and the apex at 3.
    """
    boundary = [(t, f) for t in range(size) for f in range(4) if (t, f) not in gluings]
    cone_of = {face: size + i for i, face in enumerate(boundary)}
    rows: list[list] = [[None] * 4 for _ in range(size + len(boundary))]
    for (t, f), (t2, p) in gluings.items():
        rows[t][f] = (t2, tuple(p))

    def walk(t: int, f: int, a: int, b: int):
        # from boundary face (t, f) across its edge ab to the next boundary face
        exit_face = next(v for v in range(4) if v not in (a, b, f))
        while (t, exit_face) in gluings:
            t2, p = gluings[t, exit_face]
            a, b, entry = p[a], p[b], p[exit_face]
            t = t2
            exit_face = next(v for v in range(4) if v not in (a, b, entry))
        return t, exit_face, a, b

    for (t, f), c in cone_of.items():
        verts = face_vertices(f)
        rows[c][3] = (t, verts + (f,))
        rows[t][f] = (c, _inverse_of(verts + (f,)))
        for i in range(3):
            a, b = (verts[j] for j in range(3) if j != i)
            t2, f2, a2, b2 = walk(t, f, a, b)
            c2 = cone_of[t2, f2]
            verts2 = face_vertices(f2)
            ia, ib = verts.index(a), verts.index(b)
            ja, jb = verts2.index(a2), verts2.index(b2)
            jr = 3 - ja - jb
            perm = [0, 0, 0, 3]
            perm[ia], perm[ib], perm[i] = ja, jb, jr
            rows[c][i] = (c2, tuple(perm))
    return IdealTriangulation(tuple(tuple(r) for r in rows))


def _inverse_of(p: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * 4
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)
