"""Pachner 2-3 and 3-2 moves on ideal triangulations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .errors import FlatAngleError, IllegalSite
from .triangulation import EDGES, IdealTriangulation, Perm, compose, edge_index, inverse

TWO_THREE = "2-3"
THREE_TWO = "3-2"


@dataclass(frozen=True, order=True)
class MoveSite:
    """``index`` is a face for 2-3 moves and an edge (into ``EDGES``) for 3-2 moves."""

    kind: Literal["2-3", "3-2"]
    tet: int
    index: int

    def __str__(self) -> str:
        what = "face" if self.kind == TWO_THREE else "edge"
        return f"{self.kind} tet {self.tet} {what} {self.index}"


def applicable_moves(tri: IdealTriangulation) -> list[MoveSite]:
    """All legal sites: 2-3 sites by face pair, then 3-2 sites by edge class."""
    sites = []
    for t, f in tri.face_pairs():
        t2, _ = tri.glue(t, f)
        if t2 != t:
            sites.append(MoveSite(TWO_THREE, t, f))
    for ec in tri.edge_classes:
        if ec.degree == 3 and len({t for t, _ in ec.incidences}) == 3:
            t, e = ec.incidences[0]
            sites.append(MoveSite(THREE_TWO, t, e))
    return sites


def apply_move(tri: IdealTriangulation, site: MoveSite) -> IdealTriangulation:
    """Return the triangulation after the move; ``tri`` is untouched.

    New tetrahedra are appended after the surviving ones, which keep their
    relative order.  After a 2-3 move the new edge is edge 01 of each of the
    three new tetrahedra.
    """
    if site.kind == TWO_THREE:
        return _two_three(tri, site.tet, site.index)
    if site.kind == THREE_TWO:
        return _three_two(tri, site.tet, site.index)
    raise IllegalSite(f"unknown move kind {site.kind!r}")


def created_edge_site(tri: IdealTriangulation) -> MoveSite:
    """The 3-2 site undoing a 2-3 move that produced ``tri``."""
    return MoveSite(THREE_TWO, tri.size - 3, 0)


# Region replacement.  ``new_tets`` lists each new tetrahedron as a tuple of
# four abstract point names.  ``faces`` maps each boundary face (old_tet, f)
# of the removed region to (new tet index, map old vertex -> new vertex).
def _rebuild(tri, removed: set[int], new_tets, faces) -> IdealTriangulation:
    keep = [t for t in range(tri.size) if t not in removed]
    renum = {t: i for i, t in enumerate(keep)}
    base = len(keep)
    rows: list[list] = [[None] * 4 for _ in range(base + len(new_tets))]

    for t in keep:
        for f in range(4):
            t2, p = tri.glue(t, f)
            if t2 in removed:
                k, phi = faces[t2, p[f]]
                rows[renum[t]][f] = (base + k, compose(phi, p))
            else:
                rows[renum[t]][f] = (renum[t2], p)

    for (t, f), (k, phi) in faces.items():
        t2, p = tri.glue(t, f)
        phi_inv = inverse(phi)
        if t2 in removed:
            k2, phi2 = faces[t2, p[f]]
            rows[base + k][phi[f]] = (base + k2, compose(phi2, compose(p, phi_inv)))
        else:
            rows[base + k][phi[f]] = (renum[t2], compose(p, phi_inv))

    # interior faces: new tetrahedra sharing three points
    for k, pts in enumerate(new_tets):
        for j in range(4):
            if rows[base + k][j] is not None:
                continue
            face_pts = {pts[i] for i in range(4) if i != j}
            for k2, pts2 in enumerate(new_tets):
                if k2 == k or not face_pts <= set(pts2):
                    continue
                perm = [0, 0, 0, 0]
                for i in range(4):
                    if i != j:
                        perm[i] = pts2.index(pts[i])
                perm[j] = next(i for i in range(4) if pts2[i] not in face_pts)
                rows[base + k][j] = (base + k2, tuple(perm))
                break
            else:
                raise IllegalSite("region rebuild left an unglued face")
    try:
        return IdealTriangulation(tuple(tuple(r) for r in rows))
    except FlatAngleError as exc:
        raise IllegalSite(f"move produces an invalid triangulation: {exc}") from None


def _face_map(new_pts: tuple, old_to_pt: dict[int, object], missing_old: int, missing_pt) -> Perm:
    """Vertex map old -> new for a boundary face, sending ``missing_old`` to the new point ``missing_pt``."""
    phi = [0, 0, 0, 0]
    for v, pt in old_to_pt.items():
        phi[v] = new_pts.index(pt)
    phi[missing_old] = new_pts.index(missing_pt)
    return tuple(phi)  # type: ignore[return-value]


def _two_three(tri: IdealTriangulation, t0: int, f0: int) -> IdealTriangulation:
    if not (0 <= t0 < tri.size and 0 <= f0 < 4):
        raise IllegalSite(f"no face ({t0},{f0})")
    t1, p = tri.glue(t0, f0)
    if t1 == t0:
        raise IllegalSite("2-3 move needs two distinct tetrahedra")
    a, b, c = (v for v in range(4) if v != f0)
    # points: N (apex of t0), S (apex of t1), and the shared triangle a, b, c
    new_tets = [("N", "S", b, c), ("N", "S", c, a), ("N", "S", a, b)]
    faces = {}
    for k, x in enumerate((a, b, c)):
        pts = new_tets[k]
        others = [v for v in (a, b, c) if v != x]
        # face of t0 opposite x holds N and the two others
        old0 = {f0: "N", **{v: v for v in others}}
        faces[t0, x] = (k, _face_map(pts, old0, x, "S"))
        old1 = {p[f0]: "S", **{p[v]: v for v in others}}
        faces[t1, p[x]] = (k, _face_map(pts, old1, p[x], "N"))
    return _rebuild(tri, {t0, t1}, new_tets, faces)


def _three_two(tri: IdealTriangulation, t0: int, e0: int) -> IdealTriangulation:
    if not (0 <= t0 < tri.size and 0 <= e0 < 6):
        raise IllegalSite(f"no edge ({t0},{e0})")
    ec = tri.edge_class_of(t0, e0)
    if ec.degree != 3:
        raise IllegalSite(f"3-2 move needs an edge of degree 3, found {ec.degree}")
    # walk around the edge recording each tetrahedron's (a, b, c, d) labels
    a, b = EDGES[e0]
    c, d = (v for v in range(4) if v not in (a, b))
    walk = []
    t = t0
    for _ in range(3):
        walk.append((t, a, b, c, d))
        t2, p = tri.glue(t, c)
        t, a, b, c, d = t2, p[a], p[b], p[d], p[c]
    tets = [w[0] for w in walk]
    if len(set(tets)) != 3:
        raise IllegalSite("3-2 move needs three distinct tetrahedra")
    # tetrahedron i has A=a, B=b, x_i=c, x_{i+1}=d
    new_tets = [("A", "x0", "x1", "x2"), ("B", "x0", "x1", "x2")]
    faces = {}
    for i, (t, a, b, c, d) in enumerate(walk):
        xi, xj, xk = f"x{i}", f"x{(i + 1) % 3}", f"x{(i + 2) % 3}"
        # face opposite a holds B, x_i, x_{i+1}: lands in the B tetrahedron
        faces[t, a] = (1, _face_map(new_tets[1], {b: "B", c: xi, d: xj}, a, xk))
        faces[t, b] = (0, _face_map(new_tets[0], {a: "A", c: xi, d: xj}, b, xk))
    return _rebuild(tri, set(tets), new_tets, faces)


def site_index(tri: IdealTriangulation, site: MoveSite) -> int:
    return applicable_moves(tri).index(site)
