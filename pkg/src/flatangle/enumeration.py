"""Vertex and fundamental 2-normal surfaces, and bounded-genus enumeration."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Optional, Sequence

from .angles import PartiallyFlatStructure
from .cones import Vec, extreme_rays, lift, restrict, solve_cone
from .errors import GenusTooSmall, ResourceLimit
from .normal import (
    COORDS,
    NAMES,
    Tube,
    attach_tube,
    classify_peripheral,
    is_admissible,
    matching_matrix,
    octagon_count,
    reconstruct_surface,
    tube_sites,
)
from .triangulation import EDGES, IdealTriangulation

NORMAL, OCTAGON_KIND, TUBED = "normal", "octagon", "tubed"


@dataclass(frozen=True)
class EnumerationConfig:
    genus: int = 1
    cone_cap: int = 20000
    max_candidates: int = 200000
    include_octagons: bool = True
    include_tubes: bool = True


@dataclass(frozen=True)
class AdmissibleCone:
    selection: tuple[int, ...]  # per tetrahedron, the square/octagon coordinate (4..9) allowed

    def coords(self) -> list[int]:
        out = []
        for t, j in enumerate(self.selection):
            out += [COORDS * t + i for i in range(4)] + [COORDS * t + j]
        return out

    def contains(self, v: Sequence[int]) -> bool:
        for t, j in enumerate(self.selection):
            for i in range(4, COORDS):
                if i != j and v[COORDS * t + i]:
                    return False
        return True


def admissible_cones(tri: IdealTriangulation, octagons: bool = True) -> list[AdmissibleCone]:
    choices = range(4, COORDS) if octagons else range(4, 7)
    return [AdmissibleCone(sel) for sel in itertools.product(choices, repeat=tri.size)]


@dataclass
class FundamentalSet:
    tri: IdealTriangulation
    cones: list[AdmissibleCone]
    cone_basis: list[tuple[Vec, ...]]
    cone_rays: list[tuple[Vec, ...]]
    members: list[Vec] = field(default_factory=list)
    peripheral: list[Vec] = field(default_factory=list)
    non_peripheral: list[Vec] = field(default_factory=list)
    chi: dict[Vec, int] = field(default_factory=dict)

    def cones_containing(self, v: Sequence[int]) -> list[int]:
        return [i for i, c in enumerate(self.cones) if c.contains(v)]


def _key(v: Vec) -> tuple:
    return (sum(v), v)


def _solve_all(tri: IdealTriangulation, cap: int, octagons: bool = True):
    rows = matching_matrix(tri).rows
    n = COORDS * tri.size
    cones = admissible_cones(tri, octagons)
    bases, rays = [], []
    cache: dict = {}
    for cone in cones:
        sol = solve_cone(rows, cone.coords(), n, cap, cache)
        bases.append(sol.basis)
        rays.append(sol.rays)
    return cones, bases, rays


def vertex_solutions(tri: IdealTriangulation, octagons: bool = True) -> list[Vec]:
    """Primitive integer points on the extreme rays of every admissible cone."""
    rows = matching_matrix(tri).rows
    n = COORDS * tri.size
    out = set()
    for cone in admissible_cones(tri, octagons):
        coords = cone.coords()
        for r in extreme_rays(restrict(rows, coords), len(coords)):
            out.add(lift(r, coords, n))
    return sorted(out, key=_key)


def fundamental_solutions(tri: IdealTriangulation, cap: int = 20000, octagons: bool = True) -> FundamentalSet:
    cones, bases, rays = _solve_all(tri, cap, octagons)
    members = sorted({b for basis in bases for b in basis}, key=_key)
    fs = FundamentalSet(tri, cones, bases, rays, members)
    for v in members:
        sc = reconstruct_surface(tri, v)
        fs.chi[v] = sc.euler_char
        if len(sc.components) == 1 and all(classify_peripheral(tri, sc)):
            fs.peripheral.append(v)
        else:
            fs.non_peripheral.append(v)
    return fs


def decomposes(fs: FundamentalSet, v: Sequence[int]) -> bool:
    """Whether ``v`` is a non-negative integer combination of basis members of one cone."""
    v = tuple(v)
    for ci in fs.cones_containing(v):
        basis = fs.cone_basis[ci]

        @lru_cache(maxsize=None)
        def rec(w: Vec) -> bool:
            if not any(w):
                return True
            for b in basis:
                if all(x <= y for x, y in zip(b, w)):
                    if rec(tuple(y - x for x, y in zip(b, w))):
                        return True
            return False

        if rec(v):
            return True
    return False


def random_surface(fs: FundamentalSet, rng, max_entry: int = 5, max_terms: int = 6) -> Vec:
    """A random non-zero admissible matching vector with every entry at most ``max_entry``."""
    pools = sorted({basis for basis in fs.cone_basis if basis})
    while True:
        basis = rng.choice(pools)
        v = [0] * len(basis[0])
        for _ in range(rng.randint(1, max_terms)):
            w = [x + y for x, y in zip(v, rng.choice(basis))]
            if max(w) <= max_entry:
                v = w
        if any(v):
            return tuple(v)


# ------------------------------------------------------------------ enumeration

@dataclass(frozen=True)
class SurfaceRecord:
    kind: str
    vector: Vec
    components: tuple[tuple[int, bool, Optional[int], bool], ...]  # (chi, orientable, genus, peripheral)
    tube: Optional[Tube] = None

    @property
    def euler_char(self) -> int:
        return sum(c[0] for c in self.components)

    @property
    def genus(self) -> Optional[int]:
        """Largest component genus; None when some component is non-orientable."""
        if not all(c[1] for c in self.components):
            return None
        return max((c[2] for c in self.components), default=0)

    @property
    def total_genus(self) -> Optional[int]:
        if not all(c[1] for c in self.components):
            return None
        return sum(c[2] for c in self.components)

    def sort_key(self) -> tuple:
        return (("normal", "octagon", "tubed").index(self.kind), sum(self.vector), self.vector, self.tube or ())


@dataclass
class EnumerationReport:
    genus_bound: int
    non_peripheral_bound: int
    peripheral_bound: int
    fundamentals: int
    peripheral_fundamentals: int
    candidates: int
    surfaces: list[SurfaceRecord]

    def lines(self) -> list[str]:
        out = [
            f"genus_bound={self.genus_bound}",
            f"non_peripheral_multiplicity_max={self.non_peripheral_bound}",
            f"peripheral_multiplicity_max={self.peripheral_bound}",
            f"fundamentals={self.fundamentals}",
            f"peripheral_fundamentals={self.peripheral_fundamentals}",
            f"candidates={self.candidates}",
            f"surfaces={len(self.surfaces)}",
        ]
        for i, s in enumerate(self.surfaces):
            comps = ";".join(
                f"{chi}:{'o' if o else 'n'}:{'-' if g is None else g}:{'p' if p else 'np'}" for chi, o, g, p in s.components
            )
            line = f"surface={i} kind={s.kind} chi={s.euler_char} genus={s.genus} components={comps} vector={','.join(map(str, s.vector))}"
            if s.tube is not None:
                t = s.tube
                a, b = EDGES[t.edge]
                line += f" tube=tet{t.tet}:edge{a}{b}:gap{t.gap}"
            out.append(line)
        return out


def _combinations(items: Sequence[Vec], total_max: int) -> Iterator[tuple[int, ...]]:
    """Multiplicity tuples with sum at most ``total_max``."""
    k = len(items)

    def rec(i: int, left: int) -> Iterator[tuple[int, ...]]:
        if i == k:
            yield ()
            return
        for m in range(left + 1):
            for rest in rec(i + 1, left - m):
                yield (m,) + rest

    yield from rec(0, total_max)


def _record(tri: IdealTriangulation, v: Vec, kind: str) -> tuple[SurfaceRecord, object]:
    sc = reconstruct_surface(tri, v)
    periph = classify_peripheral(tri, sc)
    comps = tuple((c.euler_char, c.orientable, c.genus, p) for c, p in zip(sc.components, periph))
    return SurfaceRecord(kind, v, comps), sc


def enumerate_bounded_genus(
    tri: IdealTriangulation,
    structure: Optional[PartiallyFlatStructure],
    n: int,
    config: Optional[EnumerationConfig] = None,
    fundamentals: Optional[FundamentalSet] = None,
) -> EnumerationReport:
    """Closed orientable normal and almost normal surfaces with every component of genus at most ``n``.

    Candidates are sums of fundamental surfaces from one admissible cone with
    at most ``2n - 1`` non-peripheral summands and at most ``n`` peripheral
    ones.  ``structure`` is accepted for the caller's record; it has already
    been verified.
    """
    if n < 1:
        raise GenusTooSmall("genus bound must be at least 1")
    config = config or EnumerationConfig(genus=n)
    fs = fundamentals or fundamental_solutions(tri, config.cone_cap, config.include_octagons)
    periph = set(fs.peripheral)
    np_max, p_max = 2 * n - 1, n
    seen: set[Vec] = set()
    candidates = 0
    normal_records: list[SurfaceRecord] = []
    surfaces: list[SurfaceRecord] = []
    size = COORDS * tri.size
    for basis in fs.cone_basis:
        nonp = [b for b in basis if b not in periph]
        per = [b for b in basis if b in periph]
        for mn in _combinations(nonp, np_max):
            partial = [0] * size
            for m, b in zip(mn, nonp):
                if m:
                    for i, x in enumerate(b):
                        partial[i] += m * x
            for mp in _combinations(per, p_max):
                v = list(partial)
                for m, b in zip(mp, per):
                    if m:
                        for i, x in enumerate(b):
                            v[i] += m * x
                vt = tuple(v)
                if not any(vt) or vt in seen:
                    continue
                seen.add(vt)
                candidates += 1
                if candidates > config.max_candidates:
                    raise ResourceLimit(f"more than {config.max_candidates} candidate vectors")
                octs = octagon_count(vt)
                if octs > 1 or (octs and not config.include_octagons):
                    continue
                assert is_admissible(vt)
                rec, sc = _record(tri, vt, OCTAGON_KIND if octs else NORMAL)
                if rec.genus is None or rec.genus > n:
                    continue
                surfaces.append(rec)
                if not octs:
                    normal_records.append(rec)
    if config.include_tubes:
        for rec in sorted(normal_records, key=SurfaceRecord.sort_key):
            sc = reconstruct_surface(tri, rec.vector)
            for tube in tube_sites(tri, rec.vector):
                ts = attach_tube(tri, rec.vector, tube, sc)
                if not all(o for _, o in ts.components):
                    continue
                if max(ts.genera) > n:
                    continue
                comps = tuple((chi, o, (2 - chi) // 2, False) for chi, o in ts.components)
                surfaces.append(SurfaceRecord(TUBED, rec.vector, comps, tube))
    surfaces.sort(key=SurfaceRecord.sort_key)
    return EnumerationReport(n, np_max, p_max, len(fs.members), len(fs.peripheral), candidates, surfaces)


def coordinate_names(tri: IdealTriangulation) -> list[str]:
    return [f"t{t}.{name}" for t in range(tri.size) for name in NAMES]
