"""Strict and partially flat angle structures, in exact rationals (units of pi)."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .errors import MalformedInput, PreconditionViolated, ReferenceMismatch, StructureMismatch
from .layered import PI_PAIRS, LayeredComplex, Witness, recognize_layered
from .lp import OPTIMAL, maximize
from .triangulation import EDGE_INDEX, EDGES, IdealTriangulation, iso_signature

Angles = tuple[tuple[Fraction, ...], ...]

POSITIVE = -1
# edges meeting vertex v
VERTEX_EDGES = tuple(tuple(i for i, e in enumerate(EDGES) if v in e) for v in range(4))
OPPOSITE = ((0, 5), (1, 4), (2, 3))  # 01|23, 02|13, 03|12 as edge indices


def flat_angles(pattern: int) -> tuple[Fraction, ...]:
    pi_edges = {EDGE_INDEX[e] for e in PI_PAIRS[pattern]}
    return tuple(Fraction(1) if i in pi_edges else Fraction(0) for i in range(6))


def flat_pattern(angles: Sequence[Fraction]) -> Optional[int]:
    """The pi pattern of a flat tetrahedron, or None if the angles are not flat."""
    for k in range(3):
        if tuple(angles) == flat_angles(k):
            return k
    return None


@dataclass(frozen=True)
class PartiallyFlatStructure:
    angles: Angles
    flat: dict[int, int] = field(default_factory=dict)
    layering: tuple[LayeredComplex, ...] = ()
    epsilon: Optional[Fraction] = None

    @property
    def flat_tets(self) -> list[int]:
        return sorted(self.flat)

    @property
    def is_strict(self) -> bool:
        return not self.flat


@dataclass
class ConditionResult:
    name: str
    passed: bool
    witnesses: list[str] = field(default_factory=list)


@dataclass
class StructureReport:
    conditions: list[ConditionResult]
    layering: tuple[LayeredComplex, ...] = ()

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def __getitem__(self, name: str) -> ConditionResult:
        return next(c for c in self.conditions if c.name == name)

    def lines(self) -> list[str]:
        out = []
        for c in self.conditions:
            out.append(f"{c.name}: {'pass' if c.passed else 'FAIL'}")
            out.extend(f"  {w}" for w in c.witnesses)
        return out


# ------------------------------------------------------------------ LP

def _angle_lp(tri: IdealTriangulation, flat: dict[int, int]) -> tuple[Optional[Angles], Optional[Fraction]]:
    """Maximise the minimum slack eps over the non-flat tetrahedra.

    Variables are the six angles of each positive tetrahedron followed by
    eps; constraints are eps <= x <= 1 - eps, vertex sums <= 1 and edge sums
    equal to 2 once the flat contributions are subtracted.
    """
    pos = [t for t in range(tri.size) if t not in flat]
    col = {t: 6 * i for i, t in enumerate(pos)}
    nv = 6 * len(pos) + 1
    eps = nv - 1
    a_ub, b_ub, a_eq, b_eq = [], [], [], []

    def row() -> list[int]:
        return [0] * nv

    for t in pos:
        for e in range(6):
            r = row()
            r[eps], r[col[t] + e] = 1, -1
            a_ub.append(r)
            b_ub.append(0)
            r = row()
            r[eps], r[col[t] + e] = 1, 1
            a_ub.append(r)
            b_ub.append(1)
        for v in range(4):
            r = row()
            for e in VERTEX_EDGES[v]:
                r[col[t] + e] = 1
            a_ub.append(r)
            b_ub.append(1)
    r = row()
    r[eps] = 1
    a_ub.append(r)
    b_ub.append(1)
    for ec in tri.edge_classes:
        r = row()
        rhs = Fraction(2)
        for t, e in ec.incidences:
            if t in flat:
                rhs -= flat_angles(flat[t])[e]
            else:
                r[col[t] + e] += 1
        a_eq.append(r)
        b_eq.append(rhs)
    objective = row()
    objective[eps] = 1
    res = maximize(objective, a_ub, b_ub, a_eq, b_eq)
    if res.status != OPTIMAL:
        return None, None
    x = res.x
    angles = []
    for t in range(tri.size):
        if t in flat:
            angles.append(flat_angles(flat[t]))
        else:
            angles.append(tuple(x[col[t]:col[t] + 6]))
    return tuple(angles), x[eps]


def strict_angle_lp(tri: IdealTriangulation) -> tuple[Optional[Angles], Fraction]:
    """Angles with every value in [eps, 1 - eps] for the optimal eps.

    Returns ``(angles, eps)`` when the optimum is positive and
    ``(None, eps)`` otherwise; eps is -1 when even eps = 0 is infeasible.
    """
    angles, eps = _angle_lp(tri, {})
    if angles is None:
        return None, Fraction(-1)
    if eps <= 0:
        return None, eps
    return angles, eps


@dataclass(frozen=True)
class FlatSearchResult:
    structure: Optional[PartiallyFlatStructure]
    examined: int

    @property
    def found(self) -> bool:
        return self.structure is not None


def _assignments(tri: IdealTriangulation) -> Iterator[dict[int, int]]:
    """Flat-pattern choices in product order (positive, pattern 0, 1, 2), edge-sum pruned."""
    n = tri.size
    choice: list[int] = []
    ec_of = [[tri.edge_class_of(t, e).id for e in range(6)] for t in range(n)]
    classes = tri.edge_classes
    last_tet = {ec.id: max(t for t, _ in ec.incidences) for ec in classes}

    def ok(depth: int) -> bool:
        t = depth - 1
        touched = {ec_of[t][e] for e in range(6)}
        for cid in touched:
            pis, positive = 0, 0
            for t2, e2 in classes[cid].incidences:
                if t2 >= depth:
                    continue
                c = choice[t2]
                if c == POSITIVE:
                    positive += 1
                else:
                    pis += flat_angles(c)[e2]
            if pis > 2 or (pis == 2 and positive):
                return False
            if last_tet[cid] < depth and pis < 2 and not positive:
                return False
        return True

    def rec(depth: int) -> Iterator[dict[int, int]]:
        if depth == n:
            yield {t: c for t, c in enumerate(choice) if c != POSITIVE}
            return
        for c in (POSITIVE, 0, 1, 2):
            choice.append(c)
            if ok(depth + 1):
                yield from rec(depth + 1)
            choice.pop()

    yield from rec(0)


def _structure_for(tri: IdealTriangulation, flat: dict[int, int]) -> Optional[PartiallyFlatStructure]:
    layering = ()
    if flat:
        res = recognize_layered(tri, flat, flat)
        if not res:
            return None
        layering = res.complexes
    angles, eps = _angle_lp(tri, flat)
    if angles is None:
        return None
    if len(flat) < tri.size and eps <= 0:
        return None
    return PartiallyFlatStructure(angles, dict(flat), layering, eps if len(flat) < tri.size else None)


def partially_flat_search(tri: IdealTriangulation, limit: Optional[int] = None) -> FlatSearchResult:
    """First flat assignment (in enumeration order) admitting a partially flat structure."""
    examined = 0
    for flat in _assignments(tri):
        if limit is not None and examined >= limit:
            break
        examined += 1
        s = _structure_for(tri, flat)
        if s is not None:
            return FlatSearchResult(s, examined)
    return FlatSearchResult(None, examined)


def iter_structures(tri: IdealTriangulation) -> Iterator[PartiallyFlatStructure]:
    """Every partially flat structure the search could return, one per flat assignment."""
    for flat in _assignments(tri):
        s = _structure_for(tri, flat)
        if s is not None:
            yield s


def find_structure(tri: IdealTriangulation) -> Optional[PartiallyFlatStructure]:
    return partially_flat_search(tri).structure


# ------------------------------------------------------------------ checks

def verify_structure(tri: IdealTriangulation, s: PartiallyFlatStructure | Angles) -> StructureReport:
    angles = s.angles if isinstance(s, PartiallyFlatStructure) else tuple(tuple(a) for a in s)
    if len(angles) != tri.size or any(len(a) != 6 for a in angles):
        raise ReferenceMismatch(f"structure has {len(angles)} tetrahedra, triangulation has {tri.size}")
    rng = ConditionResult("range", True)
    for t, a in enumerate(angles):
        for e, x in enumerate(a):
            if not 0 <= x <= 1:
                rng.passed = False
                rng.witnesses.append(f"tet {t} edge {_ename(e)} = {x}")
    c1 = ConditionResult("(i) vertex sums <= pi", True)
    for t, a in enumerate(angles):
        for v in range(4):
            total = sum(a[e] for e in VERTEX_EDGES[v])
            if total > 1:
                c1.passed = False
                c1.witnesses.append(f"tet {t} vertex {v} sum = {total}")
    c2 = ConditionResult("(ii) edge sums = 2pi", True)
    for ec in tri.edge_classes:
        total = sum(angles[t][e] for t, e in ec.incidences)
        if total != 2:
            c2.passed = False
            c2.witnesses.append(f"edge class {ec.id} sum = {total}")
    c3 = ConditionResult("(iii) non-positive tetrahedra are flat", True)
    flat = {}
    for t, a in enumerate(angles):
        if all(0 < x < 1 for x in a):
            continue
        k = flat_pattern(a)
        if k is None:
            c3.passed = False
            c3.witnesses.append(f"tet {t} angles {' '.join(str(x) for x in a)} are not a flat pattern")
        else:
            flat[t] = k
    if isinstance(s, PartiallyFlatStructure) and s.flat and s.flat != flat:
        c3.passed = False
        c3.witnesses.append(f"declared flat set {sorted(s.flat.items())} differs from angles {sorted(flat.items())}")
    c4 = ConditionResult("(iv) flat part is layered", True)
    res = recognize_layered(tri, flat, flat)
    if not res:
        c4.passed = False
        c4.witnesses.append(str(res.witness))
    return StructureReport([rng, c1, c2, c3, c4], res.complexes)


def opposite_equality_check(tri: IdealTriangulation, angles: Angles) -> bool:
    if len(angles) != tri.size:
        raise ReferenceMismatch(f"{len(angles)} angle rows for {tri.size} tetrahedra")
    for t, a in enumerate(angles):
        for v in range(4):
            total = sum(a[e] for e in VERTEX_EDGES[v])
            if total != 1:
                raise PreconditionViolated(f"tet {t} vertex {v} sums to {total}, not 1")
    return all(a[i] == a[j] for a in angles for i, j in OPPOSITE)


def _ename(e: int) -> str:
    return "".join(map(str, EDGES[e]))


# ------------------------------------------------------------------ files

_EDGE_NAMES = [_ename(e) for e in range(6)]


def format_angles(angles: Angles) -> str:
    lines = []
    for t, a in enumerate(angles):
        lines.append(f"t {t}: " + " ".join(f"{_EDGE_NAMES[e]}={a[e]}" for e in range(6)))
    return "\n".join(lines) + "\n"


def format_structure(tri: IdealTriangulation, s: PartiallyFlatStructure) -> str:
    out = [f"triangulation: {iso_signature(tri)}", format_angles(s.angles).rstrip("\n")]
    if s.flat:
        out.append("flat: " + " ".join(f"{t}:{k}" for t, k in sorted(s.flat.items())))
    for i, lc in enumerate(s.layering):
        tets = ",".join(map(str, lc.tets))
        moves = ",".join(f"{a}-{b}" for a, b in lc.moves)
        diags = ",".join(f"{a}-{b}" for a, b in sorted(lc.base.diagonals))
        out.append(f"layer {i}: n={lc.n} tets={tets} base={diags} moves={moves}")
    return "\n".join(out) + "\n"


_ANGLE_LINE = re.compile(r"^t\s*(\d+)\s*:\s*(.*)$")


@dataclass(frozen=True)
class StructureFile:
    signature: Optional[str]
    structure: PartiallyFlatStructure
    layers: tuple[tuple[int, tuple[int, ...], tuple[tuple[int, int], ...]], ...]


def parse_structure(text: str) -> StructureFile:
    """Parse an angle file or a structure file (angle lines plus optional extras)."""
    sig = None
    rows: dict[int, tuple[Fraction, ...]] = {}
    flat: dict[int, int] = {}
    layers = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("triangulation:"):
            sig = line.split(":", 1)[1].strip()
        elif line.startswith("flat:"):
            for tok in line[5:].split():
                m = re.fullmatch(r"(\d+):([012])", tok)
                if not m:
                    raise MalformedInput(f"line {lineno}: bad flat entry {tok!r}")
                flat[int(m.group(1))] = int(m.group(2))
        elif line.startswith("layer"):
            m = re.fullmatch(r"layer\s+\d+\s*:\s*n=(\d+)\s+tets=([\d,]+)\s+base=([\d,\-]*)\s+moves=([\d,\-]+)", line)
            if not m:
                raise MalformedInput(f"line {lineno}: bad layer line")
            tets = tuple(int(x) for x in m.group(2).split(","))
            moves = tuple(tuple(int(y) for y in x.split("-")) for x in m.group(4).split(","))
            layers.append((int(m.group(1)), tets, moves))
        elif m := _ANGLE_LINE.match(line):
            t = int(m.group(1))
            vals = {}
            for tok in m.group(2).split():
                key, _, val = tok.partition("=")
                if key not in _EDGE_NAMES or not val:
                    raise MalformedInput(f"line {lineno}: bad angle entry {tok!r}")
                try:
                    vals[key] = Fraction(val)
                except (ValueError, ZeroDivisionError):
                    raise MalformedInput(f"line {lineno}: bad rational {val!r}") from None
            if set(vals) != set(_EDGE_NAMES):
                raise MalformedInput(f"line {lineno}: tet {t} needs all six edges")
            if t in rows:
                raise MalformedInput(f"line {lineno}: tet {t} given twice")
            rows[t] = tuple(vals[k] for k in _EDGE_NAMES)
        else:
            raise MalformedInput(f"line {lineno}: unrecognised {line!r}")
    if not rows:
        raise MalformedInput("no angle lines")
    if sorted(rows) != list(range(len(rows))):
        raise MalformedInput("tetrahedra must be numbered 0..N-1")
    angles = tuple(rows[t] for t in range(len(rows)))
    return StructureFile(sig, PartiallyFlatStructure(angles, flat), tuple(layers))


def load_verified_structure(tri: IdealTriangulation, text: str) -> tuple[PartiallyFlatStructure, StructureReport]:
    """Parse a structure file and check it against ``tri``; mismatches raise StructureMismatch."""
    sf = parse_structure(text)
    if sf.signature is not None and sf.signature != iso_signature(tri):
        raise StructureMismatch("structure file was written for a different triangulation")
    try:
        report = verify_structure(tri, sf.structure)
    except ReferenceMismatch as exc:
        raise StructureMismatch(str(exc)) from None
    if not report.passed:
        bad = next(c for c in report.conditions if not c.passed)
        raise StructureMismatch(f"structure fails {bad.name}: {'; '.join(bad.witnesses[:3])}")
    flat = {t: flat_pattern(a) for t, a in enumerate(sf.structure.angles) if flat_pattern(a) is not None}
    for n, tets, moves in sf.layers:
        if not any(lc.n == n and set(lc.tets) == set(tets) and len(lc.moves) == len(moves) for lc in report.layering):
            raise StructureMismatch(f"layering certificate for tets {tets} does not match")
    s = PartiallyFlatStructure(sf.structure.angles, flat, report.layering)
    return s, report
