"""Command line driver: ``flatangle <command> ...``.

Every command prints an ordered list of fields, either as ``key: value``
lines (``--format text``) or as ``key=value`` lines (``--format machine``).
Library errors map to their ``exit_code``; a search that finds nothing exits
with ``EXIT_NOT_FOUND``.
"""

from __future__ import annotations

import argparse
import sys
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, TextIO

from .angles import (
    PartiallyFlatStructure,
    format_structure,
    load_verified_structure,
    parse_structure,
    partially_flat_search,
    verify_structure,
)
from .enumeration import EnumerationConfig, enumerate_bounded_genus
from .errors import FlatAngleError, IllegalSite, MalformedInput, ResourceLimit, StructureMismatch
from .moves import applicable_moves, apply_move
from .normal import classify_peripheral, combinatorial_area, parse_surfaces, reconstruct_surface
from .splittings import (
    amalgamated_genus,
    format_ledger,
    genus_bounds,
    make_ledger,
    parse_ledger,
    partial_amalgamate,
    satisfies_block_bound,
)
from .triangulation import (
    IdealTriangulation,
    format_triangulation,
    from_signature,
    iso_signature,
    parse_triangulation,
)

EXIT_NOT_FOUND = 13
FOUND, NOT_FOUND, LIMIT = "Found", "NotFound", "ResourceLimit"

Fields = list[tuple[str, object]]


# ------------------------------------------------------------------ input

def read_text(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text()
    except (OSError, UnicodeDecodeError) as exc:
        raise MalformedInput(f"{path}: cannot read ({exc.__class__.__name__})") from None


def read_triangulation(path: str) -> IdealTriangulation:
    """A triangulation file, or a file holding a single signature line."""
    text = read_text(path)
    body = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    body = [ln for ln in body if ln]
    if len(body) == 1 and not body[0].startswith("tets"):
        return from_signature(body[0])
    return parse_triangulation(text)


def emit(fields: Fields, fmt: str, out: TextIO) -> None:
    sep = "=" if fmt == "machine" else ": "
    for key, value in fields:
        out.write(f"{key}{sep}{value}\n")


def _bool(x: bool) -> str:
    return "true" if x else "false"


# ------------------------------------------------------------------ search

@dataclass
class SearchReport:
    outcome: str
    explored: int
    depth_reached: int
    structure: Optional[PartiallyFlatStructure] = None
    triangulation: Optional[IdealTriangulation] = None
    move_trace: list[int] = field(default_factory=list)

    def fields(self) -> Fields:
        out: Fields = [
            ("outcome", self.outcome),
            ("explored", self.explored),
            ("depth", self.depth_reached),
            ("moves", ",".join(map(str, self.move_trace)) or "-"),
        ]
        if self.triangulation is not None:
            out.append(("signature", iso_signature(self.triangulation)))
        if self.structure is not None:
            s = self.structure
            out.append(("flat", " ".join(f"{t}:{k}" for t, k in sorted(s.flat.items())) or "-"))
            out.append(("epsilon", s.epsilon if s.epsilon is not None else "-"))
        return out


def find_structure_search(tri: IdealTriangulation, max_depth: int, max_tris: int) -> SearchReport:
    """Breadth-first search over 2-3/3-2 moves, deduplicated by signature.

    ``move_trace`` lists indices into ``applicable_moves`` order and replays
    from ``tri`` to the triangulation carrying the structure.
    """
    seen = {iso_signature(tri)}
    queue: deque[tuple[IdealTriangulation, list[int]]] = deque([(tri, [])])
    explored = 0
    depth = 0
    while queue:
        node, trace = queue.popleft()
        if explored >= max_tris:
            return SearchReport(LIMIT, explored, depth)
        explored += 1
        depth = max(depth, len(trace))
        res = partially_flat_search(node)
        if res.structure is not None:
            if not verify_structure(node, res.structure).passed:
                raise StructureMismatch("search produced a structure that does not verify")
            return SearchReport(FOUND, explored, len(trace), res.structure, node, trace)
        if len(trace) >= max_depth:
            continue
        for i, site in enumerate(applicable_moves(node)):
            nxt = apply_move(node, site)
            sig = iso_signature(nxt)
            if sig not in seen:
                seen.add(sig)
                queue.append((nxt, trace + [i]))
    return SearchReport(NOT_FOUND, explored, depth)


def replay(tri: IdealTriangulation, trace: Sequence[int]) -> IdealTriangulation:
    for i in trace:
        tri = apply_move(tri, applicable_moves(tri)[i])
    return tri


# ------------------------------------------------------------------ commands

def cmd_validate(args) -> tuple[Fields, int]:
    tri = read_triangulation(args.file)
    fields: Fields = [
        ("valid", "true"),
        ("tetrahedra", tri.size),
        ("edges", len(tri.edge_classes)),
        ("vertices", len(tri.vertex_links)),
        ("components", len(tri.components())),
        ("orientable", "true"),
    ]
    for ec in tri.edge_classes:
        fields.append((f"edge.{ec.id}", f"degree={ec.degree}"))
    return fields, 0


def cmd_links(args) -> tuple[Fields, int]:
    tri = read_triangulation(args.file)
    fields: Fields = [("vertices", len(tri.vertex_links))]
    for lk in tri.vertex_links:
        fields.append(
            (f"link.{lk.id}", f"chi={lk.euler_char} genus={lk.genus} torus={_bool(lk.is_torus)} corners={len(lk.corners)}")
        )
    return fields, 0


def cmd_signature(args) -> tuple[Fields, int]:
    return [("signature", iso_signature(read_triangulation(args.file)))], 0


def cmd_moves(args) -> tuple[Fields, int]:
    tri = read_triangulation(args.file)
    sites = applicable_moves(tri)
    if args.apply is not None:
        if not 0 <= args.apply < len(sites):
            raise IllegalSite(f"move index {args.apply} out of range 0..{len(sites) - 1}")
        new = apply_move(tri, sites[args.apply])
        if args.output:
            Path(args.output).write_text(format_triangulation(new))
        return [("applied", sites[args.apply]), ("tetrahedra", new.size), ("signature", iso_signature(new))], 0
    fields: Fields = [("moves", len(sites))]
    fields += [(f"move.{i}", site) for i, site in enumerate(sites)]
    return fields, 0


def cmd_angles_find(args) -> tuple[Fields, int]:
    tri = read_triangulation(args.file)
    res = partially_flat_search(tri)
    if res.structure is None:
        return [("outcome", NOT_FOUND), ("examined", res.examined)], EXIT_NOT_FOUND
    s = res.structure
    report = verify_structure(tri, s)
    if not report.passed:
        raise StructureMismatch("found structure does not verify")
    text = format_structure(tri, s)
    if args.output:
        Path(args.output).write_text(text)
    fields: Fields = [
        ("outcome", FOUND),
        ("examined", res.examined),
        ("strict", _bool(not s.flat)),
        ("flat", " ".join(f"{t}:{k}" for t, k in sorted(s.flat.items())) or "-"),
        ("epsilon", s.epsilon if s.epsilon is not None else "-"),
    ]
    if not args.output:
        fields += [(f"line.{i}", ln) for i, ln in enumerate(text.splitlines())]
    return fields, 0


def cmd_angles_verify(args) -> tuple[Fields, int]:
    tri = read_triangulation(args.file)
    text = read_text(args.structure)
    sf = parse_structure(text)
    if sf.signature is not None and sf.signature != iso_signature(tri):
        raise StructureMismatch("structure file was written for a different triangulation")
    try:
        report = verify_structure(tri, sf.structure)
    except FlatAngleError as exc:
        raise StructureMismatch(str(exc)) from None
    fields: Fields = [("passed", _bool(report.passed))]
    for c in report.conditions:
        tag, _, label = c.name.partition(" ") if c.name.startswith("(") else (c.name, "", "")
        fields.append((f"check.{tag.strip('()')}", f"{'pass' if c.passed else 'FAIL'} {label}".rstrip()))
        fields += [("witness", w) for w in c.witnesses]
    if report.passed:
        load_verified_structure(tri, text)
        return fields, 0
    return fields, StructureMismatch.exit_code


def cmd_search(args) -> tuple[Fields, int]:
    tri = read_triangulation(args.file)
    rep = find_structure_search(tri, args.max_depth, args.max_tris)
    if rep.outcome == FOUND:
        assert iso_signature(replay(tri, rep.move_trace)) == iso_signature(rep.triangulation)
        if args.output:
            Path(args.output).write_text(format_triangulation(rep.triangulation))
        if args.structure_out:
            Path(args.structure_out).write_text(format_structure(rep.triangulation, rep.structure))
        return rep.fields(), 0
    code = ResourceLimit.exit_code if rep.outcome == LIMIT else EXIT_NOT_FOUND
    return rep.fields(), code


def cmd_surfaces_enumerate(args) -> tuple[Fields, int]:
    tri = read_triangulation(args.file)
    s, _ = load_verified_structure(tri, read_text(args.structure))
    config = EnumerationConfig(genus=args.genus, cone_cap=args.cone_cap)
    report = enumerate_bounded_genus(tri, s, args.genus, config)
    lines = report.lines()
    if args.output:
        Path(args.output).write_text("\n".join(lines) + "\n")
        return [("surfaces", len(report.surfaces)), ("output", args.output)], 0
    fields: Fields = []
    for ln in lines:
        key, _, value = ln.partition("=")
        fields.append((key, value))
    return fields, 0


def cmd_area(args) -> tuple[Fields, int]:
    tri = read_triangulation(args.file)
    s, _ = load_verified_structure(tri, read_text(args.structure))
    fields: Fields = []
    ok = True
    for name, v in parse_surfaces(read_text(args.surfaces)):
        area = combinatorial_area(tri, v, s.angles)
        sc = reconstruct_surface(tri, v)
        periph = classify_peripheral(tri, sc)
        holds = area == -2 * sc.euler_char
        ok &= holds
        comps = ";".join(
            f"{c.euler_char}:{'o' if c.orientable else 'n'}:{c.genus if c.orientable else '-'}:{'p' if p else 'np'}"
            for c, p in zip(sc.components, periph)
        )
        fields.append((f"surface.{name}", f"area={area} chi={sc.euler_char} identity={_bool(holds)} components={comps}"))
    return fields, 0 if ok else 1


def cmd_amalgamate(args) -> tuple[Fields, int]:
    ledger = make_ledger(parse_ledger(read_text(args.ledger)))
    fields: Fields = [("m", ledger.m), ("quantity", ledger.quantity()), ("genus", amalgamated_genus(ledger))]
    if args.partial is not None:
        ledger = make_ledger(partial_amalgamate(ledger, args.partial).blocks)
        fields += [("partial", args.partial), ("m_after", ledger.m), ("quantity_after", ledger.quantity())]
        fields += [("genus_after", amalgamated_genus(ledger))]
        fields += [(f"block.{i + 1}", ln.split(": ", 1)[1]) for i, ln in enumerate(format_ledger(ledger).splitlines())]
    g = amalgamated_genus(ledger)
    fields.append(("block_bound", _bool(satisfies_block_bound(ledger))))
    if args.genus is not None:
        max_blocks, max_union = genus_bounds(args.genus)
        fields += [
            ("genus_bound", args.genus),
            ("max_blocks", max_blocks),
            ("max_union_genus", max_union),
            ("kept", _bool(g <= args.genus)),
        ]
    return fields, 0


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="flatangle",
        description="Partially flat angled ideal triangulations.",
        epilog="Not implemented: recognising which enumerated surfaces bound compression bodies. "
        "`amalgamate` evaluates a hand-written ledger; it does not derive one from `surfaces enumerate`.",
    )
    p.add_argument("--format", choices=("text", "machine"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    for name in ("validate", "links", "signature"):
        q = sub.add_parser(name)
        q.add_argument("file")

    q = sub.add_parser("moves", help="list 2-3/3-2 sites or apply one")
    q.add_argument("file")
    q.add_argument("--apply", type=int)
    q.add_argument("-o", "--output")

    q = sub.add_parser("angles")
    asub = q.add_subparsers(dest="action", required=True)
    f = asub.add_parser("find")
    f.add_argument("file")
    f.add_argument("-o", "--output")
    v = asub.add_parser("verify")
    v.add_argument("file")
    v.add_argument("structure")

    q = sub.add_parser("search", help="breadth-first move search for a structure")
    q.add_argument("file")
    q.add_argument("--max-depth", type=int, default=2)
    q.add_argument("--max-tris", type=int, default=500)
    q.add_argument("-o", "--output", help="write the found triangulation")
    q.add_argument("--structure-out")

    q = sub.add_parser("surfaces")
    ssub = q.add_subparsers(dest="action", required=True)
    e = ssub.add_parser("enumerate")
    e.add_argument("file")
    e.add_argument("structure")
    e.add_argument("--genus", type=int, default=1)
    e.add_argument("--cone-cap", type=int, default=20000)
    e.add_argument("-o", "--output")

    q = sub.add_parser("area")
    q.add_argument("file")
    q.add_argument("structure")
    q.add_argument("surfaces")

    q = sub.add_parser("amalgamate", help="evaluate a splitting ledger (supplied by hand)")
    q.add_argument("ledger")
    q.add_argument("--partial", type=int)
    q.add_argument("--genus", type=int)
    return p


def run(argv: Optional[Sequence[str]] = None, out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            fields, code = cmd_validate(args)
        elif args.command == "links":
            fields, code = cmd_links(args)
        elif args.command == "signature":
            fields, code = cmd_signature(args)
        elif args.command == "moves":
            fields, code = cmd_moves(args)
        elif args.command == "angles":
            fields, code = cmd_angles_find(args) if args.action == "find" else cmd_angles_verify(args)
        elif args.command == "search":
            fields, code = cmd_search(args)
        elif args.command == "surfaces":
            fields, code = cmd_surfaces_enumerate(args)
        elif args.command == "area":
            fields, code = cmd_area(args)
        else:
            fields, code = cmd_amalgamate(args)
    except FlatAngleError as exc:
        emit([("error", exc.__class__.__name__), ("message", exc)], args.format, err)
        return exc.exit_code
    emit(fields, args.format, out)
    return code


def main(argv: Optional[Sequence[str]] = None) -> None:
    sys.exit(run(argv))
