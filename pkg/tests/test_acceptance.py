"""Acceptance criteria, one test each; every test prints a PASS/FAIL line with its runtime."""

import random
import subprocess
import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from flatangle.angles import _angle_lp, find_structure, strict_angle_lp, verify_structure
from flatangle.corpus import FLAT_EXAMPLES, STRUCTURED, census, figure_eight, structured
from flatangle.enumeration import decomposes, enumerate_bounded_genus, fundamental_solutions, random_surface
from flatangle.layered import build_layered_polygon, random_spec, recognize_layered
from flatangle.moves import TWO_THREE, applicable_moves, apply_move, created_edge_site
from flatangle.normal import COORDS, combinatorial_area, matching_matrix, reconstruct_surface
from flatangle.splittings import (
    amalgamated_genus,
    amalgamation_orders,
    full_amalgamation,
    genus_bounds,
    handlebody_ledger,
    partial_amalgamate,
    random_ledger,
)
from flatangle.triangulation import EDGES, format_triangulation, iso_signature, parse_triangulation

from oracles import embed, forbidden_arrangement, matching_vectors

ROOT = Path(__file__).resolve().parent.parent
THIRD = (Fraction(1, 3),)


@contextmanager
def criterion(capsys, number, title, limit):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        status = "PASS" if ok and elapsed < limit else "FAIL"
        with capsys.disabled():
            print(f"\n[{status}] criterion {number}: {title} ({elapsed:.2f}s, limit {limit}s)")
    assert elapsed < limit, f"took {elapsed:.2f}s"


def test_c1_figure_eight_angles(capsys):
    with criterion(capsys, 1, "figure-eight strict structure, all-thirds verifies exactly", 1):
        tri = figure_eight()
        s = find_structure(tri)
        assert s is not None and s.is_strict and s.epsilon > 0
        assert verify_structure(tri, s).passed
        thirds = tuple(THIRD * 6 for _ in range(2))
        report = verify_structure(tri, thirds)
        assert report.passed
        for ec in tri.edge_classes:
            assert ec.degree == 6
            assert sum(thirds[t][e] for t, e in ec.incidences) == 2
        for t in range(2):
            for v in range(4):
                corner = [e for e, pair in enumerate(EDGES) if v in pair]
                assert sum(thirds[t][e] for e in corner) == 1


def structured_cases():
    cases = []
    for name in STRUCTURED:
        angles, eps = strict_angle_lp(structured(name))
        assert eps > 0
        cases.append((name, angles))
    for name, flat in FLAT_EXAMPLES:
        angles, eps = _angle_lp(structured(name), flat)
        assert eps > 0
        cases.append((name, angles))
    return cases


@lru_cache(maxsize=None)
def fundamentals(name):
    return fundamental_solutions(structured(name))


def test_c2_area_identity(capsys):
    with criterion(capsys, 2, "combinatorial area equals -2 chi on random matching vectors", 10):
        rng = random.Random(2)
        checked = set()
        for name, angles in structured_cases():
            tri = structured(name)
            assert verify_structure(tri, angles).passed
            fs = fundamentals(name)
            for _ in range(30):
                v = random_surface(fs, rng, max_entry=5)
                assert max(v) <= 5 and matching_matrix(tri).satisfied(v)
                chi = reconstruct_surface(tri, v).euler_char
                assert combinatorial_area(tri, v, angles) == -2 * chi
                checked.add((name, v))
        assert len(checked) >= 100, len(checked)


def test_c3_nonnegative_chi_is_peripheral(capsys):
    with criterion(capsys, 3, "connected chi >= 0 surfaces are triangle-only and peripheral", 60):
        seen = 0
        for name, angles in structured_cases():
            tri = structured(name)
            assert verify_structure(tri, angles).passed
            for genus in (1, 2):
                report = enumerate_bounded_genus(tri, None, genus, fundamentals=fundamentals(name))
                for s in report.surfaces:
                    if len(s.components) != 1 or s.euler_char < 0:
                        continue
                    seen += 1
                    assert s.kind == "normal"
                    (comp,) = reconstruct_surface(tri, s.vector).components
                    assert comp.triangle_only
                    assert s.components[0][3]
                    assert comp.genus == 1
        assert seen > 0


def test_c4_pachner_round_trips(capsys):
    # the corpus is input data; building it is not part of the timed check
    pool = list(census(2)) + [structured(n) for n in STRUCTURED]
    pool = [t for t in pool if any(s.kind == TWO_THREE for s in applicable_moves(t))]
    with criterion(capsys, 4, "200 random 2-3 / 3-2 round trips preserve the signature", 10):
        rng = random.Random(4)
        done = 0
        while done < 200:
            tri = rng.choice(pool)
            for _ in range(rng.randint(0, 2)):
                sites = [s for s in applicable_moves(tri) if s.kind == TWO_THREE]
                tri = apply_move(tri, rng.choice(sites))
            sites = [s for s in applicable_moves(tri) if s.kind == TWO_THREE]
            mid = apply_move(tri, rng.choice(sites))
            mid = parse_triangulation(format_triangulation(mid))
            assert mid.size == tri.size + 1
            back = apply_move(mid, created_edge_site(mid))
            back = parse_triangulation(format_triangulation(back))
            assert iso_signature(back) == iso_signature(tri)
            done += 1


def test_c5_fundamental_completeness(capsys):
    with criterion(capsys, 5, "brute-force matching vectors with sum <= 6 decompose over the fundamentals", 300):
        total = 0
        tris = list(census(1)) + list(census(2))
        for tri in tris:
            fs = fundamental_solutions(tri)
            for v in matching_vectors(tri, 6):
                assert decomposes(fs, v), (iso_signature(tri), v)
                total += 1
        assert len(tris) == 39 and total > 0


def test_c6_layered_round_trip(capsys):
    with criterion(capsys, 6, "100 layered polygons build and recognize; forbidden arrangement rejected", 10):
        rng = random.Random(6)
        for _ in range(100):
            spec = random_spec(rng, max_n=8, max_moves=12)
            assert spec.base.n <= 8 and len(spec.moves) <= 12
            lc = build_layered_polygon(spec)
            res = recognize_layered(embed(lc), set(range(lc.size)), dict(enumerate(lc.patterns)))
            assert res.accepted, res.witness
            (found,) = res.complexes
            assert len(found.moves) == len(spec.moves)
        for perm in ((0, 1, 2, 3), (0, 1, 3, 2)):
            res = recognize_layered(forbidden_arrangement(perm), {0, 1}, {0: 0, 1: 0})
            assert not res.accepted and res.witness is not None


def test_c7_amalgamation_arithmetic(capsys):
    with criterion(capsys, 7, "ledger quantity invariant, orders agree, bounds exact", 5):
        rng = random.Random(7)
        for _ in range(300):
            led = random_ledger(rng, max_m=8)
            q = led.quantity()
            for k in range(2, led.m - 1, 2):
                assert partial_amalgamate(led, k).quantity() == q
            finals = {full_amalgamation(led, o) for o in amalgamation_orders(led.m)}
            assert len(finals) == 1
            assert {f.quantity() for f in finals} == {q}
        for _ in range(100):
            led = random_ledger(rng, max_m=8, ext_choices=(0,))
            genera = {amalgamated_genus(full_amalgamation(led, o)) for o in amalgamation_orders(led.m)}
            assert genera == {amalgamated_genus(led)}
        for g in range(1, 10):
            assert amalgamated_genus(handlebody_ledger(g)) == g
        assert genus_bounds(2) == (2, 2)
        assert genus_bounds(3) == (4, 9)


def min_non_peripheral(fs, v):
    """Fewest non-peripheral summands over decompositions of v within one cone."""
    periph = set(fs.peripheral)
    best = None
    for ci in fs.cones_containing(v):
        basis = fs.cone_basis[ci]

        @lru_cache(maxsize=None)
        def rec(w):
            if not any(w):
                return 0
            out = None
            for b in basis:
                if all(x <= y for x, y in zip(b, w)):
                    r = rec(tuple(y - x for x, y in zip(b, w)))
                    if r is not None:
                        r += b not in periph
                        out = r if out is None else min(out, r)
            return out

        r = rec(tuple(v))
        if r is not None:
            best = r if best is None else min(best, r)
    return best


def test_c8_enumeration_contract(capsys):
    with criterion(capsys, 8, "figure-eight genus-1 enumeration contract via the CLI", 60):
        argv = [sys.executable, "-m", "flatangle", "--format", "machine", "surfaces", "enumerate",
                str(ROOT / "data" / "figure8.tri"), str(ROOT / "data" / "figure8.structure"), "--genus", "1"]
        runs = [subprocess.run(argv, capture_output=True, check=True).stdout for _ in range(2)]
        assert runs[0] == runs[1]
        lines = runs[0].decode().splitlines()
        header = dict(ln.split("=", 1) for ln in lines if not ln.startswith("surface="))
        n = int(header["genus_bound"])
        assert n == 1 and int(header["non_peripheral_multiplicity_max"]) < 2 * n
        surfaces = [dict(tok.split("=", 1) for tok in ln.split()) for ln in lines if ln.startswith("surface=")]
        assert len(surfaces) == int(header["surfaces"])
        tri = figure_eight()
        fs = fundamental_solutions(tri)
        torus = False
        for s in surfaces:
            assert s["genus"] != "None" and int(s["genus"]) <= n
            v = tuple(int(x) for x in s["vector"].split(","))
            assert len(v) == COORDS * tri.size
            if s["kind"] != "tubed":
                assert min_non_peripheral(fs, v) < 2 * n
            if s["kind"] == "normal" and s["components"] == "0:o:1:p":
                torus = True
        assert torus
