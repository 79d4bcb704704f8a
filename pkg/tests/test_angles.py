import random
from fractions import Fraction

import pytest

from flatangle.angles import (
    PartiallyFlatStructure,
    _angle_lp,
    flat_angles,
    iter_structures,
    flat_pattern,
    format_structure,
    load_verified_structure,
    opposite_equality_check,
    parse_structure,
    partially_flat_search,
    strict_angle_lp,
    verify_structure,
)
from flatangle.corpus import FLAT_EXAMPLES, census, structured
from flatangle.errors import PreconditionViolated, ReferenceMismatch, StructureMismatch
from flatangle.lp import OPTIMAL, maximize
from flatangle.triangulation import EDGES

THIRD = Fraction(1, 3)


def all_thirds(n):
    return tuple((THIRD,) * 6 for _ in range(n))


def edge_sums(tri, angles):
    return [sum(angles[t][e] for t, e in ec.incidences) for ec in tri.edge_classes]


def vertex_sums(angles):
    return [sum(a[e] for e, pair in enumerate(EDGES) if v in pair) for a in angles for v in range(4)]


def test_figure_eight_all_thirds(fig8):
    report = verify_structure(fig8, all_thirds(2))
    assert report.passed
    assert edge_sums(fig8, all_thirds(2)) == [2, 2]
    assert vertex_sums(all_thirds(2)) == [1] * 8


def test_figure_eight_strict_lp(fig8):
    angles, eps = strict_angle_lp(fig8)
    assert angles is not None and eps == THIRD
    assert all(eps <= x <= 1 - eps for a in angles for x in a)
    assert edge_sums(fig8, angles) == [2, 2]
    assert all(s <= 1 for s in vertex_sums(angles))
    assert verify_structure(fig8, angles).passed


def test_vertex_sum_too_large(fig8):
    a = [list(r) for r in all_thirds(2)]
    a[0][0] = Fraction(1, 2)  # vertex 0 of tet 0: 1/2 + 1/3 + 1/3 = 7/6
    report = verify_structure(fig8, a)
    assert not report["(i) vertex sums <= pi"].passed


def test_adjacent_pi_edges_fail_iii(fig8):
    a = [list(r) for r in all_thirds(2)]
    a[0] = [Fraction(1), Fraction(1), 0, 0, 0, 0]  # pi on 01 and 02, which share vertex 0
    assert not verify_structure(fig8, a)["(iii) non-positive tetrahedra are flat"].passed


def test_size_mismatch(fig8):
    with pytest.raises(ReferenceMismatch):
        verify_structure(fig8, all_thirds(3))


def test_degree_one_edge_has_no_strict_structure():
    hits = 0
    for tri in census(1):
        if any(ec.degree == 1 for ec in tri.edge_classes):
            hits += 1
            angles, eps = strict_angle_lp(tri)
            assert angles is None and eps <= 0
    assert hits


def test_flat_patterns():
    for k in range(3):
        a = flat_angles(k)
        assert flat_pattern(a) == k
        assert opposite_equality_check(structured("figure-eight"), [a, a])
    assert flat_pattern((THIRD,) * 6) is None


def test_opposite_equality(fig8):
    assert opposite_equality_check(fig8, all_thirds(2))
    with pytest.raises(PreconditionViolated):
        opposite_equality_check(fig8, tuple((Fraction(1, 4),) * 6 for _ in range(2)))


def test_opposite_equality_on_convex_combinations(fig8):
    # vertices of {vertex sums = 1, edge sums = 2, 0 <= x <= 1} and their mixtures
    n = 6 * fig8.size
    a_eq, b_eq = [], []
    for t in range(fig8.size):
        for v in range(4):
            a_eq.append([1 if j // 6 == t and v in EDGES[j % 6] else 0 for j in range(n)])
            b_eq.append(1)
    for ec in fig8.edge_classes:
        row = [0] * n
        for t, e in ec.incidences:
            row[6 * t + e] += 1
        a_eq.append(row)
        b_eq.append(2)
    a_ub = [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    r = random.Random(7)
    points = []
    for _ in range(8):
        res = maximize([r.randint(-5, 5) for _ in range(n)], a_ub, [1] * n, a_eq, b_eq)
        assert res.status == OPTIMAL
        points.append(res.x)
    for _ in range(20):
        w = [Fraction(r.randint(0, 9)) for _ in points]
        if not any(w):
            continue
        total = sum(w)
        x = [sum(wi * p[j] for wi, p in zip(w, points)) / total for j in range(n)]
        angles = tuple(tuple(x[6 * t: 6 * t + 6]) for t in range(fig8.size))
        assert opposite_equality_check(fig8, angles)


def test_search_on_figure_eight(fig8):
    res = partially_flat_search(fig8)
    assert res.found and res.structure.flat == {} and res.examined == 1
    assert verify_structure(fig8, res.structure).passed


def test_search_exhausts_without_structure():
    tri = next(t for t in census(1) if any(link.euler_char == 2 for link in t.vertex_links))
    res = partially_flat_search(tri)
    assert not res.found and res.examined >= 1


def test_structured_corpus_verifies(structured_tri):
    _, tri = structured_tri
    res = partially_flat_search(tri)
    assert res.found
    report = verify_structure(tri, res.structure)
    assert report.passed
    if res.structure.is_strict:
        assert res.structure.flat == {}


@pytest.mark.parametrize("name,flat", FLAT_EXAMPLES)
def test_flat_examples(name, flat):
    tri = structured(name)
    angles, eps = _angle_lp(tri, flat)
    assert eps > 0
    report = verify_structure(tri, angles)
    assert report.passed
    assert report.layering and sum(lc.size for lc in report.layering) == len(flat)
    for t in range(tri.size):
        if t in flat:
            assert flat_pattern(angles[t]) == flat[t]
        else:
            assert all(0 < x < 1 for x in angles[t])


def test_structure_file_round_trip(fig8):
    tri = structured("fig8-23")
    angles, eps = _angle_lp(tri, {1: 0})
    report = verify_structure(tri, angles)
    s = PartiallyFlatStructure(angles, {1: 0}, report.layering, eps)
    text = format_structure(tri, s)
    parsed = parse_structure(text)
    assert parsed.structure.angles == angles and parsed.structure.flat == {1: 0}
    loaded, _ = load_verified_structure(tri, text)
    assert loaded.flat == {1: 0}
    with pytest.raises(StructureMismatch):
        load_verified_structure(fig8, text)


@pytest.mark.parametrize("name", ["m003-23", "fig8-23"])
def test_iter_structures_lists_flat_examples(name):
    tri = structured(name)
    found = list(iter_structures(tri))
    assert found[0].is_strict
    assert sorted(tuple(s.flat.items()) for s in found[1:]) == sorted(
        tuple(flat.items()) for n, flat in FLAT_EXAMPLES if n == name
    )
    for s in found:
        assert verify_structure(tri, s).passed
