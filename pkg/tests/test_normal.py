import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from flatangle.angles import _angle_lp, flat_pattern, strict_angle_lp
from flatangle.corpus import FLAT_EXAMPLES, structured
from flatangle.enumeration import fundamental_solutions, random_surface
from flatangle.errors import DiscsNotAdjacent, NegativeEntry, NotMatching
from flatangle.layered import PI_PAIRS
from flatangle.normal import (
    COORDS,
    MULT,
    Tube,
    attach_tube,
    classify_peripheral,
    combinatorial_area,
    compress_tubes,
    edge_sequence,
    euler_characteristic,
    format_surface,
    is_admissible,
    kind,
    matching_matrix,
    pairing,
    parse_surfaces,
    piece_area,
    reconstruct_surface,
    tube_sites,
    vertex_link_vector,
)
from flatangle.triangulation import EDGES

THIRDS = (Fraction(1, 3),) * 6
_FS_CACHE = {}


def fundamentals(name):
    if name not in _FS_CACHE:
        _FS_CACHE[name] = fundamental_solutions(structured(name))
    return _FS_CACHE[name]


def test_matching_matrix_shape(fig8):
    m = matching_matrix(fig8)
    assert m.shape == (12, 20)
    assert m.satisfied(vertex_link_vector(fig8))
    assert m.satisfied((0,) * 20)


def test_multiplicities():
    assert [sum(MULT[j]) for j in range(COORDS)] == [3, 3, 3, 3, 4, 4, 4, 8, 8, 8]
    for j in range(7, 10):
        (a, b), (c, d) = pairing(j)
        assert sorted(MULT[j]) == [1, 1, 1, 1, 2, 2]
        assert MULT[j][EDGES.index((a, b))] == 2 and MULT[j][EDGES.index((min(c, d), max(c, d)))] == 2


def test_admissibility():
    v = [0] * 20
    v[4] = v[5] = 1
    assert not is_admissible(v)
    assert is_admissible([1, 1, 1, 1, 0, 0, 0, 0, 0, 0] * 2)
    assert is_admissible([0, 0, 0, 0, 2, 0, 0, 0, 0, 0] * 2)
    with pytest.raises(NegativeEntry):
        is_admissible([-1] + [0] * 19)


def test_piece_areas():
    assert piece_area(0, THIRDS) == 0
    assert piece_area(4, THIRDS) == Fraction(2, 3)
    assert piece_area(7, THIRDS) == Fraction(10, 3)
    flat = (Fraction(1), 0, 0, 0, 0, Fraction(1))  # pi on 01 and 23
    vertical = [j for j in range(4, 7) if all(MULT[j][EDGES.index(e)] for e in PI_PAIRS[0])]
    assert vertical == [5, 6]
    assert all(piece_area(j, flat) == 0 for j in vertical)
    assert piece_area(4, flat) == 2


def test_link_vector_surface(fig8):
    v = vertex_link_vector(fig8)
    assert list(v) == [1, 1, 1, 1, 0, 0, 0, 0, 0, 0] * 2
    assert euler_characteristic(fig8, v) == 0
    sc = reconstruct_surface(fig8, v)
    assert len(sc.components) == 1
    (c,) = sc.components
    assert c.orientable and c.genus == 1 and c.triangle_only
    assert classify_peripheral(fig8, sc) == [True]
    double = tuple(2 * x for x in v)
    sc2 = reconstruct_surface(fig8, double)
    assert [(c.euler_char, c.genus) for c in sc2.components] == [(0, 1), (0, 1)]
    assert euler_characteristic(fig8, (0,) * 20) == 0
    assert classify_peripheral(fig8, reconstruct_surface(fig8, (0,) * 20)) == []


def test_not_matching(fig8):
    v = [0] * 20
    v[0] = 1
    with pytest.raises(NotMatching):
        reconstruct_surface(fig8, v)
    with pytest.raises(NotMatching):
        euler_characteristic(fig8, v)


def test_surface_file_round_trip(fig8):
    v = vertex_link_vector(fig8)
    text = format_surface("link", v) + format_surface("twice", [2 * x for x in v])
    assert parse_surfaces(text) == [("link", v), ("twice", tuple(2 * x for x in v))]


def structures():
    out = []
    for name in ("m003-23", "fig8-23"):
        angles, _ = strict_angle_lp(structured(name))
        out.append((name, angles))
    for name, flat in FLAT_EXAMPLES:
        out.append((name, _angle_lp(structured(name), flat)[0]))
    return out


@pytest.mark.parametrize("name,angles", structures())
def test_area_identity(name, angles):
    tri = structured(name)
    fs = fundamentals(name)
    r = random.Random(name)
    for _ in range(40):
        v = random_surface(fs, r)
        sc = reconstruct_surface(tri, v)
        chi = euler_characteristic(tri, v, angles)
        assert chi == sc.euler_char == sum(c.euler_char for c in sc.components)
        assert combinatorial_area(tri, v, angles) == -2 * chi


@pytest.mark.parametrize("name,angles", structures())
def test_zero_area_pieces(name, angles):
    for t, a in enumerate(angles):
        pattern = flat_pattern(a)
        for j in range(COORDS):
            area = piece_area(j, a)
            assert area >= 0
            if area == 0 and kind(j) != "triangle":
                assert kind(j) == "square" and pattern is not None
                assert all(MULT[j][EDGES.index(e)] for e in PI_PAIRS[pattern])


@given(st.integers(0, 10**6))
def test_chi_additive(seed):
    r = random.Random(seed)
    name = r.choice(["m003-23", "fig8-23"])
    tri, fs = structured(name), fundamentals(name)
    basis = r.choice([b for b in fs.cone_basis if b])
    v1, v2 = r.choice(basis), r.choice(basis)
    s = tuple(x + y for x, y in zip(v1, v2))
    assert euler_characteristic(tri, s) == euler_characteristic(tri, v1) + euler_characteristic(tri, v2)


def test_components_with_squares_not_peripheral():
    tri, fs = structured("fig8-23"), fundamentals("fig8-23")
    for v in fs.members:
        sc = reconstruct_surface(tri, v)
        for comp, periph in zip(sc.components, classify_peripheral(tri, sc)):
            if not comp.triangle_only:
                assert not periph


def test_edge_sequence_counts():
    tri, fs = structured("m003-23"), fundamentals("m003-23")
    for v in fs.members:
        for t in range(tri.size):
            for e, (a, b) in enumerate(EDGES):
                block = v[COORDS * t: COORDS * t + COORDS]
                expected = sum(MULT[j][e] * block[j] for j in range(COORDS))
                assert len(edge_sequence(v, t, a, b)) == expected


def test_tubes_on_link_torus(fig8):
    v = vertex_link_vector(fig8)
    sites = tube_sites(fig8, v)
    assert sites
    for tube in sites:
        ts = attach_tube(fig8, v, tube)
        assert ts.euler_char == -2
        # the link torus faces into every edge gap: the tube keeps it orientable
        assert ts.components == ((-2, True),)
        assert compress_tubes(ts) == v


def test_tube_between_parallel_tori(fig8):
    v = tuple(2 * x for x in vertex_link_vector(fig8))
    seq = edge_sequence(v, 0, 0, 1)
    tube = Tube(0, 0, 0, seq[0], seq[1])
    ts = attach_tube(fig8, v, tube)
    assert ts.components == ((-2, True),)
    assert ts.genera == (2,)


def test_tube_needs_adjacent_discs(fig8):
    v = vertex_link_vector(fig8)
    seq = edge_sequence(v, 0, 0, 1)
    with pytest.raises(DiscsNotAdjacent):
        attach_tube(fig8, v, Tube(0, 0, 0, seq[0], (1, 0, 0)))
    with pytest.raises(DiscsNotAdjacent):
        attach_tube(fig8, v, Tube(0, 0, 5, seq[0], seq[1]))
