import pytest

from flatangle.cones import primitive
from flatangle.corpus import census, structured
from flatangle.enumeration import (
    EnumerationConfig,
    admissible_cones,
    decomposes,
    enumerate_bounded_genus,
    fundamental_solutions,
    vertex_solutions,
)
from flatangle.errors import GenusTooSmall
from flatangle.normal import COORDS, is_admissible, kind, matching_matrix, reconstruct_surface, vertex_link_vector

from oracles import irreducible, matching_vectors

SMALL = list(census(1)) + list(census(2))[:12]
IDS = [f"census{t.size}-{i}" for i, t in enumerate(SMALL)]


def test_cone_count(fig8):
    assert len(admissible_cones(fig8)) == 36
    assert len(admissible_cones(fig8, octagons=False)) == 9


@pytest.mark.parametrize("tri", SMALL, ids=IDS)
def test_vertex_solutions(tri):
    m = matching_matrix(tri)
    vs = vertex_solutions(tri)
    assert len(set(vs)) == len(vs)
    for v in vs:
        assert m.satisfied(v) and is_admissible(v)
        assert primitive(v) == v
    fs = fundamental_solutions(tri)
    assert set(vs) <= set(fs.members)


@pytest.mark.parametrize("tri", SMALL, ids=IDS)
def test_fundamentals_match_brute_force(tri):
    fs = fundamental_solutions(tri)
    vectors = matching_vectors(tri, 6)
    for v in vectors:
        assert decomposes(fs, v)
    irreducibles = {v for v in vectors if irreducible(v, vectors)}
    small_members = {v for v in fs.members if sum(v) <= 6}
    assert irreducibles == small_members


@pytest.mark.parametrize("tri", SMALL, ids=IDS)
def test_members_do_not_decompose(tri):
    fs = fundamental_solutions(tri)
    for ci, basis in enumerate(fs.cone_basis):
        for v in basis:
            for w in basis:
                if w != v and all(a <= b for a, b in zip(w, v)):
                    rest = tuple(b - a for a, b in zip(w, v))
                    assert not fs.cones[ci].contains(rest) or not matching_matrix(tri).satisfied(rest)


def test_peripheral_split(fig8):
    fs = fundamental_solutions(fig8)
    link = vertex_link_vector(fig8)
    assert fs.peripheral == [link]
    assert set(fs.peripheral) | set(fs.non_peripheral) == set(fs.members)
    assert fs.chi[link] == 0


def test_figure_eight_genus_one(fig8):
    rep = enumerate_bounded_genus(fig8, None, 1)
    link = vertex_link_vector(fig8)
    assert rep.non_peripheral_bound == 1 and rep.peripheral_bound == 1
    normals = [s for s in rep.surfaces if s.kind == "normal"]
    assert any(s.vector == link and s.components == ((0, True, 1, True),) for s in normals)
    for s in rep.surfaces:
        assert s.genus is not None and s.genus <= 1
        assert sum(1 for j, x in enumerate(s.vector) if x and kind(j % COORDS) == "octagon") <= 1
    assert rep.lines() == enumerate_bounded_genus(fig8, None, 1).lines()


def test_tubed_surfaces_respect_bound():
    tri = structured("m003-23")
    rep = enumerate_bounded_genus(tri, None, 2, EnumerationConfig(genus=2))
    tubed = [s for s in rep.surfaces if s.kind == "tubed"]
    assert tubed
    for s in tubed:
        assert s.tube is not None and s.genus <= 2
        assert s.euler_char == reconstruct_surface(tri, s.vector).euler_char - 2


def test_no_tubes_or_octagons_when_disabled(fig8):
    cfg = EnumerationConfig(genus=1, include_octagons=False, include_tubes=False)
    rep = enumerate_bounded_genus(fig8, None, 1, cfg)
    assert {s.kind for s in rep.surfaces} == {"normal"}


def test_genus_too_small(fig8):
    with pytest.raises(GenusTooSmall):
        enumerate_bounded_genus(fig8, None, 0)
