import random

import pytest
from hypothesis import given, strategies as st

from flatangle.corpus import census, figure_eight
from flatangle.errors import IllegalSite
from flatangle.moves import THREE_TWO, TWO_THREE, MoveSite, applicable_moves, apply_move, created_edge_site, site_index
from flatangle.triangulation import from_signature, inverse, iso_signature

DEGENERATE = "1;0/1230,0/3012,0/2031,0/1302"  # edge of degree 3 around a single tetrahedron


def assert_valid(tri):
    for t in range(tri.size):
        for f in range(4):
            t2, p = tri.glue(t, f)
            assert tri.glue(t2, p[f]) == (t, inverse(p))
    assert sum(ec.degree for ec in tri.edge_classes) == 6 * tri.size


def test_figure_eight_sites(fig8):
    sites = applicable_moves(fig8)
    assert [s.kind for s in sites] == [TWO_THREE] * 4
    assert applicable_moves(fig8) == sites


def test_one_tetrahedron_has_no_two_three():
    for tri in census(1):
        assert not [s for s in applicable_moves(tri) if s.kind == TWO_THREE]


def test_two_three_creates_degree_three_edge(fig8):
    for site in applicable_moves(fig8):
        new = apply_move(fig8, site)
        assert new.size == 3
        assert_valid(new)
        assert sum(1 for ec in new.edge_classes if ec.degree == 3) == 1
        assert any(s.kind == THREE_TWO for s in applicable_moves(new))
        back = apply_move(new, created_edge_site(new))
        assert back.size == 2
        assert iso_signature(back) == iso_signature(fig8)


def test_input_unchanged(fig8):
    before = fig8.gluings
    apply_move(fig8, applicable_moves(fig8)[0])
    assert fig8.gluings == before


def test_illegal_sites(fig8):
    with pytest.raises(IllegalSite):
        apply_move(fig8, MoveSite(THREE_TWO, 0, 0))  # degree 6
    with pytest.raises(IllegalSite):
        apply_move(fig8, MoveSite(TWO_THREE, 5, 0))
    tri = from_signature(DEGENERATE)
    ec = next(ec for ec in tri.edge_classes if ec.degree == 3)
    t, e = ec.incidences[0]
    with pytest.raises(IllegalSite):
        apply_move(tri, MoveSite(THREE_TWO, t, e))
    assert not [s for s in applicable_moves(tri) if s.kind == THREE_TWO]


def test_site_index_is_stable(fig8):
    new = apply_move(fig8, applicable_moves(fig8)[1])
    for i, s in enumerate(applicable_moves(new)):
        assert site_index(new, s) == i


@given(st.integers(0, 10**6))
def test_three_two_then_two_three(seed):
    r = random.Random(seed)
    tri = figure_eight()
    for _ in range(r.randint(1, 3)):
        sites = [s for s in applicable_moves(tri) if s.kind == TWO_THREE]
        tri = apply_move(tri, r.choice(sites))
        assert_valid(tri)
    sig = iso_signature(tri)
    threes = [s for s in applicable_moves(tri) if s.kind == THREE_TWO]
    site = r.choice(threes)
    smaller = apply_move(tri, site)
    assert smaller.size == tri.size - 1
    assert_valid(smaller)
    # some 2-3 move on the result restores the original
    assert any(iso_signature(apply_move(smaller, s)) == sig for s in applicable_moves(smaller) if s.kind == TWO_THREE)
