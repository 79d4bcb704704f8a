import itertools
import random

import pytest
from hypothesis import given, strategies as st

from flatangle.corpus import FIGURE_EIGHT_TEXT, census, figure_eight
from flatangle.errors import InconsistentGluing, MalformedInput, NonOrientable
from flatangle.moves import applicable_moves, apply_move
from flatangle.triangulation import (
    ALL_PERMS,
    EDGES,
    IdealTriangulation,
    compose,
    format_triangulation,
    from_signature,
    inverse,
    iso_signature,
    parity,
    parse_triangulation,
)


def union_find_counts(tri):
    """Edge and vertex classes by plain union-find over face identifications."""
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            x = parent[x]
        return x

    def union(a, b):
        parent[find(a)] = find(b)

    for t in range(tri.size):
        for v in range(4):
            find(("v", t, v))
        for a, b in EDGES:
            find(("e", t, frozenset((a, b))))
    for t in range(tri.size):
        for f in range(4):
            t2, p = tri.glue(t, f)
            verts = [v for v in range(4) if v != f]
            for v in verts:
                union(("v", t, v), ("v", t2, p[v]))
            for a, b in itertools.combinations(verts, 2):
                union(("e", t, frozenset((a, b))), ("e", t2, frozenset((p[a], p[b]))))
    roots = {find(x) for x in parent}
    return sum(1 for r in roots if r[0] == "e"), sum(1 for r in roots if r[0] == "v")


def orientable_by_colouring(tri):
    colour = {0: 1}
    stack = [0]
    while stack:
        t = stack.pop()
        for f in range(4):
            t2, p = tri.glue(t, f)
            want = colour[t] * (1 if parity(p) == 1 else -1)
            if t2 not in colour:
                colour[t2] = want
                stack.append(t2)
            elif colour[t2] != want:
                return False
    return True


def random_relabel(tri, r):
    order = list(range(tri.size))
    r.shuffle(order)
    perms = [r.choice(ALL_PERMS) for _ in range(tri.size)]
    return tri.relabel(order, perms)


def test_figure_eight_counts(fig8):
    assert fig8.size == 2
    assert len(fig8.face_pairs()) == 4
    assert len(fig8.edge_classes) == 2
    assert [ec.degree for ec in fig8.edge_classes] == [6, 6]
    assert len(fig8.vertex_links) == 1
    assert union_find_counts(fig8) == (2, 1)


def test_figure_eight_link_is_torus(fig8):
    (link,) = fig8.vertex_links
    assert link.euler_char == 0
    assert link.is_torus and link.genus == 1


def test_parse_round_trip():
    tri = parse_triangulation(FIGURE_EIGHT_TEXT)
    assert tri == figure_eight()
    text = format_triangulation(tri)
    assert format_triangulation(parse_triangulation(text)) == text


@pytest.mark.parametrize("text", ["", "# only a comment\n", "tets 2\nt 0: 1 1302 | 1 2031 | 1 0321 | 1 2103\n", "tets x\n"])
def test_malformed(text):
    with pytest.raises(MalformedInput):
        parse_triangulation(text)


def test_non_involutive_gluing():
    text = FIGURE_EIGHT_TEXT.replace("t 1: 0 1302", "t 1: 0 1320")
    with pytest.raises(InconsistentGluing):
        parse_triangulation(text)


def test_self_glued_face():
    with pytest.raises(InconsistentGluing):
        IdealTriangulation.from_table([[(0, "0123"), (0, "0123"), (0, "0123"), (0, "0123")]])


def test_non_orientable_rejected():
    # identity gluings are even, the last one odd: no consistent orientation
    table = [[(1, "0123")] * 3 + [(1, "1023")], [(0, "0123")] * 3 + [(0, "1023")]]
    with pytest.raises(NonOrientable):
        IdealTriangulation.from_table(table)


def test_census_invariants():
    for n in (1, 2):
        for tri in census(n):
            assert sum(ec.degree for ec in tri.edge_classes) == 6 * n
            assert len(tri.face_pairs()) == 2 * n
            assert union_find_counts(tri) == (len(tri.edge_classes), len(tri.vertex_links))
            assert orientable_by_colouring(tri)
            for link in tri.vertex_links:
                assert link.euler_char == 2 - 2 * link.genus
            assert from_signature(iso_signature(tri)) is not None


def test_signature_distinguishes_sizes():
    one = next(iter(census(1)))
    assert iso_signature(one) != iso_signature(figure_eight())


def test_swapped_figure_eight_same_signature(fig8):
    swapped = fig8.relabel([1, 0], [(1, 0, 3, 2), (2, 3, 0, 1)])
    assert iso_signature(swapped) == iso_signature(fig8)


@given(st.integers(0, 10**6))
def test_signature_relabel_invariant(seed):
    r = random.Random(seed)
    tri = figure_eight()
    for _ in range(r.randrange(3)):
        tri = apply_move(tri, r.choice(applicable_moves(tri)))
    other = random_relabel(tri, r)
    assert iso_signature(other) == iso_signature(tri)
    back = from_signature(iso_signature(tri))
    assert iso_signature(back) == iso_signature(tri)


def test_relabel_keeps_involution(fig8):
    r = random.Random(3)
    for _ in range(20):
        tri = random_relabel(fig8, r)
        for t in range(tri.size):
            for f in range(4):
                t2, p = tri.glue(t, f)
                assert tri.glue(t2, p[f]) == (t, inverse(p))
                assert compose(p, inverse(p)) == (0, 1, 2, 3)
