import itertools
import random
from fractions import Fraction

from hypothesis import given, strategies as st

from flatangle.lp import INFEASIBLE, OPTIMAL, UNBOUNDED, feasible_point, maximize


def solve_square(a, b):
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return None
        m[c], m[p] = m[p], m[c]
        for i in range(n):
            if i != c and m[i][c]:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return [m[i][n] / m[i][i] for i in range(n)]


def vertex_oracle(c, a_ub, b_ub):
    """Best value over all basic feasible points of a bounded polytope."""
    n = len(c)
    rows = [list(r) for r in a_ub] + [[-1 if i == j else 0 for i in range(n)] for j in range(n)]
    rhs = list(b_ub) + [0] * n
    best = None
    for idx in itertools.combinations(range(len(rows)), n):
        x = solve_square([rows[i] for i in idx], [rhs[i] for i in idx])
        if x is None:
            continue
        if all(sum(Fraction(r[j]) * x[j] for j in range(n)) <= h for r, h in zip(rows, rhs)):
            v = sum(Fraction(cj) * xj for cj, xj in zip(c, x))
            best = v if best is None else max(best, v)
    return best


def test_textbook():
    res = maximize([3, 5], [[1, 0], [0, 2], [3, 2]], [4, 12, 18])
    assert res.status == OPTIMAL
    assert res.value == 36 and res.x == (2, 6)


def test_infeasible_and_unbounded():
    assert maximize([1], [[1]], [-1]).status == INFEASIBLE
    assert maximize([1, 0], [[0, 1]], [1]).status == UNBOUNDED
    assert feasible_point([[1]], [-1], [], [], 1) is None


def test_equalities_with_redundant_row():
    res = maximize([1, 1], a_eq=[[1, 1], [2, 2]], b_eq=[1, 2])
    assert res.status == OPTIMAL and res.value == 1


@given(st.integers(0, 10**6))
def test_matches_vertex_enumeration(seed):
    r = random.Random(seed)
    n = r.randint(2, 3)
    m = r.randint(1, 4)
    a = [[r.randint(-3, 5) for _ in range(n)] for _ in range(m)] + [[1] * n]
    b = [r.randint(0, 8) for _ in range(m)] + [10]
    c = [r.randint(-4, 6) for _ in range(n)]
    res = maximize(c, a, b)
    assert res.status == OPTIMAL  # x = 0 is feasible and the box keeps it bounded
    assert res.value == vertex_oracle(c, a, b)
    assert all(sum(Fraction(aj) * xj for aj, xj in zip(row, res.x)) <= bi for row, bi in zip(a, b))
