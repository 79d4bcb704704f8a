"""Exact rational linear programming: two-phase tableau simplex with Bland's rule."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

Row = Sequence[Fraction | int]


@dataclass(frozen=True)
class LPResult:
    status: str
    x: Optional[tuple[Fraction, ...]] = None
    value: Optional[Fraction] = None
    pivots: int = 0


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.pivots = 0

    def pivot(self, r: int, c: int) -> None:
        row = self.rows[r]
        piv = row[c]
        if piv != 1:
            inv = 1 / piv
            self.rows[r] = row = [v * inv for v in row]
            self.rhs[r] *= inv
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[c]
            if f:
                self.rows[i] = [a - f * b if b else a for a, b in zip(other, row)]
                self.rhs[i] -= f * self.rhs[r]
        self.basis[r] = c
        self.pivots += 1

    def optimise(self, cost: list[Fraction], allowed: set[int]) -> str:
        """Maximise ``cost . x`` over the current basis, entering only ``allowed`` columns."""
        # reduced costs c_j - c_B B^-1 A_j, updated in place at each pivot
        rc = list(cost)
        for i, b in enumerate(self.basis):
            if cost[b]:
                rc = [a - cost[b] * x if x else a for a, x in zip(rc, self.rows[i])]
        order = sorted(allowed)
        while True:
            in_basis = set(self.basis)
            entering = next((j for j in order if rc[j] > 0 and j not in in_basis), None)
            if entering is None:
                return OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], entering)
            f = rc[entering]
            rc = [a - f * x if x else a for a, x in zip(rc, self.rows[best[1]])]


def maximize(
    c: Row,
    a_ub: Sequence[Row] = (),
    b_ub: Row = (),
    a_eq: Sequence[Row] = (),
    b_eq: Row = (),
) -> LPResult:
    """Maximise ``c.x`` subject to ``a_ub x <= b_ub``, ``a_eq x = b_eq`` and ``x >= 0``."""
    n = len(c)
    m_ub, m_eq = len(a_ub), len(a_eq)
    m = m_ub + m_eq
    width = n + m_ub + m  # structural, slack, artificial
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for i in range(m):
        row = [Fraction(0)] * width
        if i < m_ub:
            src, b = a_ub[i], Fraction(b_ub[i])
            row[n + i] = Fraction(1)
        else:
            src, b = a_eq[i - m_ub], Fraction(b_eq[i - m_ub])
        for j, v in enumerate(src):
            row[j] = Fraction(v)
        if b < 0:
            row = [-v for v in row]
            b = -b
        row[n + m_ub + i] = Fraction(1)
        rows.append(row)
        rhs.append(b)
    art = set(range(n + m_ub, width))
    tab = _Tableau(rows, rhs, list(range(n + m_ub, width)))

    phase1 = [Fraction(0)] * width
    for j in art:
        phase1[j] = Fraction(-1)
    tab.optimise(phase1, set(range(width)))
    if any(tab.rhs[i] != 0 for i, b in enumerate(tab.basis) if b in art):
        return LPResult(INFEASIBLE, pivots=tab.pivots)

    # drive zero-level artificials out of the basis; drop redundant rows
    keep = []
    for i in range(len(tab.rows)):
        if tab.basis[i] in art:
            col = next((j for j in range(n + m_ub) if tab.rows[i][j] != 0), None)
            if col is None:
                continue
            tab.pivot(i, col)
        keep.append(i)
    tab.rows = [tab.rows[i] for i in keep]
    tab.rhs = [tab.rhs[i] for i in keep]
    tab.basis = [tab.basis[i] for i in keep]

    cost = [Fraction(v) for v in c] + [Fraction(0)] * (width - n)
    status = tab.optimise(cost, set(range(n + m_ub)))
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, pivots=tab.pivots)
    x = [Fraction(0)] * width
    for i, b in enumerate(tab.basis):
        x[b] = tab.rhs[i]
    value = sum((cost[j] * x[j] for j in range(n)), Fraction(0))
    return LPResult(OPTIMAL, tuple(x[:n]), value, tab.pivots)


def feasible_point(a_ub: Sequence[Row], b_ub: Row, a_eq: Sequence[Row], b_eq: Row, n: int) -> Optional[tuple[Fraction, ...]]:
    res = maximize([0] * n, a_ub, b_ub, a_eq, b_eq)
    return res.x if res.status == OPTIMAL else None
