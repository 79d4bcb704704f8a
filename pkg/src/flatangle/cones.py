"""Extreme rays and Hilbert bases of {x >= 0 : A x = 0} over the integers."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import floor, gcd
from typing import Iterable, Iterator, Optional, Sequence

from .errors import ResourceLimit

Vec = tuple[int, ...]


def primitive(v: Iterable[int]) -> Vec:
    v = tuple(v)
    g = 0
    for x in v:
        g = gcd(g, x)
    return tuple(x // g for x in v) if g > 1 else v


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b) if x and y)


def _zeros(v: Vec) -> int:
    """Bitmask of the zero coordinates of ``v``."""
    mask = 0
    for i, x in enumerate(v):
        if x == 0:
            mask |= 1 << i
    return mask


def extreme_rays(rows: Sequence[Sequence[int]], n: int) -> list[Vec]:
    """Double description: start from the orthant, cut by one hyperplane at a time."""
    rays: list[Vec] = [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
    for a in rows:
        if not any(a):
            continue
        vals = [_dot(a, r) for r in rays]
        zsets = [_zeros(r) for r in rays]
        new = [r for r, s in zip(rays, vals) if s == 0]
        pos = [i for i, s in enumerate(vals) if s > 0]
        neg = [i for i, s in enumerate(vals) if s < 0]
        for ip in pos:
            for jn in neg:
                common = zsets[ip] & zsets[jn]
                # combinatorial adjacency: no third ray vanishes on the common zero set
                if any(common & z == common for k, z in enumerate(zsets) if k != ip and k != jn):
                    continue
                sp, sn = vals[ip], vals[jn]
                new.append(primitive(sp * x - sn * y for x, y in zip(rays[jn], rays[ip])))
        rays = sorted(set(new))
    return sorted(rays, key=lambda r: (sum(r), r))


def hilbert_basis_completion(
    rows: Sequence[Sequence[int]], n: int, seeds: Iterable[Vec] = (), cap: Optional[int] = 20000
) -> list[Vec]:
    """Minimal non-zero solutions of A x = 0, x >= 0 (Contejean-Devie completion).

    Candidates grow by unit vectors whose image points back toward the
    kernel; ``seeds`` are known minimal solutions used for pruning.  ``cap``
    bounds the candidate frontier.
    """
    rows = [tuple(r) for r in rows if any(r)]
    cols = [tuple(r[j] for r in rows) for j in range(n)]
    # gram[j][k] = <A e_j, A e_k>; a candidate keeps the vector of <A v, A e_k>
    gram = [tuple(_dot(cols[j], cols[k]) for k in range(n)) for j in range(n)]
    basis: list[Vec] = sorted(set(seeds))

    def covered(v: Vec) -> bool:
        return any(all(b <= x for b, x in zip(bv, v)) for bv in basis)

    def is_zero(v: Vec) -> bool:
        return not any(_dot(r, v) for r in rows)

    frontier: dict[Vec, tuple[int, ...]] = {}
    for j in range(n):
        e = tuple(1 if i == j else 0 for i in range(n))
        frontier[e] = gram[j]
    while frontier:
        next_frontier: dict[Vec, tuple[int, ...]] = {}
        live = []
        for v, dots in frontier.items():
            if is_zero(v):
                if not covered(v):
                    basis.append(v)
            else:
                live.append((v, dots))
        for v, dots in live:
            for j in range(n):
                if dots[j] >= 0:
                    continue
                w = v[:j] + (v[j] + 1,) + v[j + 1:]
                if w in next_frontier or covered(w):
                    continue
                g = gram[j]
                next_frontier[w] = tuple(a + b for a, b in zip(dots, g))
        if cap is not None and len(next_frontier) > cap:
            raise ResourceLimit(f"Hilbert basis completion frontier exceeded {cap} candidates")
        frontier = next_frontier
    return sorted(basis, key=lambda r: (sum(r), r))


# ------------------------------------------------------------------ lattices

def _column_reduce(rows: list[list[int]], n: int) -> tuple[list[list[int]], list[list[int]], int]:
    """Unimodular column operations bringing ``rows`` to lower echelon form.

    Returns (reduced rows, transform as columns, rank).  Columns ``rank..``
    of the transform span the integer kernel.
    """
    m = [list(r) for r in rows]
    u = [[1 if i == j else 0 for i in range(n)] for j in range(n)]  # u[j] is column j

    def combine(c1: int, c2: int, a: int, b: int, c: int, d: int) -> None:
        # (col c1, col c2) <- (a col c1 + b col c2, c col c1 + d col c2)
        for r in m:
            x, y = r[c1], r[c2]
            r[c1], r[c2] = a * x + b * y, c * x + d * y
        x, y = u[c1], u[c2]
        u[c1] = [a * p + b * q for p, q in zip(x, y)]
        u[c2] = [c * p + d * q for p, q in zip(x, y)]

    col = 0
    for row in m:
        if col >= n:
            break
        for j in range(col + 1, n):
            if row[j] == 0:
                continue
            x, y = row[col], row[j]
            g, s, t = _egcd(x, y)
            # [s t; -y/g x/g] has determinant 1
            combine(col, j, s, t, -y // g, x // g)
        if row[col] != 0:
            if row[col] < 0:
                _negate(m, u, col)
            col += 1
    return m, u, col


def _negate(m: list[list[int]], u: list[list[int]], c: int) -> None:
    for r in m:
        r[c] = -r[c]
    u[c] = [-x for x in u[c]]


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    """g, s, t with s a + t b = g = gcd(a, b) >= 0."""
    old_r, r, old_s, s_, old_t, t = a, b, 1, 0, 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s_ = s_, old_s - q * s_
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def integer_kernel(rows: Sequence[Sequence[int]], n: int) -> list[Vec]:
    """A basis of the lattice of integer vectors x with A x = 0."""
    _, u, rank = _column_reduce([list(r) for r in rows], n)
    return [tuple(u[j]) for j in range(rank, n)]


def _solve(cols: Sequence[Sequence[int]], target: Sequence[int]) -> Optional[list[Fraction]]:
    """The unique x with sum x_j cols[j] = target, or None if there is none."""
    d = len(cols)
    n = len(target)
    aug = [[Fraction(cols[j][i]) for j in range(d)] + [Fraction(target[i])] for i in range(n)]
    r = 0
    for c in range(d):
        p = next((i for i in range(r, n) if aug[i][c] != 0), None)
        if p is None:
            return None
        aug[r], aug[p] = aug[p], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        r += 1
    if any(aug[i][d] != 0 for i in range(r, n)):
        return None
    return [aug[i][d] for i in range(d)]


def _coset_representatives(mat: list[list[int]]) -> Iterator[tuple[int, ...]]:
    """Representatives of Z^d modulo the column lattice of a non-singular ``mat``."""
    d = len(mat)
    h, _, _ = _column_reduce([list(r) for r in mat], d)
    diag = [abs(h[i][i]) for i in range(d)]
    yield from itertools.product(*(range(x) for x in diag))


def hilbert_basis_from_rays(
    rows: Sequence[Sequence[int]], n: int, rays: Sequence[Vec], cap: Optional[int] = 20000
) -> list[Vec]:
    """Hilbert basis of {x >= 0 : A x = 0} from its extreme rays.

    Every basis element is a ray or a lattice point of the half-open
    parallelepiped spanned by some linearly independent set of rays; the
    basis is the set of componentwise-minimal candidates.
    """
    if not rays:
        return []
    kernel = integer_kernel(rows, n)
    d = len(kernel)
    coords = []
    for r in rays:
        lam = _solve(kernel, r)
        assert lam is not None and all(x.denominator == 1 for x in lam)
        coords.append([int(x) for x in lam])
    cands: set[Vec] = set(rays)
    for subset in itertools.combinations(range(len(rays)), d):
        mat = [[coords[j][i] for j in subset] for i in range(d)]
        cols = [coords[j] for j in subset]
        det = abs(_det(mat))
        if det == 0:
            continue
        if cap is not None and det > cap:
            raise ResourceLimit(f"parallelepiped with {det} lattice points exceeds cap {cap}")
        for z in _coset_representatives(mat):
            lam = _solve(cols, z)
            frac = [x - floor(x) for x in lam]
            if not any(frac):
                continue
            p = [Fraction(0)] * n
            for f, j in zip(frac, subset):
                if f:
                    for i, x in enumerate(rays[j]):
                        if x:
                            p[i] += f * x
            cands.add(tuple(int(x) for x in p))
    ordered = sorted(cands, key=lambda r: (sum(r), r))
    basis: list[Vec] = []
    for v in ordered:
        if not any(all(b <= x for b, x in zip(bv, v)) for bv in basis):
            basis.append(v)
    return basis


def _det(mat: list[list[int]]) -> int:
    d = len(mat)
    a = [[Fraction(x) for x in r] for r in mat]
    det = Fraction(1)
    for c in range(d):
        p = next((i for i in range(c, d) if a[i][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, d):
            f = a[i][c] / a[c][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return int(det)



@dataclass(frozen=True)
class ConeSolve:
    coords: tuple[int, ...]
    rays: tuple[Vec, ...]
    basis: tuple[Vec, ...]


def restrict(rows: Sequence[Sequence[int]], coords: Sequence[int]) -> list[tuple[int, ...]]:
    out = set()
    for r in rows:
        sub = tuple(r[j] for j in coords)
        if any(sub):
            neg = tuple(-x for x in sub)
            out.add(max(sub, neg))
    return sorted(out)


def lift(v: Sequence[int], coords: Sequence[int], n: int) -> Vec:
    out = [0] * n
    for x, j in zip(v, coords):
        out[j] = x
    return tuple(out)


def solve_cone(
    rows: Sequence[Sequence[int]], coords: Sequence[int], n: int, cap: Optional[int] = 20000, cache: Optional[dict] = None
) -> ConeSolve:
    """Extreme rays and Hilbert basis of the sub-cone using only ``coords``.

    Coordinates vanishing on every extreme ray vanish on the whole cone, so
    the completion runs on the rays' support; ``cache`` shares results
    between cones with the same support.
    """
    sub = restrict(rows, coords)
    rays = [lift(r, coords, n) for r in extreme_rays(sub, len(coords))]
    support = tuple(sorted({j for r in rays for j, x in enumerate(r) if x}))
    if cache is not None and support in cache:
        basis = cache[support]
    else:
        inner = restrict(rows, support)
        local = [tuple(r[j] for j in support) for r in rays]
        basis = tuple(lift(b, support, n) for b in hilbert_basis_from_rays(inner, len(support), local, cap))
        if cache is not None:
            cache[support] = basis
    return ConeSolve(tuple(coords), tuple(rays), tuple(basis))
