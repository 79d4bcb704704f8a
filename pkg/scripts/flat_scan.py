"""Walk the 2-3 neighbourhood of a triangulation and list structures with flat tetrahedra.

    python3 scripts/flat_scan.py data/figure8.tri --depth 1
"""

import argparse
from collections import deque

from flatangle.angles import iter_structures, verify_structure
from flatangle.cli import read_triangulation
from flatangle.moves import TWO_THREE, applicable_moves, apply_move
from flatangle.triangulation import iso_signature


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("file")
    ap.add_argument("--depth", type=int, default=1, help="number of 2-3 moves to explore")
    ap.add_argument("--max-tets", type=int, default=6)
    args = ap.parse_args()

    start = read_triangulation(args.file)
    seen = {iso_signature(start)}
    queue = deque([(start, 0)])
    while queue:
        tri, depth = queue.popleft()
        sig = iso_signature(tri)
        structures = list(iter_structures(tri))
        flats = [s for s in structures if not s.is_strict]
        strict = next((s.epsilon for s in structures if s.is_strict), None)
        print(f"depth={depth} tets={tri.size} strict_eps={strict} flat_structures={len(flats)} {sig}")
        for s in flats:
            assert verify_structure(tri, s).passed
            layers = "; ".join(f"n={lc.n} moves={len(lc.moves)}" for lc in s.layering)
            print(f"    flat={dict(sorted(s.flat.items()))} eps={s.epsilon} layers: {layers}")
        if depth == args.depth or tri.size >= args.max_tets:
            continue
        for site in applicable_moves(tri):
            if site.kind != TWO_THREE:
                continue
            nxt = apply_move(tri, site)
            key = iso_signature(nxt)
            if key not in seen:
                seen.add(key)
                queue.append((nxt, depth + 1))


if __name__ == "__main__":
    main()
