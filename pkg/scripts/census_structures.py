"""Search every census triangulation for a partially flat structure and tabulate the outcome.

    python3 scripts/census_structures.py --max-tets 2 [--out-dir structures/]
"""

import argparse
import time
from collections import Counter
from pathlib import Path

from flatangle.angles import format_structure, partially_flat_search
from flatangle.corpus import census
from flatangle.triangulation import iso_signature


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-tets", type=int, default=2)
    ap.add_argument("--out-dir", type=Path, help="write a .structure file for every success")
    args = ap.parse_args()
    if args.out_dir:
        args.out_dir.mkdir(parents=True, exist_ok=True)

    tally = Counter()
    for n in range(1, args.max_tets + 1):
        start = time.perf_counter()
        tris = list(census(n))
        print(f"# {n} tetrahedra: {len(tris)} triangulations ({time.perf_counter() - start:.1f}s to enumerate)")
        for i, tri in enumerate(tris):
            links = ",".join(str(link.genus) for link in tri.vertex_links)
            res = partially_flat_search(tri)
            s = res.structure
            if s is None:
                status = "none"
            elif s.is_strict:
                status = f"strict eps={s.epsilon}"
            else:
                status = f"flat={sorted(s.flat.items())} eps={s.epsilon}"
            tally[n, "none" if s is None else "found"] += 1
            print(f"{iso_signature(tri):<60} cusp_genera={links:<6} examined={res.examined:<3} {status}")
            if s is not None and args.out_dir:
                (args.out_dir / f"census{n}_{i}.structure").write_text(format_structure(tri, s))
        print(f"# {n} tetrahedra: {tally[n, 'found']} with a structure, {tally[n, 'none']} without")


if __name__ == "__main__":
    main()
