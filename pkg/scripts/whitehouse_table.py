"""Character tables and integral exactness for the pair (T_{n+1}, X).

    python3 scripts/whitehouse_table.py --max-n 5
"""

import argparse
import time

from treespace.whitehouse import build_complement_subcomplex, exactness_check, whitehouse_character_check


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=4)
    ap.add_argument("--no-exactness", action="store_true")
    args = ap.parse_args()
    for n in range(3, args.max_n + 1):
        start = time.perf_counter()
        chk = whitehouse_character_check(n)
        rows = chk.rows()
        classes = list(rows["induced"])
        print(f"n={n}  Σ_{n + 1} classes: {' '.join(f'{k:>9}' for k in classes)}")
        for name, table in rows.items():
            print(f"  {name:<10}{' '.join(f'{table[k]:>9}' for k in classes)}")
        print(f"  identity holds: {chk.ok}")
        if not args.no_exactness:
            r = exactness_check(build_complement_subcomplex(n))
            print(f"  exact over Z: {r.exact}  ranks {r.ranks}  diagnostics {r.diagnostics or 'none'}")
        print(f"  ({time.perf_counter() - start:.1f} s)\n")


if __name__ == "__main__":
    main()
