"""Size and homology table for the tree spaces T_n and the partition nerves.

    python3 scripts/census.py --max-n 6
"""

import argparse
import time
from math import factorial

from treespace.complexes import build_partition_nerve, build_tree_complex
from treespace.homology import homology
from treespace.trees import double_factorial


def row(name, n, c, with_homology):
    start = time.perf_counter()
    h = homology(c) if with_homology else None
    secs = time.perf_counter() - start
    betti = "-" if h is None else ",".join(f"{k}:{b}" for k, b in h.betti_numbers.items() if b)
    torsion = "-" if h is None else ("none" if h.is_torsion_free() else "yes")
    print(f"{name:<6}{n:>3}  {str(c.f_vector):<40}{betti:<12}{torsion:<7}{factorial(n - 1):>6}  {secs:6.2f}s")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=6)
    ap.add_argument("--homology-max", type=int, default=6, help="skip homology above this n")
    args = ap.parse_args()
    print(f"{'space':<6}{'n':>3}  {'f-vector':<40}{'betti':<12}{'tors':<7}{'(n-1)!':>6}  time")
    for n in range(3, args.max_n + 1):
        c = build_tree_complex(n)
        assert c.f_vector[-1] == double_factorial(2 * n - 3)
        row("T", n, c, n <= args.homology_max)
    for n in range(3, min(args.max_n, 5) + 1):
        row("nerve", n, build_partition_nerve(n), True)


if __name__ == "__main__":
    main()
