"""Print the fundamental cycle of T_5 grouped by rooted shape, with one sample per shape.

    python3 scripts/f5_census.py [--all]
"""

import argparse
from collections import defaultdict

from treespace.complexes import simplex_tree
from treespace.cycle import boundary_of_module_chain, build_fundamental_cycle, cycle_term, f5_census, shape_class
from treespace.superlie import format_element


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--all", action="store_true", help="list every term")
    args = ap.parse_args()
    f = build_fundamental_cycle(5)
    groups = defaultdict(list)
    for j, coeff in f.coeffs.items():
        t = simplex_tree(f.complex, f.degree, j)
        groups[shape_class(t)].append((t, coeff))
    r = f5_census(f)
    print(f"terms: {r['total']}   boundary zero: {boundary_of_module_chain(f).is_zero()}   "
          f"pattern mismatches: {len(r['mismatched'])}")
    for shape in ("phi", "psi", "omega"):
        items = groups[shape]
        print(f"\n{shape}: {len(items)} terms")
        for t, coeff in (items if args.all else items[:3]):
            term = cycle_term(t)
            word = " ".join("{" + ",".join(map(str, e)) + "}" for e in term.edge_word)
            print(f"  {t.encoding:<22} word {word:<28} sign {term.orientation_sign:+d}  {format_element(coeff)}")


if __name__ == "__main__":
    main()
