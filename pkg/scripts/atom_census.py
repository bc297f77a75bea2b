#!/usr/bin/env python3
"""Tabulate atom classes per bidegree for one staircase pair.

Usage: python scripts/atom_census.py n d_K "i0" "i1"
Example: python scripts/atom_census.py 4 1 "" "1,2,3"
"""

import sys

from steinberg_ext import atoms
from steinberg_ext.engine import Engine


def parse(text):
    return tuple(int(x) for x in text.split(",")) if text else ()


def main() -> None:
    n, d_k = int(sys.argv[1]), int(sys.argv[2])
    i0, i1 = parse(sys.argv[3]), parse(sys.argv[4])
    page = Engine(n, d_k).page(i0, i1)
    print(f"page n={n} d_K={d_k} floor={list(i0)} ceiling={list(i1)}")
    for ell in page.ells:
        for k in range(page.kmax + 1):
            classes = atoms.atom_classes(page, ell, k)
            if not classes:
                continue
            sizes = sorted(len(c.members) for c in classes)
            e2 = page.e2_dim(ell, k)
            print(f"  (-{ell},{k}): {len(classes)} classes, member counts {sizes}, "
                  f"second page dim {e2}")


if __name__ == "__main__":
    main()
