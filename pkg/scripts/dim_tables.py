#!/usr/bin/env python3
"""Print the bottom Ext dimension tables and their graded refinements.

Usage: python scripts/dim_tables.py [max_n] [d_K]
"""

import sys

from steinberg_ext import roots as rt
from steinberg_ext.engine import Engine
from steinberg_ext.extgroups import steinberg_profile
from steinberg_ext.linv import universal_dim


def main() -> None:
    max_n = int(sys.argv[1]) if len(sys.argv) > 1 else 4
    d_k = int(sys.argv[2]) if len(sys.argv) > 2 else 1
    print(f"bottom Ext dimensions between Steinberg representations, d_K={d_k}")
    for n in range(2, max_n + 1):
        eng = Engine(n, d_k)
        prof = steinberg_profile(eng, rt.delta(n), ())
        rec, _ = universal_dim(n, d_k)
        print(f"  n={n}: dim={prof.dim(prof.h_min)} (recursion {rec}), "
              f"graded {prof.graded[prof.h_min]}")
        if prof.dim(prof.h_min) != rec:
            raise SystemExit("page computation disagrees with the recursion")


if __name__ == "__main__":
    main()
