#!/usr/bin/env python3
"""How many electrons fit in the lowest conduction band of a cubic dot.

One orbital level per unit cell in one band, two electrons per level.  A
(1 nm)^3 dot holds six levels: small enough that individual levels are
resolved, which is what the injection protocol exploits.
"""

from lvalley.lattice import DotGeometry, LatticeSpec, count_dot_levels


def main():
    spec = LatticeSpec()
    print(f"lattice constant a = {spec.a} nm")
    print(f"{'side (nm)':>10s} {'unit cells':>11s} {'levels':>8s} {'electrons':>10s}")
    for side in (10.0, 5.0, 2.0, 1.0):
        res = count_dot_levels(DotGeometry(side), spec)
        print(f"{side:10.0f} {res.unit_cells:11d} {res.levels:8d} {res.electrons:10d}")
    print()
    print("note: the 10 nm entry is 6246 = round((10/0.543)^3); tables that")
    print("quote 6250 for this size have rounded a^3 to 0.16 nm^3.")


if __name__ == "__main__":
    main()
