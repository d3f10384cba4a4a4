#!/usr/bin/env python3
"""Map the special region of trihedral angles in side-length space.

Sweeps spherical triangles (a, b, c) with a fixed, classifies each, and
writes a CSV of (a, b, c, tag, margin) rows for plotting: the boundary of
the special set sits where the margin changes sign.
"""

import argparse
import csv
import math
import sys

import numpy as np

from octainscribe.angles import placement_test, triangle_from_sides
from octainscribe.sphere import GeometryError


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fixed-side", type=float, default=0.9, help="side a (rad)")
    ap.add_argument("--resolution", type=int, default=80, help="grid points per axis")
    ap.add_argument("--max-side", type=float, default=1.4)
    ap.add_argument("--out", default="-", help="CSV path (default stdout)")
    args = ap.parse_args()

    a = args.fixed_side
    grid = np.linspace(0.02, args.max_side, args.resolution)
    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    writer = csv.writer(fh)
    writer.writerow(["a", "b", "c", "tag", "margin"])
    n_special = n_total = 0
    for b in grid:
        for c in grid:
            try:
                tri = triangle_from_sides(a, b, c)
            except GeometryError:
                continue
            cls = placement_test(tri)
            writer.writerow([f"{a:.6f}", f"{b:.6f}", f"{c:.6f}", cls.tag.value, f"{cls.margin:.9f}"])
            n_total += 1
            n_special += cls.tag.value == "SPECIAL"
    if fh is not sys.stdout:
        fh.close()
    print(
        f"classified {n_total} triangles at a={a:.4f}: {n_special} special "
        f"({100 * n_special / max(n_total, 1):.1f}%)",
        file=sys.stderr,
    )
    print(f"threshold landmarks: pi/6={math.pi/6:.6f}, pi/3={math.pi/3:.6f}", file=sys.stderr)


if __name__ == "__main__":
    main()
