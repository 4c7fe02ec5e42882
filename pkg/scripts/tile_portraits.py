#!/usr/bin/env python3
"""Emit attractor point clouds and |mu^| grids for a small system gallery.

Writes CSVs under the output directory (default ./portraits):
  <name>_attractor.csv   columns x,y          (depth-k partial sums)
  <name>_grid.csv        columns x,y,absval   (|mu^| on a box grid)

Usage: python scripts/tile_portraits.py [outdir] [depth] [grid]
"""

import csv
import sys
from pathlib import Path

from moranspectra import (
    Mat2,
    MoranSystem,
    attractor_points,
    canonical_digits,
    fourier,
    scaled_canonical,
)

GALLERY = {
    "tile_2i": MoranSystem.constant(Mat2.scalar(2), canonical_digits()),
    "fractal_4i": MoranSystem.constant(Mat2.scalar(4), canonical_digits()),
    "shear": MoranSystem.constant(Mat2(2, 2, 0, 2), canonical_digits()),
    "rotation_t3": MoranSystem.constant(Mat2(0, -2, 2, 0), scaled_canonical(3)),
}


def main() -> None:
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("portraits")
    depth = int(sys.argv[2]) if len(sys.argv) > 2 else 6
    grid = int(sys.argv[3]) if len(sys.argv) > 3 else 81
    outdir.mkdir(parents=True, exist_ok=True)
    box = 4.0
    for name, sysm in GALLERY.items():
        pts = attractor_points(sysm, depth)
        with (outdir / f"{name}_attractor.csv").open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "y"])
            writer.writerows(pts)
        with (outdir / f"{name}_grid.csv").open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "y", "absval"])
            for i in range(grid):
                x = -box + 2 * box * i / (grid - 1)
                for j in range(grid):
                    y = -box + 2 * box * j / (grid - 1)
                    writer.writerow([x, y, abs(fourier(sysm, (x, y), 1e-6).value)])
        print(f"{name}: {len(pts)} attractor points, {grid}x{grid} grid -> {outdir}")


if __name__ == "__main__":
    main()
