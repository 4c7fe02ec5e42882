#!/usr/bin/env python3
"""Truncated completeness sums: integer-lattice spectrum vs quadrant tower.

For the constant (2I, canonical-digits) system the integer lattice is the
unique spectrum through the origin, while the half-lattice tower only fills
one quadrant.  This script prints how the truncated quadratic sum
Q(xi) = sum |mu^(xi + lambda)|^2 behaves for both candidate families:

* lattice boxes [-B, B]^2 at xi = (0.3, 0.7): monotone toward 1, but only
  like B^(-0.4) (the measure is Lebesgue on a fractal-boundary tile, so its
  transform decays slowly along lattice directions);
* tower truncations Lambda_k at xi = (-0.49, -0.49): saturating well below 1,
  witnessing incompleteness of the one-sided candidate.

Usage: python scripts/completeness_contrast.py [max_box]
"""

import sys
import time

from moranspectra import (
    Mat2,
    MoranSystem,
    build_lattice_spectrum,
    build_tower,
    canonical_digits,
    completeness_sum,
    enumerate_tower,
)

EPS = 1e-8


def main() -> None:
    max_box = int(sys.argv[1]) if len(sys.argv) > 1 else 32
    sysm = MoranSystem.constant(Mat2.scalar(2), canonical_digits())

    print(f"lattice spectrum boxes at xi = (0.3, 0.7), per-sum eps = {EPS}")
    print(f"{'B':>4}  {'points':>7}  {'Q':>10}  {'1-Q':>10}  {'secs':>6}")
    box = 2
    while box <= max_box:
        t0 = time.perf_counter()
        pts = build_lattice_spectrum(sysm, box, cap=4 * (2 * box + 1) ** 2)
        q = completeness_sum(sysm, pts, (0.3, 0.7), EPS)
        print(f"{box:>4}  {len(pts):>7}  {q:>10.6f}  {1 - q:>10.6f}"
              f"  {time.perf_counter() - t0:>6.2f}")
        box *= 2

    print()
    print("quadrant tower truncations at xi = (-0.49, -0.49)")
    print(f"{'k':>4}  {'points':>7}  {'Q':>10}")
    tower = build_tower(sysm)
    for k in range(1, 6):
        pts = enumerate_tower(tower, k)
        q = completeness_sum(sysm, pts, (-0.49, -0.49), EPS)
        print(f"{k:>4}  {len(pts):>7}  {q:>10.6f}")


if __name__ == "__main__":
    main()
