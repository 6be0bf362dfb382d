#!/usr/bin/env python3
"""Walk a few sectors and print their derived geometric constants.

Every quantity is a distance along the lower straight side (pivot
positions of the moving-line family) or an angle in radians. The
degenerate row alpha = beta is the plain circular sector, where all the
critical distances collapse to zero.
"""

import math

from sector_symmetry import SectorSpec, critical_angles, derive_constants

PI = math.pi

SECTORS = [
    (PI / 2, PI / 2),
    (2 * PI / 3, PI / 3),
    (2 * PI / 3, 5 * PI / 12),
    (5 * PI / 6, 5 * PI / 12),
    (PI, 7 * PI / 12),
]


def describe(alpha: float, beta: float) -> None:
    spec = SectorSpec(alpha, beta)
    c = derive_constants(spec)
    print(f"alpha={alpha:.4f} beta={beta:.4f}"
          f"{'  (degenerate: plain sector)' if spec.is_degenerate else ''}")
    print(f"  arc center offset a       = {c.a:+.6f}")
    print(f"  side length l_N           = {c.l_N:.6f}")
    print(f"  entry distance            = {c.lambda_sharp:.6f}")
    print(f"  collinear distance        = {c.lambda_C:.6f}")
    print(f"  right-angle foot          = {c.l_perp:.6f}")
    print(f"  sweep-out distance        = {c.lambda_max:.6f}")

    # below the collinear distance a forbidden gap splits the admissible
    # angles in two; at and beyond it the set is a single interval
    probes = (
        (0.5 * c.lambda_C, "below collinear"),
        (0.5 * (c.lambda_C + c.lambda_max), "past collinear"),
    )
    for lam, tag in probes:
        if not 0.0 < lam < c.lambda_max:
            continue
        adm = critical_angles(spec, lam)
        parts = " u ".join(f"({lo:.4f}, {hi:.4f}]" for lo, hi in adm.intervals)
        print(f"  admissible angles at {tag} pivot {lam:.4f}: {parts}")
    print()


if __name__ == "__main__":
    for alpha, beta in SECTORS:
        describe(alpha, beta)
