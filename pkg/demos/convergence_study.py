#!/usr/bin/env python3
"""Convergence of the solver against the closed-form radial profile.

On the degenerate sector alpha = beta the unit-source solution is exactly
(1 - r^2)/4, so the discrete error is measurable directly. Refining the
mesh twice should show the L2 error falling by about a factor of four per
halving, and the principal eigenvalue should land near the square of the
first zero of the Bessel function J0.
"""

import math

from sector_symmetry import (
    NonlinearitySpec,
    SectorSpec,
    bessel_j0_first_zero,
    generate,
    l2_difference,
    principal_eigenvalue,
    refine,
    solve_semilinear,
)


def radial(x: float, y: float) -> float:
    return 0.25 * (1.0 - x * x - y * y)


def main() -> None:
    spec = SectorSpec(math.pi / 2, math.pi / 2)
    mesh = generate(spec, 0.08)
    print("     h      L2 error    rate")
    prev = None
    for level in range(3):
        if level:
            mesh = refine(mesh)
        field, _ = solve_semilinear(mesh, NonlinearitySpec.const(1.0))
        err = l2_difference(field, radial)
        rate = "  -  " if prev is None else f"{math.log2(prev / err):5.2f}"
        print(f"  {mesh.h:.3f}   {err:.3e}   {rate}")
        prev = err

    lam, _ = principal_eigenvalue(mesh)
    j0 = bessel_j0_first_zero()
    print(f"principal eigenvalue {lam:.6f} vs j0^2 = {j0 * j0:.6f} "
          f"(relative error {abs(lam - j0 * j0) / (j0 * j0):.2e})")


if __name__ == "__main__":
    main()
