"""Walk the surface catalog: frames, principal curvatures, inversion.

Prints the curvature range of each catalog surface (outer-normal
convention, so convex bodies have negative principal curvatures), checks
a few closed forms, and shows how inversion about a point near the
surface bends a convex ellipsoid into a shape with sign-changing
curvature.
"""

from __future__ import annotations

import numpy as np

from npspectra import (
    build_grid,
    ellipsoid,
    evaluate_frame,
    mobius_invert,
    peanut,
    principal_curvatures,
    sphere,
    spheroid,
    torus,
)


def curvature_range(surf, n_u: int = 48, n_v: int = 96):
    grid = build_grid(surf, n_u, n_v)
    return float(grid.k1.min()), float(grid.k1.max()), \
        float(grid.k2.min()), float(grid.k2.max())


def main() -> None:
    print("catalog surfaces and their principal curvature ranges")
    print(f"{'surface':<26}{'k1 in':>24}{'k2 in':>24}")
    gallery = [
        ("sphere(1)", sphere()),
        ("ellipsoid(2, 1.2, 1)", ellipsoid(2.0, 1.2, 1.0)),
        ("prolate spheroid(1, 2)", spheroid(1.0, 2.0)),
        ("oblate spheroid(2, 1)", spheroid(2.0, 1.0)),
        ("torus(2, 1)", torus(2.0, 1.0)),
        ("peanut()", peanut()),
    ]
    for name, surf in gallery:
        lo1, hi1, lo2, hi2 = curvature_range(surf)
        print(f"{name:<26}[{lo1:+8.4f}, {hi1:+8.4f}]    "
              f"[{lo2:+8.4f}, {hi2:+8.4f}]")
    print()

    frame = evaluate_frame(sphere(), np.pi / 2, 0.0)
    print("unit sphere equator frame:")
    print(f"  point  {frame.point.round(12)}")
    print(f"  normal {frame.normal.round(12)} (outward)")
    k1, k2, _, _ = principal_curvatures(frame)
    print(f"  k1 = {float(k1):+.12f}, k2 = {float(k2):+.12f} "
          "(both -1 exactly)")
    print()

    # the tube curvature of the torus is -1/r everywhere
    grid = build_grid(torus(2.0, 1.0), 32, 32)
    print(f"torus tube curvature: k2 constant at "
          f"{grid.k2.mean():+.12f} (spread {np.ptp(grid.k2):.1e})")
    print()

    base = ellipsoid(2.0, 1.2, 1.0)
    image = mobius_invert(base, (2.1, 0.0, 0.0), 1.0)
    lo1, hi1, _, _ = curvature_range(base, 96, 192)
    print(f"convex ellipsoid:    k1 in [{lo1:+.4f}, {hi1:+.4f}] "
          "(never positive)")
    lo1, hi1, _, _ = curvature_range(image, 96, 192)
    print(f"inverted about (2.1, 0, 0): k1 in [{lo1:+.4f}, {hi1:+.4f}] "
          "(sign change appears)")


if __name__ == "__main__":
    main()
