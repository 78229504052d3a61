"""
The limiting angle distribution for z1 != z0
============================================

For z1 away from z0 the angles follow Xi_{x*, y*}, the CDF in the
normalized coordinates x* = (x1 - x0) / y0, y* = y1 / y0.
"""

import numpy as np

from lattice_angles import BallSpec, Point, collect_angles
from lattice_angles.geometry import NormalizedTarget
from lattice_angles.stats import ecdf, ks_distance
from lattice_angles.theory import xi

z0, z1 = Point(0.0, 1.0), Point(1.0, 2.0)
target = NormalizedTarget.from_points(z0, z1)
samples = collect_angles(BallSpec.from_radius(2, z0, 11.0), z1, keep_gamma=False)
print(f"{len(samples)} angles, {samples.undefined_count} undefined")

grid = np.linspace(-np.pi / 2, np.pi / 2, 9)
for w, e, x in zip(grid, ecdf(samples, grid), xi(target, grid)):
    print(f"omega={w:+.3f}  ecdf={e:.5f}  Xi={x:.5f}")
print("KS distance", ks_distance(samples, target))
