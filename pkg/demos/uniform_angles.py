"""
Angles seen from the base point are uniform
===========================================

With z1 = z0 the angle of the geodesic from z1 to gamma z0 becomes
equidistributed on [-pi/2, pi/2]; the KS distance to the uniform CDF
shrinks as R grows.
"""

from lattice_angles import Point
from lattice_angles.stats import convergence_table
from lattice_angles.theory import TheoryContext

ctx = TheoryContext(1, Point(0.0, 1.0), Point(0.0, 1.0))
print(" R     count   undefined   rel.err     KS")
for row in convergence_table(ctx, [0.0, 6.0, 8.0, 10.0, 12.0]):
    print(f"{row.R:4.1f} {row.count:9d} {row.undefined_count:6d}   {row.rel_error:.2e}   {row.ks_distance:.2e}")
