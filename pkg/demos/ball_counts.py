"""
Counting orbit points in hyperbolic balls
=========================================

Every element of Gamma(N) moving z0 into the ball of radius R is
enumerated exactly, then compared with 6 e^R / [Gamma(1) : Gamma(N)].
"""

from lattice_angles import BallSpec, Point, count_ball, enumerate_ball
from lattice_angles.theory import ball_main_term, index_gamma_N

z0 = Point(0.0, 1.0)

# the smallest ball only holds the stabilizer of i
print(enumerate_ball(BallSpec(1, z0, 2.0)))

# counts against the main term as the radius grows
for N in (1, 2, 3):
    print(f"N={N}, index {index_gamma_N(N)}")
    for R in (6.0, 8.0, 10.0, 12.0):
        n = count_ball(BallSpec.from_radius(N, z0, R))
        main = ball_main_term(N, R)
        print(f"  R={R:5.1f}  count={n:9d}  main={main:12.1f}  rel.err={abs(n / main - 1):.2e}")
