"""
Sector counts
=============

Elements with A/C <= beta under the modified norm bound, against
pi (pi + 2 arctan beta) C_N Q^2 / (2 N^3).
"""

import math

from lattice_angles import BallSpec, Point, SectorSpec, count_sector
from lattice_angles.theory import sector_main_term

Q = 500.0
ball = BallSpec(1, Point(0.0, 1.0), Q * Q)
for beta in (-math.inf, -1.0, 0.0, 1.0, math.inf):
    n = count_sector(SectorSpec(ball, beta))
    main = sector_main_term(1, beta, Q)
    print(f"beta={beta:5}  count={n:8d}  main={main:12.1f}")
