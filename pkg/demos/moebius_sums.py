"""
Moebius-weighted sums
=====================

sum_c Phi_N(c) f(c) is close to C_N times the integral of f, and to
C_N / N times it when only multiples of N enter.
"""

import numpy as np

from lattice_angles.arith import moebius_weighted_sum

Q = 1e4
for N in (1, 2, 6):
    for name, f in [("c", lambda c: c), ("sqrt(Q^2-c^2)", lambda c: np.sqrt(np.maximum(Q * Q - c * c, 0.0)))]:
        for mult in (False, True):
            s = moebius_weighted_sum(N, (0.0, Q), f, restrict_to_multiples=mult)
            print(f"N={N}  f={name:14s} multiples={mult!s:5}  rel.diff={s.rel_diff:.2e}")
