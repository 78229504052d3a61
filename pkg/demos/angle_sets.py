"""
Where the angle falls below a threshold
=======================================

theta <= omega reduces to the offset u = X - x* lying in a finite union
of open intervals; the predicate and the union agree.
"""

import math

import numpy as np

from lattice_angles.theory import build_S

ys = 1.0
for omega in (-math.pi / 3, 0.0, math.pi / 4):
    lam = math.tan(omega)
    S = build_S(ys, lam)
    u = np.linspace(-5, 5, 100_001)
    u = u[np.abs(np.abs(u) - ys) > 1e-9]
    pred = 2 * ys * u / (ys * ys - u * u) < lam
    print(f"omega={omega:+.3f}  S={S.intervals}  mismatches={int(np.sum(pred != S.contains(u)))}")
