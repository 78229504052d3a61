"""
Density of the limiting distribution
====================================

rho / pi is the derivative of Xi; finite differences agree with the
closed form, and the density integrates to pi.
"""

import numpy as np
from scipy import integrate

from lattice_angles import Point
from lattice_angles.theory import TheoryContext, density_rho, xi

ctx = TheoryContext(1, Point(0.0, 1.0), Point(0.0, 2.0))
t = np.linspace(-1.5, 1.5, 7)
h = 1e-5
fd = (xi(ctx.target, t + h) - xi(ctx.target, t - h)) / (2 * h)
for ti, r, f in zip(t, density_rho(ctx, t), fd):
    print(f"t={ti:+.2f}  rho={r:.8f}  pi*dXi={np.pi * f:.8f}")

mass, _ = integrate.quad(lambda s: density_rho(ctx, s), -np.pi / 2, np.pi / 2)
print("integral of rho:", mass, "pi:", np.pi)
