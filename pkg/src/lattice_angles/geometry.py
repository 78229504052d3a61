"""Upper half-plane primitives.

Points of the hyperbolic plane are represented in the upper half-plane
model. Everything an orbit point needs for the angle statistics is
computed after conjugating the base point ``z0`` to ``i``: a group
element ``gamma`` becomes the real unimodular matrix ``(A, B; C, D)``
and the target ``z1`` becomes ``x_star + i*y_star``.

The scalar kernels at the bottom are compiled with numba so the
enumeration kernels in :mod:`lattice_angles.group` can share them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numba
import numpy as np

if TYPE_CHECKING:
    from .group import GroupElement

# |Nm|, |Dn| below this (scaled by E + G) means gamma z0 == z1
DEGENERATE_TOL = 1e-12
HALF_PI = math.pi / 2


@dataclass(frozen=True)
class Point:
    """A point ``x + iy`` of the upper half-plane."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"point coordinates must be finite, got ({self.x}, {self.y})")
        if self.y <= 0:
            raise ValueError(f"point must lie in the upper half-plane, got y={self.y}")

    @classmethod
    def from_complex(cls, z: complex) -> Point:
        return cls(float(z.real), float(z.imag))

    def __complex__(self) -> complex:
        return complex(self.x, self.y)


I = Point(0.0, 1.0)


@dataclass(frozen=True)
class NormalizedTarget:
    """Image of ``z1`` under the conjugation taking ``z0`` to ``i``."""

    x_star: float
    y_star: float

    def __post_init__(self):
        if self.y_star <= 0:
            raise ValueError(f"y_star must be positive, got {self.y_star}")

    @classmethod
    def from_points(cls, z0: Point, z1: Point) -> NormalizedTarget:
        return cls((z1.x - z0.x) / z0.y, z1.y / z0.y)


@dataclass(frozen=True)
class ConjugatedEntries:
    """Entries of ``g0^-1 gamma g0`` where ``g0 i = z0``."""

    A: float
    B: float
    C: float
    D: float

    @property
    def E(self) -> float:
        return self.C * self.C + self.D * self.D

    @property
    def F(self) -> float:
        return self.A * self.C + self.B * self.D

    @property
    def G(self) -> float:
        return self.A * self.A + self.B * self.B

    @property
    def norm_sq(self) -> float:
        return self.A**2 + self.B**2 + self.C**2 + self.D**2

    @property
    def det(self) -> float:
        return self.A * self.D - self.B * self.C


def hyperbolic_distance(z: Point, w: Point) -> float:
    """Hyperbolic distance in the upper half-plane.

    Uses ``2 asinh(|z - w| / (2 sqrt(Im z Im w)))``, which equals
    ``arccosh(1 + |z - w|^2 / (2 Im z Im w))`` but keeps precision for
    nearby points.
    """
    chord = math.hypot(z.x - w.x, z.y - w.y)
    return 2.0 * math.asinh(chord / (2.0 * math.sqrt(z.y * w.y)))


def mobius(gamma: GroupElement, z: Point) -> Point:
    """Apply ``gamma`` to ``z`` by a fractional linear transformation."""
    zc = complex(z)
    return Point.from_complex((gamma.a * zc + gamma.b) / (gamma.c * zc + gamma.d))


def conjugate_entries(gamma: GroupElement, z0: Point) -> ConjugatedEntries:
    a, b, c, d = gamma.a, gamma.b, gamma.c, gamma.d
    x0, y0 = z0.x, z0.y
    A = a - c * x0
    return ConjugatedEntries(A, (A * x0 + b - d * x0) / y0, c * y0, c * x0 + d)


def conjugate_arrays(abcd: np.ndarray, z0: Point) -> tuple[np.ndarray, ...]:
    """Vectorized :func:`conjugate_entries` for an ``(n, 4)`` integer array."""
    a, b, c, d = (abcd[:, k].astype(np.float64) for k in range(4))
    x0, y0 = z0.x, z0.y
    A = a - c * x0
    return A, (A * x0 + b - d * x0) / y0, c * y0, c * x0 + d


def orbit_distance(gamma: GroupElement, z0: Point) -> float:
    """Distance from ``z0`` to ``gamma z0``, computed from the conjugated entries."""
    return _distance_from_norm(conjugate_entries(gamma, z0).norm_sq)


def angle(gamma: GroupElement, z0: Point, z1: Point) -> float | None:
    """Angle between the ray ``[z1, gamma z0]`` and the upward vertical at ``z1``.

    The value lies in ``[-pi/2, pi/2]``. ``None`` means the angle is
    undefined, which happens exactly when ``gamma z0 == z1``.
    """
    g = conjugate_entries(gamma, z0)
    t = NormalizedTarget.from_points(z0, z1)
    theta = _theta(g.A, g.B, g.C, g.D, t.x_star, t.y_star)
    return None if math.isnan(theta) else theta


def angle_oracle(gamma: GroupElement, z0: Point, z1: Point) -> float | None:
    """Same observable as :func:`angle`, via the center of the geodesic circle.

    The geodesic through ``z*`` and ``g i`` is a half circle centered at
    the real point ``alpha`` equidistant from both; the angle then has
    tangent ``y* / (x* - alpha)``. Kept deliberately separate from the
    closed-form numerator/denominator route.
    """
    t = NormalizedTarget.from_points(z0, z1)
    g = conjugate_entries(gamma, z0)
    w = complex(g.B, g.A) / complex(g.D, g.C)  # (iA + B) / (iC + D)
    zs = complex(t.x_star, t.y_star)
    scale = max(1.0, abs(w), abs(zs))
    if abs(w - zs) <= 1e-12 * scale:
        return None
    u = w.real
    if abs(u - t.x_star) <= 1e-14 * scale:
        return 0.0
    alpha = (abs(w) ** 2 - abs(zs) ** 2) / (2.0 * (u - t.x_star))
    run = t.x_star - alpha
    if run == 0.0:
        return math.copysign(HALF_PI, u - t.x_star)
    return math.atan(t.y_star / run)


def angles_from_entries(A, B, C, D, x_star: float, y_star: float) -> np.ndarray:
    """Vectorized angle; NaN marks undefined entries."""
    return _theta_ufunc(A, B, C, D, x_star, y_star)


def distances_from_entries(A, B, C, D) -> np.ndarray:
    return _distance_ufunc(A, B, C, D)


@numba.njit(cache=True, nogil=True)
def _theta(A, B, C, D, xs, ys):
    E = C * C + D * D
    F = A * C + B * D
    G = A * A + B * B
    num = 2.0 * ys * (F - xs * E)
    den = (ys * ys - xs * xs) * E + 2.0 * xs * F - G
    tol = DEGENERATE_TOL * (E + G)
    if abs(den) <= tol:
        if abs(num) <= tol:
            return np.nan
        return HALF_PI if num > 0 else -HALF_PI
    return math.atan(num / den)


@numba.njit(cache=True, nogil=True)
def _distance_from_norm(norm_sq):
    return math.acosh(max(0.5 * norm_sq, 1.0))


@numba.vectorize(["float64(float64, float64, float64, float64, float64, float64)"], cache=True)
def _theta_ufunc(A, B, C, D, xs, ys):
    return _theta(A, B, C, D, xs, ys)


@numba.vectorize(["float64(float64, float64, float64, float64)"], cache=True)
def _distance_ufunc(A, B, C, D):
    return _distance_from_norm(A * A + B * B + C * C + D * D)
