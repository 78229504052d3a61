"""Closed-form main terms and the limiting angle distribution."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from sympy import primefactors

from .geometry import NormalizedTarget, Point

HALF_PI = math.pi / 2


def index_gamma_N(N: int) -> int:
    """Index of ``Gamma(N)`` in ``SL(2, Z)``."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    idx = Fraction(N**3)
    for p in primefactors(N):
        idx *= 1 - Fraction(1, p * p)
    assert idx.denominator == 1
    return int(idx)


def c_N(N: int) -> tuple[Fraction, float]:
    """``C_N`` as ``(r, r / zeta(2))`` with ``r = prod_{p | N} (1 - p^-2)^-1``."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    r = Fraction(1)
    for p in primefactors(N):
        r /= 1 - Fraction(1, p * p)
    return r, float(r) * 6.0 / math.pi**2


@dataclass(frozen=True)
class TheoryContext:
    N: int
    z0: Point
    z1: Point

    def __post_init__(self):
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")

    @property
    def target(self) -> NormalizedTarget:
        return NormalizedTarget.from_points(self.z0, self.z1)

    @property
    def index(self) -> int:
        return index_gamma_N(self.N)

    @property
    def c_N(self) -> tuple[Fraction, float]:
        return c_N(self.N)


def xi(target: NormalizedTarget, omega):
    """Limiting CDF of the angle at ``omega`` in ``[-pi/2, pi/2]``.

    Accepts scalars or arrays. The formula has removable singularities at
    ``omega = 0`` and ``+-pi/2``; those points get their limits.
    """
    w = np.asarray(omega, dtype=np.float64)
    if np.any((w < -HALF_PI) | (w > HALF_PI)) or np.any(np.isnan(w)):
        raise ValueError("omega must lie in [-pi/2, pi/2]")
    xs, ys = target.x_star, target.y_star
    const = np.arctan(xs + ys) + np.arctan(xs - ys)
    with np.errstate(divide="ignore", invalid="ignore"):
        half = w / 2
        val = np.arctan(xs + ys * np.tan(half)) + np.arctan(xs - ys / np.tan(half)) - const
    val = val / math.pi + (w > 0)
    at_zero = np.arctan(xs) / math.pi + 0.5 - const / math.pi
    val = np.where(w == 0, at_zero, val)
    val = np.where(w == -HALF_PI, 0.0, val)
    val = np.where(w == HALF_PI, 1.0, val)
    return float(val) if val.ndim == 0 else val


def density_rho(context: TheoryContext, t):
    """Density of the limiting angle distribution with respect to ``dt / pi``."""
    x0, y0 = context.z0.x, context.z0.y
    x1, y1 = context.z1.x, context.z1.y
    dx = x1 - x0
    s = y0 * y0 + dx * dx + y1 * y1
    t = np.asarray(t, dtype=np.float64)
    wave = (y0 * y0 + dx * dx - y1 * y1) * np.cos(t) + 2 * dx * y1 * np.sin(t)
    val = 2 * y0 * y1 * s / (s * s - wave * wave)
    return float(val) if val.ndim == 0 else val


def density_normalized(target: NormalizedTarget, t):
    """:func:`density_rho` for ``z0 = i`` and ``z1 = x* + i y*``."""
    ctx = TheoryContext(1, Point(0.0, 1.0), Point(target.x_star, target.y_star))
    return density_rho(ctx, t)


@dataclass(frozen=True)
class IntervalUnion:
    """Finite union of open intervals, sorted and pairwise disjoint."""

    intervals: tuple[tuple[float, float], ...]

    def __post_init__(self):
        merged: list[tuple[float, float]] = []
        for lo, hi in sorted(self.intervals):
            if not lo < hi:
                continue
            # open intervals sharing an endpoint stay separate: the point is excluded
            if merged and lo < merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
            else:
                merged.append((lo, hi))
        object.__setattr__(self, "intervals", tuple(merged))

    def __contains__(self, x: float) -> bool:
        return any(lo < x < hi for lo, hi in self.intervals)

    def contains(self, x):
        x = np.asarray(x, dtype=np.float64)
        hit = np.zeros(x.shape, dtype=bool)
        for lo, hi in self.intervals:
            hit |= (lo < x) & (x < hi)
        return hit

    def shift(self, offset: float) -> IntervalUnion:
        return IntervalUnion(tuple((lo + offset, hi + offset) for lo, hi in self.intervals))


def s_roots(lam: float) -> tuple[float, float]:
    """``(alpha_1, alpha_2)`` for ``lam > 0``, the starred pair for ``lam < 0``."""
    root = math.sqrt(1.0 + lam * lam)
    if lam > 0:
        return (1.0 + root) / lam, (-1.0 + root) / lam
    if lam < 0:
        return (1.0 - root) / abs(lam), (1.0 + root) / abs(lam)
    raise ValueError("roots are only defined for lam != 0")


def build_S(y_star: float, lam: float) -> IntervalUnion:
    """Set of offsets ``u`` with ``2 y* u / (y*^2 - u^2) < lam``."""
    if y_star <= 0:
        raise ValueError("y_star must be positive")
    inf = math.inf
    if lam > 0:
        a1, a2 = s_roots(lam)
        parts = ((-inf, -y_star * a1), (-y_star, y_star * a2), (y_star, inf))
    elif lam == 0:
        parts = ((-y_star, 0.0), (y_star, inf))
    else:
        a1, a2 = s_roots(lam)
        parts = ((-y_star, y_star * a1), (y_star, y_star * a2))
    return IntervalUnion(parts)


def ball_main_term(N: int, R: float) -> float:
    """Predicted size of ``Gamma(N)`` ball of radius ``R``: ``6 e^R / index``."""
    return 6.0 * math.exp(R) / index_gamma_N(N)


def ball_main_term_q(N: int, norm_bound_sq: float) -> float:
    """Same prediction in terms of ``Q^2``: ``6 Q^2 / index``."""
    return 6.0 * norm_bound_sq / index_gamma_N(N)


def sector_main_term(N: int, beta: float, Q: float) -> float:
    """``pi (pi + 2 arctan beta) C_N Q^2 / (2 N^3)``."""
    return math.pi * (math.pi + 2.0 * math.atan(beta)) * c_N(N)[1] * Q * Q / (2.0 * N**3)


def angle_count_main_term(context: TheoryContext, omega: float, R: float) -> float:
    return math.pi**2 * context.c_N[1] * xi(context.target, omega) * math.exp(R) / context.N**3


def main_term_identity(N: int) -> bool:
    """``pi^2 C_N / N^3 == 6 / index(N)`` checked on the rational parts."""
    r, _ = c_N(N)
    return 6 * r / N**3 == Fraction(6, index_gamma_N(N))
