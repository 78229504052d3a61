"""Empirical angle distributions compared against the limiting law."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import group, theory
from .geometry import NormalizedTarget
from .group import AngleSample, AngleSamples  # noqa: F401  (re-exported)

HALF_PI = math.pi / 2


class EmptySampleError(ValueError):
    """Raised when a statistic is requested for zero angle samples."""


def _thetas(samples) -> np.ndarray:
    if isinstance(samples, AngleSamples):
        th = samples.theta
    else:
        th = np.asarray([s.theta if isinstance(s, AngleSample) else s for s in samples], dtype=np.float64)
    if len(th) == 0:
        raise EmptySampleError("no angle samples")
    return th


def ecdf(samples, omega):
    """Fraction of samples with ``theta <= omega``."""
    th = np.sort(_thetas(samples))
    vals = np.searchsorted(th, omega, side="right") / len(th)
    return float(vals) if np.ndim(vals) == 0 else vals


def ks_distance(samples, target: NormalizedTarget) -> float:
    """Sup distance between the sample ECDF and the limiting CDF.

    Exact for a step function against a continuous one: it is enough to
    look at each sample point and its left limit.
    """
    th = np.sort(_thetas(samples))
    n = len(th)
    cdf = theory.xi(target, th)
    upper = np.arange(1, n + 1) / n - cdf
    lower = cdf - np.arange(n) / n
    return float(max(upper.max(), lower.max()))


@dataclass(frozen=True)
class BinRow:
    lo: float
    hi: float
    observed: int
    expected: float
    flagged: bool


def chi_square_bins(samples, context: theory.TheoryContext, bins: int) -> tuple[float, list[BinRow]]:
    """Pearson statistic over equal-width bins of ``[-pi/2, pi/2]``.

    Expected masses come from integrating the density. Bins expecting
    fewer than 5 samples are flagged and left out of the statistic.
    Bins are ``[lo, hi)`` except the last, which is closed.
    """
    if bins < 2:
        raise ValueError("need at least 2 bins")
    th = _thetas(samples)
    n = len(th)
    edges = np.linspace(-HALF_PI, HALF_PI, bins + 1)
    observed, _ = np.histogram(th, bins=edges)
    rows = []
    stat = 0.0
    for lo, hi, obs in zip(edges[:-1], edges[1:], observed):
        mass, _ = integrate.quad(lambda t: theory.density_rho(context, t), lo, hi, epsabs=1e-13, epsrel=1e-12)
        exp = n * mass / math.pi
        flagged = exp < 5
        if not flagged:
            stat += (obs - exp) ** 2 / exp
        rows.append(BinRow(float(lo), float(hi), int(obs), exp, flagged))
    return stat, rows


@dataclass(frozen=True)
class ConvergenceRow:
    R: float
    count: int
    main_term: float
    rel_error: float
    ks_distance: float  # nan when every angle is undefined
    undefined_count: int


def convergence_table(context: theory.TheoryContext, R_list: Sequence[float], workers: int = 1) -> list[ConvergenceRow]:
    if any(b <= a for a, b in zip(R_list, R_list[1:])):
        raise ValueError("R_list must be increasing")
    rows = []
    for R in R_list:
        spec = group.BallSpec.from_radius(context.N, context.z0, R)
        samples = group.collect_angles(spec, context.z1, workers=workers, keep_gamma=False)
        count = samples.ball_count
        main = theory.ball_main_term(context.N, R)
        ks = ks_distance(samples, context.target) if len(samples) else math.nan
        rows.append(ConvergenceRow(R, count, main, abs(count / main - 1.0), ks, samples.undefined_count))
    return rows
