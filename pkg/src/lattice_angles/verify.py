"""Desk-scale self-checks run by ``lattice-angles verify``.

Each suite returns ``(passed, detail)``. The suites look functions up
through their modules at call time, so a patched evaluator is seen.
"""

from __future__ import annotations

import math
from collections.abc import Callable

import numpy as np
from scipy import integrate

from . import arith, geometry, group, oracles, stats, theory
from .geometry import NormalizedTarget, Point

I = Point(0.0, 1.0)


def suite_enumeration_oracle():
    mismatches = 0
    for N in (1, 2, 3):
        for z0 in (I, Point(1.0, 2.0)):
            for q2 in (2.0, 10.0, 101.5, 400.0):
                spec = group.BallSpec(N, z0, q2)
                fast = set(map(tuple, group.enumerate_ball(spec).tolist()))
                mismatches += fast != oracles.brute_force_ball(spec)
    return mismatches == 0, f"mismatched configurations: {mismatches}"


def suite_angle_oracle():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(2000):
        g = group.random_element(rng, 1000)
        z0 = Point(rng.uniform(-2, 2), rng.uniform(0.2, 3))
        z1 = Point(rng.uniform(-2, 2), rng.uniform(0.2, 3))
        t1, t2 = geometry.angle(g, z0, z1), geometry.angle_oracle(g, z0, z1)
        if (t1 is None) != (t2 is None):
            return False, f"definedness differs at {g}"
        if t1 is not None:
            worst = max(worst, abs(t1 - t2))
    return worst <= 1e-9, f"max |angle - oracle| = {worst:.3g}"


def suite_ball_asymptotics():
    errs = []
    for R in (8.0, 12.0):
        n = group.count_ball(group.BallSpec.from_radius(1, I, R))
        errs.append(abs(n / theory.ball_main_term(1, R) - 1))
    return errs[-1] <= 0.1 and errs[-1] < errs[0], f"relative errors {errs}"


def suite_uniform_angles():
    ctx = theory.TheoryContext(1, I, I)
    rows = stats.convergence_table(ctx, [6.0, 8.0, 10.0])
    ks = [r.ks_distance for r in rows]
    return ks[-1] <= 0.02 and ks[-1] < ks[0], f"KS distances {ks}"


def suite_limiting_cdf():
    z1 = Point(1.0, 2.0)
    samples = group.collect_angles(group.BallSpec.from_radius(2, I, 10.0), z1, keep_gamma=False)
    ks = stats.ks_distance(samples, NormalizedTarget.from_points(I, z1))
    return ks <= 0.05, f"KS distance {ks:.4g}"


def suite_sector():
    Q = 300.0
    errs = {}
    for beta in (-1.0, 0.0, 1.0, math.inf):
        n = group.count_sector(group.SectorSpec(group.BallSpec(1, I, Q * Q), beta))
        errs[beta] = abs(n / theory.sector_main_term(1, beta, Q) - 1)
    small = group.SectorSpec(group.BallSpec(2, Point(1.0, 2.0), 300.0), 0.5)
    agree = group.count_sector(small) == oracles.brute_force_sector(small)
    return agree and max(errs.values()) <= 0.05, f"relative errors {errs}, oracle agreement {agree}"


def suite_totient_identity():
    bad = [
        c
        for c in range(2, 301)
        if arith.count_congruence_box(arith.CongruenceBox(c, 1, (0, c - 1), (0, c - 1))) != c * arith.phi_N(c, 1)
    ]
    return not bad, f"failing c: {bad[:5]}"


def suite_weil():
    report = arith.weil_certificate(200, range(-5, 6), range(-5, 6), strict=False)
    return report.ok and report.max_ratio <= 1 + 1e-12, f"max ratio {report.max_ratio:.6f} at {report.worst}"


def suite_derivative_identity():
    rng = np.random.default_rng(11)
    grid = np.concatenate([np.linspace(-1.5697, -1e-3, 25), np.linspace(1e-3, 1.5697, 25)])
    worst = 0.0
    for _ in range(20):
        target = NormalizedTarget(rng.uniform(-3, 3), rng.uniform(0.1, 10))
        h = 1e-5
        fd = (theory.xi(target, grid + h) - theory.xi(target, grid - h)) / (2 * h)
        worst = max(worst, float(np.abs(fd - theory.density_normalized(target, grid) / math.pi).max()))
    return worst <= 1e-5, f"max deviation {worst:.3g}"


def suite_normalizations():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(200):
        target = NormalizedTarget(rng.uniform(-5, 5), rng.uniform(0.05, 20))
        worst = max(worst, abs(theory.xi(target, -math.pi / 2)), abs(theory.xi(target, math.pi / 2) - 1))
    ctx = theory.TheoryContext(1, Point(0.3, 0.7), Point(-1.2, 2.5))
    mass, _ = integrate.quad(lambda t: theory.density_rho(ctx, t), -math.pi / 2, math.pi / 2, epsabs=1e-13)
    rational = all(theory.main_term_identity(N) for N in range(1, 101))
    ok = worst <= 1e-12 and abs(mass - math.pi) <= 1e-8 and rational
    return ok, f"endpoint error {worst:.3g}, density mass - pi = {mass - math.pi:.3g}, rational identity {rational}"


def suite_moebius_sums():
    Q = 1e4
    diffs = []
    for N in (1, 2):
        for f in (lambda c: c, lambda c: np.sqrt(np.maximum(Q * Q - c * c, 0.0))):
            diffs.append(arith.moebius_weighted_sum(N, (0.0, Q), f).rel_diff)
            diffs.append(arith.moebius_weighted_sum(N, (0.0, Q), f, restrict_to_multiples=True).rel_diff)
    return max(diffs) <= 0.01, f"max relative difference {max(diffs):.3g}"


def suite_membership():
    rng = np.random.default_rng(5)
    mismatches = 0
    for _ in range(10_000):
        X, xs = rng.uniform(-10, 10, size=2)
        ys = rng.uniform(0.05, 5)
        lam = rng.choice([0.0, rng.uniform(-10, 10)])
        u = X - xs
        if abs(abs(u) - ys) < 1e-12:
            continue
        pred = 2 * ys * u / (ys * ys - u * u) < lam
        mismatches += pred != (u in theory.build_S(ys, lam))
    return mismatches == 0, f"mismatches {mismatches}"


SUITES: dict[str, Callable[[], tuple[bool, str]]] = {
    "enumeration_oracle": suite_enumeration_oracle,
    "angle_oracle": suite_angle_oracle,
    "ball_asymptotics": suite_ball_asymptotics,
    "uniform_angles": suite_uniform_angles,
    "limiting_cdf": suite_limiting_cdf,
    "sector_asymptotics": suite_sector,
    "totient_identity": suite_totient_identity,
    "weil_certificate": suite_weil,
    "derivative_identity": suite_derivative_identity,
    "normalizations": suite_normalizations,
    "moebius_sums": suite_moebius_sums,
    "membership": suite_membership,
}


def run_all(names=None) -> dict[str, tuple[bool, str]]:
    results = {}
    for name, suite in SUITES.items():
        if names and name not in names:
            continue
        try:
            ok, detail = suite()
            results[name] = (bool(ok), detail)
        except Exception as exc:  # a crashing suite is a failing suite
            results[name] = (False, f"{type(exc).__name__}: {exc}")
    return results
