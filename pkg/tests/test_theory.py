import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate
from sympy import primerange

from lattice_angles import theory
from lattice_angles.geometry import NormalizedTarget, Point
from lattice_angles.theory import TheoryContext, build_S, c_N, index_gamma_N, xi

I = Point(0.0, 1.0)


def moebius_sieve(n):
    mu = np.ones(n + 1, dtype=np.int64)
    for p in primerange(2, n + 1):
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
    mu[0] = 0
    return mu


def random_targets(seed, count, y_lo=0.1, y_hi=10.0):
    rng = np.random.default_rng(seed)
    return [NormalizedTarget(rng.uniform(-3, 3), rng.uniform(y_lo, y_hi)) for _ in range(count)]


@pytest.mark.parametrize("N, expected", [(1, 1), (2, 6), (3, 24), (4, 48), (6, 144)])
def test_index(N, expected):
    assert index_gamma_N(N) == expected


def test_index_matches_reduction_count():
    # |SL(2, Z/N)| counted directly
    for N in (2, 3, 4, 5, 6):
        n = sum(1 for a in range(N) for b in range(N) for c in range(N) for d in range(N) if (a * d - b * c) % N == 1 % N)
        assert index_gamma_N(N) == n


def test_c_N_examples():
    assert c_N(1) == (Fraction(1), pytest.approx(6 / math.pi**2))
    assert c_N(2)[0] == Fraction(4, 3)
    assert c_N(2)[1] == pytest.approx(8 / math.pi**2)
    assert c_N(1)[1] == pytest.approx(0.607927, abs=1e-6)


def test_c_N_partial_sums():
    n = 10**6
    mu = moebius_sieve(n)
    k = np.arange(n + 1, dtype=np.float64)
    k[0] = 1.0
    terms = mu / k**2
    for N in (1, 2, 3, 6, 10):
        coprime = np.gcd(np.arange(n + 1), N) == 1
        assert terms[coprime].sum() == pytest.approx(c_N(N)[1], abs=1e-6)


def test_invalid_level():
    for fn in (index_gamma_N, c_N):
        with pytest.raises(ValueError):
            fn(0)


def test_xi_examples():
    t = NormalizedTarget(0.0, 1.0)
    assert xi(t, -math.pi / 2) == 0.0
    assert xi(t, math.pi / 2) == 1.0
    assert xi(t, math.pi / 4) == pytest.approx(0.75, abs=1e-12)


def test_xi_uniform_case_is_linear():
    w = np.linspace(-math.pi / 2, math.pi / 2, 1001)
    assert np.allclose(xi(NormalizedTarget(0.0, 1.0), w), w / math.pi + 0.5, atol=1e-12)


def test_xi_rejects_out_of_range():
    with pytest.raises(ValueError):
        xi(NormalizedTarget(0.0, 1.0), 2.0)


def test_xi_endpoints_many_targets():
    for t in random_targets(0, 1000, 0.01, 50.0):
        assert abs(xi(t, -math.pi / 2)) <= 1e-12
        assert abs(xi(t, math.pi / 2) - 1) <= 1e-12


def test_xi_continuous_at_zero():
    for t in random_targets(1, 100):
        mid = xi(t, 0.0)
        assert abs(xi(t, 1e-8) - mid) <= 1e-6
        assert abs(xi(t, -1e-8) - mid) <= 1e-6


def test_xi_continuous_at_endpoints():
    for t in random_targets(2, 100):
        assert xi(t, -math.pi / 2 + 1e-9) <= 1e-6
        assert xi(t, math.pi / 2 - 1e-9) >= 1 - 1e-6


def test_xi_strictly_increasing():
    grid = np.linspace(-math.pi / 2, math.pi / 2, 10_000)
    for t in random_targets(3, 50):
        assert np.all(np.diff(xi(t, grid)) > 0)


def test_density_uniform():
    ctx = TheoryContext(1, I, I)
    assert np.allclose(theory.density_rho(ctx, np.linspace(-1.5, 1.5, 31)), 1.0, atol=1e-15)


def test_density_example():
    assert theory.density_rho(TheoryContext(1, I, Point(0, 2)), 0.0) == pytest.approx(1.25, abs=1e-12)


@pytest.mark.parametrize(
    "z0, z1",
    [(I, I), (I, Point(0, 2)), (Point(0.3, 0.7), Point(-1.2, 2.5)), (Point(5, 0.1), Point(-5, 9))],
)
def test_density_mass_and_positivity(z0, z1):
    ctx = TheoryContext(2, z0, z1)
    mass, _ = integrate.quad(lambda t: theory.density_rho(ctx, t), -math.pi / 2, math.pi / 2, epsabs=1e-13, limit=200)
    assert mass == pytest.approx(math.pi, abs=1e-8)
    assert np.all(theory.density_rho(ctx, np.linspace(-math.pi / 2, math.pi / 2, 2001)) > 0)


def test_density_depends_on_normalized_target_only():
    z0, z1 = Point(1.5, 2.0), Point(-0.5, 3.0)
    t = NormalizedTarget.from_points(z0, z1)
    grid = np.linspace(-1.5, 1.5, 61)
    assert np.allclose(theory.density_rho(TheoryContext(1, z0, z1), grid), theory.density_normalized(t, grid))


def test_derivative_identity():
    h = 1e-5
    grid = np.concatenate([np.linspace(-math.pi / 2 + 1e-3, -1e-3, 100), np.linspace(1e-3, math.pi / 2 - 1e-3, 100)])
    worst = 0.0
    for t in random_targets(4, 200):
        fd = (xi(t, grid + h) - xi(t, grid - h)) / (2 * h)
        worst = max(worst, float(np.abs(fd - theory.density_normalized(t, grid) / math.pi).max()))
    assert worst <= 1e-5


def test_interval_union_normalizes():
    u = theory.IntervalUnion(((3.0, 4.0), (0.0, 2.0), (1.0, 2.5), (5.0, 5.0)))
    assert u.intervals == ((0.0, 2.5), (3.0, 4.0))
    assert 2.2 in u and 2.5 not in u and 2.7 not in u
    assert list(u.contains([0.0, 1.0, 3.5])) == [False, True, True]
    assert u.shift(1.0).intervals == ((1.0, 3.5), (4.0, 5.0))


def test_build_S_lambda_zero():
    assert build_S(2.0, 0.0).intervals == ((-2.0, 0.0), (2.0, math.inf))


def test_build_S_lambda_one():
    r2 = math.sqrt(2)
    got = build_S(1.0, 1.0).intervals
    expected = ((-math.inf, -(1 + r2)), (-1.0, r2 - 1), (1.0, math.inf))
    for (lo, hi), (elo, ehi) in zip(got, expected):
        assert lo == pytest.approx(elo) and hi == pytest.approx(ehi)
    assert 0.2 in build_S(1.0, 1.0)
    assert 2 * 0.2 / (1 - 0.04) < 1


def test_s_roots_reciprocity():
    for lam in np.linspace(-50, 50, 401):
        if lam == 0:
            continue
        a1, a2 = theory.s_roots(lam)
        if lam > 0:
            assert a2 == pytest.approx(1 / a1, abs=1e-12)
        else:
            assert a2 == pytest.approx(-1 / a1, abs=1e-12)


def test_build_S_rejects_bad_height():
    with pytest.raises(ValueError):
        build_S(0.0, 1.0)


def test_main_term_examples():
    assert theory.ball_main_term(2, 10.0) == pytest.approx(math.exp(10), rel=1e-14)
    assert theory.ball_main_term_q(1, 2.0) == pytest.approx(12.0)
    assert theory.sector_main_term(1, -math.inf, 1000.0) == 0.0
    assert theory.sector_main_term(1, math.inf, 7.0) == pytest.approx(6 * 49.0, rel=1e-14)
    assert theory.sector_main_term(1, 0.0, 1000.0) == pytest.approx(3e6, rel=1e-14)


def test_angle_count_main_term():
    ctx = TheoryContext(3, Point(0.2, 1.1), Point(1.0, 0.4))
    assert theory.angle_count_main_term(ctx, math.pi / 2, 9.0) == pytest.approx(theory.ball_main_term(3, 9.0), rel=1e-12)
    assert theory.angle_count_main_term(ctx, -math.pi / 2, 9.0) == 0.0
    uniform = TheoryContext(1, I, I)
    assert theory.angle_count_main_term(uniform, 0.0, 10.0) == pytest.approx(3 * math.exp(10), rel=1e-12)


def test_rational_identity():
    assert all(theory.main_term_identity(N) for N in range(1, 101))
