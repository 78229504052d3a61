import itertools
import math
from collections import Counter

import numpy as np
import pytest

from lattice_angles.geometry import Point, angle_oracle, conjugate_entries
from lattice_angles.group import (
    BallSpec,
    GroupElement,
    SectorSpec,
    collect_angles,
    count_ball,
    count_sector,
    enumerate_ball,
    iter_ball,
)
from lattice_angles.oracles import brute_force_ball, brute_force_sector

I = Point(0.0, 1.0)


def plain_loop(N, q2, span=4):
    """Textbook quadruple loop at z0 = i, small norms only."""
    r = range(-span, span + 1)
    return {
        g
        for g in itertools.product(r, r, r, r)
        if g[0] * g[3] - g[1] * g[2] == 1
        and sum(v * v for v in g) <= q2
        and GroupElement(*g).in_level(N)
    }


def as_set(rows):
    return set(map(tuple, rows.tolist()))


def test_group_element_rejects_bad_determinant():
    with pytest.raises(ValueError):
        GroupElement(1, 1, 1, 1)


def test_group_element_algebra():
    g = GroupElement(2, 1, 1, 1)
    assert g @ g.inverse() == GroupElement(1, 0, 0, 1)
    assert (-g).as_tuple() == (-2, -1, -1, -1)
    assert GroupElement(1, 3, 6, 19).in_level(3)
    assert not GroupElement(1, 1, 0, 1).in_level(2)


def test_ball_spec_validation():
    with pytest.raises(ValueError):
        BallSpec(0, I, 10)
    with pytest.raises(ValueError):
        BallSpec(1, I, 1.5)
    assert BallSpec.from_radius(1, I, 0.0).norm_bound_sq == pytest.approx(2.0)
    assert BallSpec.from_radius(1, I, 3.0).radius == pytest.approx(3.0)


def test_unit_ball_level_one():
    got = as_set(enumerate_ball(BallSpec(1, I, 2)))
    assert got == {(1, 0, 0, 1), (-1, 0, 0, -1), (0, 1, -1, 0), (0, -1, 1, 0)}


def test_unit_ball_level_two():
    assert as_set(enumerate_ball(BallSpec(2, I, 2))) == {(1, 0, 0, 1), (-1, 0, 0, -1)}


@pytest.mark.parametrize(
    "N, q2, expected",
    [(1, 2, 4), (2, 2, 2), (3, 2, 1), (1, 4, 20), (1, 10, 52)],
)
def test_small_counts(N, q2, expected):
    assert plain_loop(N, q2) and len(plain_loop(N, q2)) == expected
    assert count_ball(BallSpec(N, I, q2)) == expected
    assert as_set(enumerate_ball(BallSpec(N, I, q2))) == plain_loop(N, q2)


@pytest.mark.parametrize("N", [1, 2, 3])
@pytest.mark.parametrize("z0", [I, Point(1.0, 2.0), Point(0.5, 0.7)])
@pytest.mark.parametrize("q2", [2.0, 7.5, 64.0, 300.0])
def test_enumeration_matches_brute_force(N, z0, q2):
    spec = BallSpec(N, z0, q2)
    rows = enumerate_ball(spec)
    assert len(rows) == len(as_set(rows))  # no duplicates
    assert as_set(rows) == brute_force_ball(spec)
    assert count_ball(spec) == len(rows)


def test_all_rows_are_level_elements_in_ball():
    spec = BallSpec(4, Point(-0.3, 0.9), 900.0)
    for g, e in iter_ball(spec):
        assert g.in_level(4)
        assert e.norm_sq <= spec.norm_bound_sq
        assert e == conjugate_entries(g, spec.z0)


def test_norms_invariant_under_inversion():
    for N, z0 in [(1, Point(0.2, 1.1)), (3, Point(1.0, 2.0)), (5, I)]:
        spec = BallSpec(N, z0, 5000.0)
        rows = enumerate_ball(spec)
        inverses = rows[:, [3, 1, 2, 0]] * np.array([1, -1, -1, 1])
        assert as_set(inverses) == as_set(rows)
        norms = Counter(round(conjugate_entries(GroupElement(*map(int, r)), z0).norm_sq, 6) for r in rows)
        inv_norms = Counter(
            round(conjugate_entries(GroupElement(*map(int, r)), z0).norm_sq, 6) for r in inverses
        )
        assert norms == inv_norms


def test_sign_symmetry_for_small_levels():
    for N in (1, 2):
        rows = enumerate_ball(BallSpec(N, Point(0.7, 1.3), 2000.0))
        assert as_set(-rows) == as_set(rows)


def test_monotone_in_radius_and_level():
    z0 = Point(0.25, 1.5)
    counts = [count_ball(BallSpec(2, z0, q2)) for q2 in (2, 50, 400, 3000, 20000)]
    assert counts == sorted(counts)
    by_level = {N: count_ball(BallSpec(N, z0, 20000.0)) for N in (1, 2, 3, 4, 6, 12)}
    for N, M in [(1, 2), (2, 4), (2, 6), (3, 6), (4, 12), (6, 12)]:
        assert by_level[M] <= by_level[N]


def test_workers_do_not_change_output():
    spec = BallSpec(1, Point(0.3, 1.2), 2.0e4)
    single = enumerate_ball(spec)
    assert np.array_equal(enumerate_ball(spec), single)
    assert np.array_equal(enumerate_ball(spec, workers=4), single)
    assert count_ball(spec, workers=3) == len(single)


def test_overflow_guard():
    with pytest.raises(OverflowError):
        count_ball(BallSpec(1, I, 2.0**64))


def test_sector_minus_infinity_is_empty():
    assert count_sector(SectorSpec(BallSpec(1, I, 1e4), -math.inf)) == 0


def test_sector_unit_bound():
    # the modified norm admits elements outside the norm-2 ball, e.g. (0, -1; 1, 1)
    r = range(-3, 4)
    expected = {
        g
        for g in itertools.product(r, r, r, r)
        if g[0] * g[3] - g[1] * g[2] == 1 and g[2] != 0 and (g[2] ** 2 + g[0] ** 2) * (g[2] ** 2 + g[3] ** 2) <= 2 * g[2] ** 2
    }
    assert len(expected) == 10
    assert count_sector(SectorSpec(BallSpec(1, I, 2), math.inf)) == 10


@pytest.mark.parametrize("N", [1, 2, 3])
@pytest.mark.parametrize("z0", [I, Point(1.0, 2.0), Point(-0.4, 0.8)])
@pytest.mark.parametrize("beta", [-2.0, -0.5, 0.0, 1.0, math.inf])
def test_sector_matches_brute_force(N, z0, beta):
    spec = SectorSpec(BallSpec(N, z0, 400.0), beta)
    assert count_sector(spec) == brute_force_sector(spec)


def test_sector_half_ratio():
    ball = BallSpec(1, I, 1000.0**2)
    ratio = count_sector(SectorSpec(ball, 0.0)) / count_sector(SectorSpec(ball, math.inf))
    assert ratio == pytest.approx(0.5, abs=0.02 * 0.5)


def test_sector_elements_lie_in_inflated_ball():
    spec = BallSpec(1, Point(0.3, 1.4), 600.0)
    big = BallSpec(1, spec.z0, 40 * spec.norm_bound_sq)
    inside = 0
    for g, e in iter_ball(big):
        if e.C == 0 or (e.C**2 + e.A**2) * (1 + e.D**2 / e.C**2) > spec.norm_bound_sq:
            continue
        inside += 1
        assert e.norm_sq <= spec.norm_bound_sq + 2 * abs(e.B / e.C) + 1 / e.C**2 + 1e-9
    assert inside == count_sector(SectorSpec(spec, math.inf))


def test_collect_angles_stabilizers():
    s = collect_angles(BallSpec(1, I, 2), I)
    assert len(s) == 0 and s.undefined_count == 4


def test_collect_angles_vertical():
    s = collect_angles(BallSpec(1, I, 2), Point(0, 2))
    assert len(s) == 4 and s.undefined_count == 0
    assert np.all(s.theta == 0)


def test_collect_angles_norm_ten():
    z1 = Point(0, 2)
    s = collect_angles(BallSpec(1, I, 10), z1)
    assert len(s) == 52
    by_gamma = {x.gamma.as_tuple(): x.theta for x in s}
    assert by_gamma[(1, 1, 0, 1)] == pytest.approx(math.atan(2))
    assert by_gamma[(-1, -1, 0, -1)] == pytest.approx(math.atan(2))
    for g, theta in by_gamma.items():
        assert theta == pytest.approx(angle_oracle(GroupElement(*g), I, z1), abs=1e-12)


def test_collect_angles_without_matrices():
    spec = BallSpec.from_radius(2, Point(0.1, 1.3), 8.0)
    full = collect_angles(spec, Point(1.0, 2.0))
    lean = collect_angles(spec, Point(1.0, 2.0), keep_gamma=False)
    assert np.array_equal(full.theta, lean.theta)
    assert lean.gamma is None and lean.ball_count == count_ball(spec)
    with pytest.raises(IndexError):
        lean[0]


def test_sorted_orders_by_c_a_d():
    s = collect_angles(BallSpec(1, I, 50), Point(0.5, 0.5)).sorted()
    keys = [(r[2], r[0], r[3]) for r in s.gamma.tolist()]
    assert keys == sorted(keys)
