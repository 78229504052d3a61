"""Brute-force reference counts.

These loop over whole boxes of integer matrices and filter by the
definitions. They share nothing with the residue-class search in
:mod:`lattice_angles.group` and are only meant for small radii.
"""

from __future__ import annotations

import math

import numpy as np

from .group import BallSpec, SectorSpec


def _level_range(lo: float, hi: float, N: int, residue: int) -> np.ndarray:
    start = math.floor(lo)
    start += (residue - start) % N
    return np.arange(start, math.ceil(hi) + 1, N, dtype=np.int64)


def brute_force_ball(spec: BallSpec) -> set[tuple[int, int, int, int]]:
    """Every ``(a, b, c, d)`` in the ball, by a filtered box search."""
    N, x0, y0 = spec.level, spec.z0.x, spec.z0.y
    q2 = spec.norm_bound_sq
    Q = math.sqrt(q2)
    found: set[tuple[int, int, int, int]] = set()
    # |A|, |B|, |C|, |D| <= Q, inverted through the conjugation formulas
    for c in _level_range(-Q / y0 - 1, Q / y0 + 1, N, 0):
        c = int(c)
        a = _level_range(c * x0 - Q - 1, c * x0 + Q + 1, N, 1)
        d = _level_range(-c * x0 - Q - 1, -c * x0 + Q + 1, N, 1)
        bspan = y0 * Q + abs(x0) * (2 * Q + abs(c * x0)) + 1
        b = _level_range(-bspan, bspan, N, 0)
        aa, bb, dd = a[:, None, None], b[None, :, None], d[None, None, :]
        unimodular = aa * dd - bb * c == 1
        if spec.exact:
            inside = aa * aa + bb * bb + c * c + dd * dd <= math.floor(q2)
        else:
            A = aa - c * x0
            B = (A * x0 + bb - dd * x0) / y0
            C = c * y0
            D = c * x0 + dd
            inside = A * A + B * B + C * C + D * D <= q2
        ia, ib, id_ = np.nonzero(unimodular & inside)
        found.update(zip(a[ia].tolist(), b[ib].tolist(), [c] * len(ia), d[id_].tolist()))
    return found


def brute_force_sector(spec: SectorSpec) -> int:
    """Sector count by looping over ``(c, a, d)`` and testing ``c | ad - 1``."""
    ball, beta = spec.ball, spec.beta
    N, x0, y0 = ball.level, ball.z0.x, ball.z0.y
    q2 = ball.norm_bound_sq
    Q = math.sqrt(q2)
    total = 0
    for c in _level_range(-Q / y0 - 1, Q / y0 + 1, N, 0):
        c = int(c)
        if c == 0:
            continue
        a = _level_range(c * x0 - Q - 1, c * x0 + Q + 1, N, 1)[:, None]
        d = _level_range(-c * x0 - Q - 1, -c * x0 + Q + 1, N, 1)[None, :]
        A = a - c * x0
        C = c * y0
        D = c * x0 + d
        if ball.exact and q2 == math.floor(q2):
            inside = (c * c + a * a) * (c * c + d * d) <= int(q2) * c * c
        else:
            inside = (C * C + A * A) * (1 + D * D / (C * C)) <= q2
        ok = ((a * d - 1) % (N * abs(c)) == 0) & inside
        if beta != math.inf:
            ok &= A / C <= beta
        total += int(ok.sum())
    return total
