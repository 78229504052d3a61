"""Exact enumeration of principal congruence group elements.

Elements of ``Gamma(N)`` are stored as integer quadruples ``(a, b, c, d)``.
A ball is the set of ``gamma`` with ``A^2 + B^2 + C^2 + D^2 <= Q^2`` for
the conjugated entries, i.e. ``gamma z0`` within hyperbolic distance ``R``
of ``z0`` when ``Q^2 = 2 cosh R``.

The search runs over ``c`` in multiples of ``N``; for fixed ``(c, a)`` the
admissible ``d`` form one residue class modulo ``N|c|`` and ``b`` follows
from the determinant. The loops are numba kernels which release the GIL,
so sharding the ``c`` range across threads gives real parallelism.
"""

from __future__ import annotations

import math
from collections.abc import Iterator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numba
import numpy as np

from .geometry import (
    ConjugatedEntries,
    NormalizedTarget,
    Point,
    conjugate_arrays,
    conjugate_entries,
    angles_from_entries,
    distances_from_entries,
)

ENTRY_LIMIT = 2**31


@dataclass(frozen=True)
class GroupElement:
    """Integer matrix ``(a, b; c, d)`` with determinant one."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant of {self.as_tuple()} is not 1")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def in_level(self, N: int) -> bool:
        return (self.a - 1) % N == 0 and (self.d - 1) % N == 0 and self.b % N == 0 and self.c % N == 0

    def inverse(self) -> GroupElement:
        return GroupElement(self.d, -self.b, -self.c, self.a)

    def __neg__(self) -> GroupElement:
        return GroupElement(-self.a, -self.b, -self.c, -self.d)

    def __matmul__(self, other: GroupElement) -> GroupElement:
        return GroupElement(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )


IDENTITY = GroupElement(1, 0, 0, 1)


@dataclass(frozen=True)
class BallSpec:
    """Ball of ``Gamma(level)`` elements around ``z0`` with ``Q^2 = norm_bound_sq``."""

    level: int
    z0: Point
    norm_bound_sq: float

    def __post_init__(self):
        if self.level < 1:
            raise ValueError(f"level must be >= 1, got {self.level}")
        if not self.norm_bound_sq >= 2.0:
            raise ValueError(f"norm bound Q^2 must be >= 2, got {self.norm_bound_sq}")

    @classmethod
    def from_radius(cls, level: int, z0: Point, radius: float) -> BallSpec:
        return cls(level, z0, 2.0 * math.cosh(radius))

    @property
    def radius(self) -> float:
        return math.acosh(self.norm_bound_sq / 2.0)

    @property
    def exact(self) -> bool:
        """Membership is decided in integers when ``z0 = i``."""
        return self.z0.x == 0.0 and self.z0.y == 1.0

    def entry_bound(self) -> float:
        Q = math.sqrt(self.norm_bound_sq)
        x0, y0 = abs(self.z0.x), self.z0.y
        cmax = Q / y0
        admax = cmax * x0 + Q
        bmax = Q * y0 + Q * x0 + admax * x0
        return max(cmax, admax, bmax) + self.level + 2


@dataclass(frozen=True)
class SectorSpec:
    ball: BallSpec
    beta: float


@dataclass(frozen=True)
class AngleSample:
    gamma: GroupElement
    theta: float
    dist: float


@dataclass
class AngleSamples:
    """Angle observations for one ball, stored column-wise.

    ``gamma`` is ``None`` when the matrices were not kept.
    """

    theta: np.ndarray
    dist: np.ndarray
    gamma: np.ndarray | None
    undefined_count: int

    def __len__(self) -> int:
        return len(self.theta)

    def __getitem__(self, i: int) -> AngleSample:
        if self.gamma is None:
            raise IndexError("matrices were not kept for these samples")
        return AngleSample(GroupElement(*(int(v) for v in self.gamma[i])), float(self.theta[i]), float(self.dist[i]))

    def __iter__(self) -> Iterator[AngleSample]:
        return (self[i] for i in range(len(self)))

    @property
    def ball_count(self) -> int:
        return len(self) + self.undefined_count

    def sorted(self) -> AngleSamples:
        """Rows ordered by ``(c, a, d)``."""
        if self.gamma is None:
            raise ValueError("cannot order by matrix entries without matrices")
        order = np.lexsort((self.gamma[:, 3], self.gamma[:, 0], self.gamma[:, 2]))
        return AngleSamples(self.theta[order], self.dist[order], self.gamma[order], self.undefined_count)


def _check_range(spec: BallSpec) -> None:
    bound = spec.entry_bound()
    if bound >= ENTRY_LIMIT:
        raise OverflowError(f"entries may reach {bound:.3g}, beyond the 2^31 safety limit")


def _k_max(spec: BallSpec) -> int:
    return int(math.sqrt(spec.norm_bound_sq) / spec.z0.y / spec.level) + 1


def _shards(spec: BallSpec, pieces: int) -> list[tuple[int, int]]:
    K = _k_max(spec)
    edges = np.linspace(-K, K + 1, max(1, pieces) + 1).round().astype(np.int64)
    return [(int(lo), int(hi) - 1) for lo, hi in zip(edges[:-1], edges[1:]) if hi > lo]


def _kernel_args(spec: BallSpec):
    q2 = float(spec.norm_bound_sq)
    return spec.level, float(spec.z0.x), float(spec.z0.y), q2, int(math.floor(q2)), spec.exact


def _ball_block(spec: BallSpec, k_lo: int, k_hi: int) -> np.ndarray:
    args = _kernel_args(spec)
    empty = np.empty((0, 4), dtype=np.int64)
    n = _ball_scan(k_lo, k_hi, *args, empty, False)
    out = np.empty((n, 4), dtype=np.int64)
    _ball_scan(k_lo, k_hi, *args, out, True)
    return out


def _map_shards(fn, shards, workers: int):
    if workers <= 1 or len(shards) <= 1:
        return [fn(s) for s in shards]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, shards))


def enumerate_ball(spec: BallSpec, workers: int = 1) -> np.ndarray:
    """All ball elements as an ``(n, 4)`` int64 array of ``(a, b, c, d)`` rows.

    Shards are concatenated in ``c`` order, so the result does not depend
    on ``workers``.
    """
    _check_range(spec)
    blocks = _map_shards(lambda s: _ball_block(spec, *s), _shards(spec, workers), workers)
    return np.concatenate(blocks) if blocks else np.empty((0, 4), dtype=np.int64)


def iter_ball(spec: BallSpec) -> Iterator[tuple[GroupElement, ConjugatedEntries]]:
    for row in enumerate_ball(spec):
        g = GroupElement(*(int(v) for v in row))
        yield g, conjugate_entries(g, spec.z0)


def count_ball(spec: BallSpec, workers: int = 1) -> int:
    _check_range(spec)
    args = _kernel_args(spec)
    empty = np.empty((0, 4), dtype=np.int64)
    counts = _map_shards(lambda s: _ball_scan(s[0], s[1], *args, empty, False), _shards(spec, workers), workers)
    return int(sum(counts))


def count_sector(spec: SectorSpec, workers: int = 1) -> int:
    """Number of ``gamma`` with ``C != 0``, ``A/C <= beta`` and ``(C^2+A^2)(1+D^2/C^2) <= Q^2``."""
    ball = spec.ball
    beta = float(spec.beta)
    if beta == -math.inf:
        return 0
    _check_range(ball)
    N, x0, y0, q2, _, exact = _kernel_args(ball)
    exact = exact and q2 == math.floor(q2)
    bounded = beta != math.inf
    b = beta if bounded else 0.0
    counts = _map_shards(
        lambda s: _sector_scan(s[0], s[1], N, x0, y0, q2, int(q2), exact, b, bounded),
        _shards(ball, workers),
        workers,
    )
    return int(sum(counts))


def collect_angles(spec: BallSpec, z1: Point, workers: int = 1, keep_gamma: bool = True) -> AngleSamples:
    """Angle of every ball element; elements with ``gamma z0 == z1`` are only counted.

    With ``keep_gamma=False`` the ball is processed in blocks and the
    matrices are dropped, which keeps memory flat at large radii.
    """
    _check_range(spec)
    target = NormalizedTarget.from_points(spec.z0, z1)
    pieces = max(workers, 1) if keep_gamma else max(workers, 32)

    def work(shard):
        rows = _ball_block(spec, *shard)
        A, B, C, D = conjugate_arrays(rows, spec.z0)
        theta = angles_from_entries(A, B, C, D, target.x_star, target.y_star)
        dist = distances_from_entries(A, B, C, D)
        ok = ~np.isnan(theta)
        return theta[ok], dist[ok], (rows[ok] if keep_gamma else None), int((~ok).sum())

    parts = _map_shards(work, _shards(spec, pieces), workers)
    theta = np.concatenate([p[0] for p in parts])
    dist = np.concatenate([p[1] for p in parts])
    gamma = np.concatenate([p[2] for p in parts]) if keep_gamma else None
    return AngleSamples(theta, dist, gamma, sum(p[3] for p in parts))


@numba.njit(cache=True, nogil=True)
def _modinv(a, m):
    """Inverse of ``a`` modulo ``m`` in ``[0, m)``, or -1 when not a unit."""
    if m == 1:
        return 0
    r0, r1 = a % m, m
    s0, s1 = 1, 0
    while r1 != 0:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if r0 != 1:
        return -1
    return s0 % m


@numba.njit(cache=True, nogil=True)
def _in_ball(a, b, c, d, x0, y0, q2, q2_int, exact):
    if exact:
        return a * a + b * b + c * c + d * d <= q2_int
    A = a - c * x0
    B = (A * x0 + b - d * x0) / y0
    C = c * y0
    D = c * x0 + d
    return A * A + B * B + C * C + D * D <= q2


@numba.njit(cache=True, nogil=True)
def _ball_scan(k_lo, k_hi, N, x0, y0, q2, q2_int, exact, out, fill):
    n = 0
    for k in range(k_lo, k_hi + 1):
        c = k * N
        if c == 0:
            # only +-identity times unipotents; -1 = 1 mod N needs N <= 2
            jmax = int(y0 * math.sqrt(max(q2 - 2.0, 0.0)) / N) + 1
            for s in (1, -1):
                if (s - 1) % N != 0:
                    continue
                for j in range(-jmax, jmax + 1):
                    b = j * N
                    if _in_ball(s, b, 0, s, x0, y0, q2, q2_int, exact):
                        if fill:
                            out[n, 0] = s
                            out[n, 1] = b
                            out[n, 2] = 0
                            out[n, 3] = s
                        n += 1
            continue
        C = c * y0
        rem = q2 - C * C
        if rem < 0.0:
            continue
        r = math.sqrt(rem)
        M = N * abs(c)
        a_lo = int(math.floor(c * x0 - r)) - 1
        a_hi = int(math.ceil(c * x0 + r)) + 1
        a = a_lo + (1 - a_lo) % N
        while a <= a_hi:
            A = a - c * x0
            s2 = A * A + C * C
            # A^2 + C^2 + D^2 + (AD - 1)^2 / C^2 <= Q^2 as a quadratic in D
            disc = s2 * (q2 - s2) - 1.0
            if disc >= -1e-9 * (1.0 + s2 * q2):
                inv = _modinv(a, M)
                if inv >= 0:
                    root = abs(C) * math.sqrt(max(disc, 0.0))
                    d_lo = int(math.floor((A - root) / s2 - c * x0)) - 1
                    d_hi = int(math.ceil((A + root) / s2 - c * x0)) + 1
                    d = d_lo + (inv - d_lo) % M
                    while d <= d_hi:
                        num = a * d - 1
                        if num % c != 0:
                            raise AssertionError("ad - 1 not divisible by c")
                        b = num // c
                        if b % N != 0:
                            raise AssertionError("b not divisible by N")
                        if _in_ball(a, b, c, d, x0, y0, q2, q2_int, exact):
                            if fill:
                                out[n, 0] = a
                                out[n, 1] = b
                                out[n, 2] = c
                                out[n, 3] = d
                            n += 1
                        d += M
            a += N
    return n


@numba.njit(cache=True, nogil=True)
def _sector_scan(k_lo, k_hi, N, x0, y0, q2, q2_int, exact, beta, bounded):
    n = 0
    for k in range(k_lo, k_hi + 1):
        c = k * N
        if c == 0:
            continue
        C = c * y0
        rem = q2 - C * C
        if rem < 0.0:
            continue
        r = math.sqrt(rem)
        M = N * abs(c)
        a_lo = int(math.floor(c * x0 - r)) - 1
        a_hi = int(math.ceil(c * x0 + r)) + 1
        a = a_lo + (1 - a_lo) % N
        while a <= a_hi:
            A = a - c * x0
            if bounded and ((C > 0 and A > beta * C) or (C < 0 and A < beta * C)):
                a += N
                continue
            s2 = A * A + C * C
            t = q2 / s2 - 1.0
            if t >= -1e-9:
                inv = _modinv(a, M)
                if inv >= 0:
                    dmax = abs(C) * math.sqrt(max(t, 0.0))
                    d_lo = int(math.floor(-dmax - c * x0)) - 1
                    d_hi = int(math.ceil(dmax - c * x0)) + 1
                    d = d_lo + (inv - d_lo) % M
                    while d <= d_hi:
                        if exact:
                            ok = (c * c + a * a) * (c * c + d * d) <= q2_int * c * c
                        else:
                            D = c * x0 + d
                            ok = s2 * (1.0 + D * D / (C * C)) <= q2
                        if ok:
                            n += 1
                        d += M
            a += N
    return n


def random_element(rng: np.random.Generator, bound: int) -> GroupElement:
    """A random element of ``SL(2, Z)`` with entries of size about ``bound``."""
    while True:
        a, c = (int(v) for v in rng.integers(-bound, bound + 1, size=2))
        if math.gcd(a, c) != 1:
            continue
        if c == 0:
            return GroupElement(a, int(rng.integers(-bound, bound + 1)), 0, a)
        # a x + c y = 1 gives d = x, b = -y; then slide along (b, d) += k (a, c)
        d = pow(a, -1, abs(c)) if abs(c) > 1 else 0
        b = (a * d - 1) // c
        k = int(rng.integers(-bound, bound + 1)) // max(abs(a), abs(c))
        return GroupElement(a, b + k * a, c, d + k * c)
