"""Arithmetic kernel: Moebius sums, congruence pair counts, Kloosterman sums."""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import integrate
from sympy import divisor_count, divisors, factorint, primerange

from .theory import c_N


def moebius(n: int) -> int:
    if n < 1:
        raise ValueError(f"moebius is defined for n >= 1, got {n}")
    exps = factorint(n).values()
    if any(e > 1 for e in exps):
        return 0
    return -1 if len(exps) % 2 else 1


def phi_N(c: int, N: int) -> Fraction:
    """Sum of ``mu(n)/n`` over divisors ``n`` of ``c`` coprime to ``N``."""
    if c == 0:
        raise ValueError("c must be nonzero")
    return sum(
        (Fraction(moebius(n), n) for n in divisors(abs(c)) if math.gcd(n, N) == 1),
        Fraction(0),
    )


def phi_N_table(c_max: int, N: int) -> np.ndarray:
    """``Phi_N(c)`` for ``c = 0..c_max`` as floats (entry 0 is unused).

    Sieved from the product form ``prod_{p | c, p !| N} (1 - 1/p)``.
    """
    out = np.ones(c_max + 1)
    for p in primerange(2, c_max + 1):
        if N % p:
            out[p::p] *= 1.0 - 1.0 / p
    out[0] = np.nan
    return out


@dataclass(frozen=True)
class CongruenceBox:
    """Pairs ``(a, d)`` in ``I1 x I2`` (inclusive integer intervals)."""

    c: int
    N: int
    I1: tuple[int, int]
    I2: tuple[int, int]

    def __post_init__(self):
        if self.c == 0:
            raise ValueError("c must be nonzero")
        if self.N < 1:
            raise ValueError("N must be positive")

    @property
    def modulus(self) -> int:
        return self.N * abs(self.c)


def _length(interval: tuple[int, int]) -> int:
    return max(0, interval[1] - interval[0] + 1)


def _count_progression(lo: int, hi: int, residue: int, m: int) -> int:
    if hi < lo:
        return 0
    first = lo + (residue - lo) % m
    return 0 if first > hi else (hi - first) // m + 1


def count_congruence_box(box: CongruenceBox) -> int:
    """Exact number of ``a = d = 1 (mod N)`` with ``ad = 1 (mod N|c|)``.

    Only ``|c|`` matters.
    """
    N, M = box.N, box.modulus
    lo, hi = box.I1
    total = 0
    for a in range(lo + (1 - lo) % N, hi + 1, N):
        if math.gcd(a, M) != 1:
            continue
        # a = 1 (mod N) forces the inverse to be 1 (mod N) as well
        total += _count_progression(*box.I2, pow(a, -1, M), M)
    return total


def prop1_main_term(box: CongruenceBox, euclidean: bool = False) -> float:
    """Predicted ``Phi_N(c) |I1| |I2| / (|c| N^2)``.

    ``|I|`` counts the integers of ``I`` unless ``euclidean`` is set, in
    which case it is ``hi - lo``.
    """
    if euclidean:
        l1, l2 = box.I1[1] - box.I1[0], box.I2[1] - box.I2[0]
    else:
        l1, l2 = _length(box.I1), _length(box.I2)
    return float(phi_N(box.c, box.N) * l1 * l2 / (abs(box.c) * box.N**2))


def kloosterman_incomplete(m: int, n: int, q: int, interval: tuple[int, int]) -> complex:
    """``sum e((m a + n a^-1)/q)`` over units ``a`` of ``Z/q`` in ``interval``."""
    if q < 1:
        raise ValueError("q must be positive")
    lo, hi = interval
    if lo < 0 or hi > q - 1:
        raise ValueError(f"interval {interval} is not inside [0, {q - 1}]")
    total = 0j
    for a in range(lo, hi + 1):
        if math.gcd(a, q) != 1:
            continue
        phase = (m * a + n * pow(a, -1, q)) % q
        total += complex(math.cos(2 * math.pi * phase / q), math.sin(2 * math.pi * phase / q))
    return total


def kloosterman(m: int, n: int, q: int) -> complex:
    s = kloosterman_incomplete(m, n, q, (0, q - 1))
    if abs(s.imag) > 1e-9 * q:
        raise ArithmeticError(f"complete Kloosterman sum S({m},{n};{q}) has imaginary part {s.imag}")
    return s


def kloosterman_grid(ms: np.ndarray, ns: np.ndarray, q: int) -> np.ndarray:
    """``S(m, n; q)`` for all ``m`` in ``ms`` and ``n`` in ``ns`` at once."""
    units = np.array([a for a in range(q) if math.gcd(a, q) == 1], dtype=np.int64)
    inverses = np.array([pow(int(a), -1, q) if q > 1 else 0 for a in units], dtype=np.int64)
    ms = np.asarray(ms, dtype=np.int64)
    ns = np.asarray(ns, dtype=np.int64)
    left = np.exp(2j * np.pi * ((ms[:, None] * units[None, :]) % q) / q)
    right = np.exp(2j * np.pi * ((ns[:, None] * inverses[None, :]) % q) / q)
    return left @ right.T


class WeilBoundViolation(ArithmeticError):
    pass


@dataclass
class WeilReport:
    q_max: int
    checked: int = 0
    max_ratio: float = 0.0
    worst: tuple[int, int, int] | None = None
    max_imag: float = 0.0
    violations: list[tuple[int, int, int, float]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def weil_bound(m: int, n: int, q: int) -> float:
    return int(divisor_count(q)) * math.sqrt(math.gcd(math.gcd(m, n), q)) * math.sqrt(q)


def weil_certificate(
    q_max: int,
    m_range: Iterable[int],
    n_range: Iterable[int],
    strict: bool = True,
    rtol: float = 1e-12,
) -> WeilReport:
    """Check ``|S(m,n;q)| <= tau(q) gcd(m,n,q)^(1/2) q^(1/2)`` over a grid.

    ``rtol`` only absorbs floating roundoff (``q = 1`` attains the bound).
    A violation raises :class:`WeilBoundViolation` when ``strict``.
    """
    ms = np.array(list(m_range), dtype=np.int64)
    ns = np.array(list(n_range), dtype=np.int64)
    report = WeilReport(q_max)
    for q in range(1, q_max + 1):
        S = kloosterman_grid(ms, ns, q)
        g = np.gcd(np.gcd(ms[:, None], ns[None, :]), q)
        bound = int(divisor_count(q)) * np.sqrt(g) * math.sqrt(q)
        ratio = np.abs(S) / bound
        report.checked += ratio.size
        report.max_imag = max(report.max_imag, float(np.abs(S.imag).max() / q))
        i, j = np.unravel_index(np.argmax(ratio), ratio.shape)
        if ratio[i, j] > report.max_ratio:
            report.max_ratio = float(ratio[i, j])
            report.worst = (int(ms[i]), int(ns[j]), q)
        for i, j in zip(*np.nonzero(ratio > 1 + rtol)):
            report.violations.append((int(ms[i]), int(ns[j]), q, float(ratio[i, j])))
    if strict and report.violations:
        raise WeilBoundViolation(f"{len(report.violations)} violations, first {report.violations[0]}")
    return report


@dataclass(frozen=True)
class WeightedSum:
    total: float
    main_term: float

    @property
    def rel_diff(self) -> float:
        return abs(self.total / self.main_term - 1.0)


def moebius_weighted_sum(
    N: int,
    interval: tuple[float, float],
    f: Callable,
    restrict_to_multiples: bool = False,
) -> WeightedSum:
    """Compare ``sum_c Phi_N(c) f(c)`` with ``C_N int f``.

    The sum runs over nonzero integers of the closed interval. With
    ``restrict_to_multiples`` only ``N | c`` enter and the prediction is
    ``(C_N / N) int f``. ``f`` must accept numpy arrays.
    """
    lo, hi = interval
    cs = np.arange(math.ceil(lo), math.floor(hi) + 1)
    cs = cs[cs != 0]
    if restrict_to_multiples:
        cs = cs[cs % N == 0]
    table = phi_N_table(int(np.abs(cs).max()) if len(cs) else 1, N)
    total = float(np.sum(table[np.abs(cs)] * f(cs.astype(np.float64))))
    integral, _ = integrate.quad(f, lo, hi, epsrel=1e-10, epsabs=0.0, limit=500)
    const = c_N(N)[1] / (N if restrict_to_multiples else 1)
    return WeightedSum(total, const * integral)
