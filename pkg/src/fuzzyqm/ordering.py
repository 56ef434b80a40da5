"""Normal-ordering calculus for functions of the radial number operator.

Normal powers :rho^k: of rho = lam*N act diagonally on the level-n block with
eigenvalue lam^k n!/(n-k)!.  Signed Stirling numbers of the first kind convert
between normal and ordinary powers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .fock import FockIndex, integer_ladder_action


@lru_cache(maxsize=None)
def _stirling_row(n: int) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    prev = _stirling_row(n - 1)
    m = n - 1
    row = [0] * (n + 1)
    for k in range(n + 1):
        left = prev[k - 1] if 1 <= k <= m + 1 else 0
        here = prev[k] if k <= m else 0
        row[k] = left - m * here
    return tuple(row)


def stirling_first(n: int, k: int) -> int:
    """Signed Stirling number s(n, k); zero for k > n."""
    if n < 0 or k < 0:
        raise ValueError("n and k must be non-negative")
    if k > n:
        return 0
    # build iteratively so deep rows do not hit the recursion limit
    for m in range(0, n + 1, 256):
        _stirling_row(m)
    return _stirling_row(n)[k]


@dataclass(frozen=True)
class StirlingTable:
    max_n: int
    s: tuple[tuple[int, ...], ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        stirling_first(self.max_n, 0)
        object.__setattr__(self, "s", tuple(_stirling_row(n) for n in range(self.max_n + 1)))

    def __call__(self, n: int, k: int) -> int:
        if k > n:
            return 0
        return self.s[n][k]


def falling_factorial(x: int, n: int) -> int:
    out = 1
    for i in range(n):
        out *= x - i
    return out


def normal_power_eigenvalue(k: int, n: int, lam: float) -> float:
    """Eigenvalue of :(lam N)^k: on the level-n block; negative k allowed."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if k >= 0:
        if k > n:
            return 0.0
        return lam**k * math.perm(n, k)
    return lam**k * float(normal_power_ratio(k, n))


def normal_power_ratio(k: int, n: int) -> Fraction | int:
    """Exact eigenvalue of :N^k: on F_n: n!/(n-k)! for k >= 0, n!/(n+|k|)! for k < 0."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if k >= 0:
        return math.perm(n, k) if k <= n else 0
    return Fraction(1, math.perm(n - k, -k))


@dataclass(frozen=True)
class NormalPolySeries:
    """R(rho) = sum_k c_k :rho^k:."""

    coeffs: tuple[complex, ...]
    lam: float

    def eigenvalue(self, n: int) -> complex:
        return sum(c * normal_power_eigenvalue(k, n, self.lam) for k, c in enumerate(self.coeffs))


def normal_to_ordinary(series: NormalPolySeries) -> np.ndarray:
    """Ordinary-power coefficients d_k with sum_k d_k rho^k = sum_k c_k :rho^k:.

    Uses :rho^m: = sum_k lam^(m-k) s(m, k) rho^k.
    """
    deg = len(series.coeffs)
    out = np.zeros(deg, dtype=complex)
    for m, c in enumerate(series.coeffs):
        if c == 0:
            continue
        for k in range(m + 1):
            s = stirling_first(m, k)
            if s:
                out[k] += c * series.lam ** (m - k) * s
    return out


def evaluate_ordinary(coeffs: Sequence[complex], rho: complex) -> complex:
    acc = 0j
    for c in reversed(list(coeffs)):
        acc = acc * rho + c
    return acc


def normal_exponential(beta: complex, n: int, lam: float) -> complex:
    """Eigenvalue of :exp(beta rho): on F_n, i.e. (1 + lam beta)^n."""
    return (1 + lam * beta) ** n


def normal_exponential_series(beta: complex, n: int, lam: float) -> complex:
    """Finite sum sum_k beta^k/k! * lam^k n!/(n-k)!."""
    return sum(beta**k / math.factorial(k) * normal_power_eigenvalue(k, n, lam) for k in range(n + 1))


def _exact_complex(z: complex) -> tuple[Fraction, Fraction]:
    return Fraction(z.real), Fraction(z.imag)


def _cmul(x: tuple[Fraction, Fraction], y: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    return x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0]


def normal_exponential_series_exact(beta: complex, n: int, lam: float) -> complex:
    """The finite sum of normal_exponential_series in exact rational arithmetic, rounded once."""
    b = _exact_complex(complex(beta) * 1)
    lb = _cmul(b, (Fraction(lam), Fraction(0)))
    total = (Fraction(0), Fraction(0))
    power = (Fraction(1), Fraction(0))
    for k in range(n + 1):
        c = Fraction(math.comb(n, k))
        total = (total[0] + c * power[0], total[1] + c * power[1])
        power = _cmul(power, lb)
    return complex(float(total[0]), float(total[1]))


def normal_power_times_exponential(m: int, beta: complex, n: int, lam: float) -> complex:
    """Eigenvalue of :rho^m exp(beta rho): on F_n for any integer m."""
    base = 1 + beta * lam
    if m >= 0:
        if m > n:
            return 0.0
        return lam**m * math.perm(n, m) * base ** (n - m)
    k = -m
    return lam**m / math.perm(n + k, k) * base ** (n + k)


def normal_power_times_exponential_series(m: int, beta: complex, n: int, lam: float) -> complex:
    """Brute-force sum_k beta^k/k! :rho^(m+k): eigenvalues."""
    if m >= 0:
        return sum(
            beta**k / math.factorial(k) * normal_power_eigenvalue(m + k, n, lam)
            for k in range(max(0, n - m) + 1)
        )
    # negative powers never truncate; the tail is summed until it is negligible
    total = 0j
    k = 0
    small = 0
    while small < 30 and k < 10_000:
        term = beta**k / math.factorial(k) * normal_power_eigenvalue(m + k, n, lam)
        total += term
        small = small + 1 if abs(term) <= 1e-18 * max(abs(total), 1e-300) else 0
        k += 1
    return total


def ladder_normal_power_diagonal(n1: int, n2: int, k: int) -> int:
    """Exact diagonal element of :N^k: = sum over a^+_{a1}..a^+_{ak} a_{ak}..a_{a1}.

    Evaluated by applying integer ladder actions to the unnormalized basis
    vector and memoizing the nested sandwich S_k = sum_alpha a^+_alpha S_{k-1} a_alpha.
    """

    @lru_cache(maxsize=None)
    def sandwich(depth: int, state: FockIndex) -> tuple[tuple[FockIndex, int], ...]:
        if depth == 0:
            return ((state, 1),)
        acc: dict[FockIndex, int] = {}
        for mode in ("1", "2"):
            amp, lowered = integer_ladder_action(state, "a" + mode)
            if lowered is None or amp == 0:
                continue
            for inner_state, inner_amp in sandwich(depth - 1, lowered):
                up_amp, raised = integer_ladder_action(inner_state, "a" + mode + "_dag")
                acc[raised] = acc.get(raised, 0) + amp * inner_amp * up_amp
        return tuple(acc.items())

    start = FockIndex(n1, n2)
    return dict(sandwich(k, start)).get(start, 0)
