"""Series evaluation of the hypergeometric family, Bessel J and complex log-Gamma.

Series stop once 30 consecutive terms fall below 1e-17 of the running sum.
Complex powers and logarithms take the principal branch.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Literal

_TAIL_RUN = 30
_TAIL_REL = 1e-17
_MAX_TERMS = 20_000

_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


class SpecialFunctionDomainError(ValueError):
    """Raised when a series is requested outside its supported domain."""


def _nonpositive_integer(z: complex) -> int | None:
    """Return -z as an int when z is 0, -1, -2, ... (exactly), else None."""
    z = complex(z)
    if z.imag != 0.0 or z.real > 0.0 or z.real != math.floor(z.real):
        return None
    return int(-z.real)


def pochhammer(a: complex, m: int) -> complex:
    if m < 0:
        raise ValueError("m must be non-negative")
    out: complex = 1.0
    for i in range(m):
        out *= a + i
    return out


def _sum_series(term_ratio, first: complex, stop: int | None) -> complex:
    total = first
    term = first
    small = 0
    m = 0
    while True:
        if stop is not None and m >= stop:
            return total
        term = term * term_ratio(m)
        m += 1
        total += term
        if term == 0 and stop is None:
            return total
        if abs(term) <= _TAIL_REL * abs(total):
            small += 1
            if small >= _TAIL_RUN:
                return total
        else:
            small = 0
        if m > _MAX_TERMS:
            raise SpecialFunctionDomainError("series failed to converge within the term cap")


def hyp1f1(a: complex, c: complex, x: complex) -> complex:
    """Kummer function 1F1(a; c; x)."""
    na = _nonpositive_integer(a)
    nc = _nonpositive_integer(c)
    if nc is not None and (na is None or na > nc):
        raise SpecialFunctionDomainError(f"1F1 denominator parameter c={c} hits a pole")
    ratio = lambda m: (a + m) / ((c + m) * (m + 1)) * x  # noqa: E731
    return _sum_series(ratio, 1.0 + 0j, na)


def hyp2f1(a: complex, b: complex, c: complex, x: complex) -> complex:
    """Gauss function 2F1(a, b; c; x); polynomial when a or b is a non-positive integer."""
    na = _nonpositive_integer(a)
    nb = _nonpositive_integer(b)
    stops = [s for s in (na, nb) if s is not None]
    stop = min(stops) if stops else None
    nc = _nonpositive_integer(c)
    if nc is not None and (stop is None or stop > nc):
        raise SpecialFunctionDomainError(f"2F1 denominator parameter c={c} hits a pole")
    if stop is None and abs(x) >= 1.0:
        raise SpecialFunctionDomainError("non-polynomial 2F1 is only supported for |x| < 1")
    ratio = lambda m: (a + m) * (b + m) / ((c + m) * (m + 1)) * x  # noqa: E731
    return _sum_series(ratio, 1.0 + 0j, stop)


def log_gamma(z: complex) -> complex:
    """Principal branch of log Gamma(z).

    Lanczos (g=7, 9 terms) on Re z >= 0.5.  Smaller real parts are shifted
    up with the recurrence, summing principal logs, which keeps the result on
    the principal branch where the reflection formula would not.
    """
    z = complex(z)
    if _nonpositive_integer(z) is not None:
        raise SpecialFunctionDomainError(f"Gamma has a pole at {z}")
    shift = 0j
    while z.real < 0.5:
        shift += cmath.log(z)
        z += 1
    zm = z - 1
    acc = _LANCZOS_COEFFS[0]
    for i, c in enumerate(_LANCZOS_COEFFS[1:], start=1):
        acc += c / (zm + i)
    t = zm + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (zm + 0.5) * cmath.log(t) - t + cmath.log(acc) - shift


def gamma(z: complex) -> complex:
    return cmath.exp(log_gamma(z))


def rgamma(z: complex) -> complex:
    """1/Gamma(z), exactly zero at the poles."""
    if _nonpositive_integer(z) is not None:
        return 0j
    return cmath.exp(-log_gamma(z))


def bessel_j(nu: complex, x: complex) -> complex:
    """Bessel J_nu(x) from its power series (principal branch of (x/2)^nu)."""
    x = complex(x)
    half = x / 2
    if x == 0:
        if nu == 0:
            return 1.0 + 0j
        if complex(nu).real > 0:
            return 0j
        # negative integer order: J_{-k}(0) = 0 for k >= 1
        return 0j if _nonpositive_integer(nu) is not None else complex("inf")
    lead = cmath.exp(nu * cmath.log(half))
    k = _nonpositive_integer(nu + 1)
    if k is not None:
        # integer negative order: J_{-n} = (-1)^n J_n
        n = k + 1
        return (-1) ** n * bessel_j(n, x)
    first = lead * rgamma(nu + 1)
    h2 = half * half
    ratio = lambda m: -h2 / ((m + 1) * (nu + m + 1))  # noqa: E731
    return _sum_series(ratio, first, None)


def kummer_residual(a: complex, c: complex, x: complex) -> float:
    lhs = cmath.exp(-x / 2) * hyp1f1(a, c, x)
    rhs = cmath.exp(x / 2) * hyp1f1(c - a, c, -x)
    return abs(lhs - rhs)


def confluent_limit_residual(a: complex, c: complex, x: complex, b: float) -> float:
    return abs(hyp1f1(a, c, x) - hyp2f1(a, b, c, x / b))


def euler_transform_residual(a: complex, b: complex, c: complex, x: complex) -> float:
    """|2F1(a,b;c;x) - (1-x)^(c-a-b) 2F1(c-a,c-b;c;x)| inside the unit disc."""
    lhs = hyp2f1(a, b, c, x)
    rhs = (1 - x) ** (c - a - b) * hyp2f1(c - a, c - b, c, x)
    return abs(lhs - rhs)


@dataclass(frozen=True)
class GeneralSecondOrderEq:
    """(a0 x + b0) y'' + (a1 x + b1) y' + (a2 x + b2) y = 0."""

    a0: complex
    b0: complex
    a1: complex
    b1: complex
    a2: complex
    b2: complex

    @property
    def discriminant_sq(self) -> complex:
        return self.a1 * self.a1 - 4 * self.a0 * self.a2


@dataclass(frozen=True)
class ReducedSolutionForm:
    kind: Literal["confluent", "bessel"]
    exp_rate: complex
    scale: complex
    params: tuple[complex, complex]

    def evaluate(self, x: complex) -> complex:
        if self.kind == "confluent":
            a, c = self.params
            return cmath.exp(self.exp_rate * x) * hyp1f1(a, c, self.scale * x)
        order, coef = self.params
        arg = cmath.sqrt(coef * x)
        # x^(order/2) J_order(sqrt(coef x)) times the exponential factor
        return cmath.exp(self.exp_rate * x) * x ** (order / 2) * bessel_j(order, arg)


def reduce_general_equation(eq: GeneralSecondOrderEq, branch: int = 1) -> ReducedSolutionForm:
    """Reduce the a0=1, b0=0 equation to a confluent or Bessel closed form.

    For D != 0: y = exp((D - a1) x / 2) 1F1(a; b1; -D x) with
    a = ((D - a1) b1 / 2 + b2) / D.  For D = 0: y = exp(-a1 x / 2) x^(nu/2)
    J_nu(sqrt((4 b2 - 2 a1 b1) x)) with nu = 1 - b1.
    """
    if eq.a0 != 1 or eq.b0 != 0:
        raise NotImplementedError("only a0 = 1, b0 = 0 is supported")
    if branch not in (1, -1):
        raise ValueError("branch must be +1 or -1")
    d2 = eq.discriminant_sq
    if d2 != 0:
        d = branch * cmath.sqrt(d2)
        a = ((d - eq.a1) / 2 * eq.b1 + eq.b2) / d
        return ReducedSolutionForm("confluent", (d - eq.a1) / 2, -d, (a, eq.b1))
    order = 1 - eq.b1
    return ReducedSolutionForm("bessel", -eq.a1 / 2, 1.0, (order, -2 * eq.a1 * eq.b1 + 4 * eq.b2))
