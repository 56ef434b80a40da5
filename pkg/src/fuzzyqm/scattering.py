"""Scattering kinematics, the partial-wave S-matrix and its poles.

For real energies the momentum takes the boundary value from the upper half
of the energy plane (E + i0).  On (0, 2/lam^2) this is the positive root.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .hamiltonian import EnergyLevel, bound_energy, energy_I
from .specfun import log_gamma, rgamma


class KinematicsDomainError(ValueError):
    """Raised for energies where the map or the S-matrix is undefined."""


def momentum_map(energy: complex, lam: float) -> complex:
    """p = sqrt(2E (1 - lam^2 E / 2)), continued from the upper half-plane."""
    e = complex(energy)
    f = 2 * e - lam * lam * e * e
    if e.imag == 0.0 and f.real < 0.0:
        # on the real axis away from the cut: sign fixed by d f/dE at E + i0
        root = math.sqrt(-f.real)
        return 1j * root if e.real < 1.0 / lam**2 else -1j * root
    return cmath.sqrt(f)


def omega_map(energy: complex, lam: float) -> complex:
    p = momentum_map(energy, lam)
    den = p + 1j * lam * energy
    if den == 0:
        raise KinematicsDomainError("p + i lam E vanishes")
    return (p - 1j * lam * energy) / den


def energy_from_momentum(p: complex, lam: float) -> complex:
    """Inverse of momentum_map onto the closed upper half-plane."""
    s = cmath.sqrt(lam * lam * p * p - 1)
    e = (1 + 1j * s) / lam**2
    return e if e.imag >= 0 else (1 - 1j * s) / lam**2


@dataclass(frozen=True)
class ScatterKinematics:
    energy: complex
    lam: float
    p: complex
    omega: complex


def kinematics(energy: complex, lam: float) -> ScatterKinematics:
    return ScatterKinematics(energy, lam, momentum_map(energy, lam), omega_map(energy, lam))


@dataclass(frozen=True)
class SMatrixEntry:
    j: int
    energy: float
    value: complex


def s_matrix(j: int, energy: float, alpha: float, lam: float) -> complex:
    """Gamma(j+1 - i alpha/p) / Gamma(j+1 + i alpha/p) as an exp of log-Gamma difference."""
    if not 0.0 < energy < 2.0 / lam**2:
        raise KinematicsDomainError("energy outside the scattering interval (0, 2/lam^2)")
    p = momentum_map(energy, lam)
    if p == 0:
        raise KinematicsDomainError("p = 0 at the interval edge")
    t = 1j * alpha / p
    return cmath.exp(log_gamma(j + 1 - t) - log_gamma(j + 1 + t))


def standard_s_matrix(j: int, energy: float, alpha: float) -> complex:
    """Commutative Coulomb partial-wave S-matrix with k = sqrt(2E)."""
    k = math.sqrt(2 * energy)
    t = 1j * alpha / k
    return cmath.exp(log_gamma(j + 1 - t) - log_gamma(j + 1 + t))


def s_matrix_table(j: int, energies, alpha: float, lam: float) -> list[SMatrixEntry]:
    return [SMatrixEntry(j, float(e), s_matrix(j, e, alpha, lam)) for e in energies]


def pole_residual(j: int, alpha: float, level: EnergyLevel, lam: float) -> float:
    """|1/Gamma(j+1 - i alpha/p)| at the pole energy, with p from momentum_map.

    2E - lam^2 E^2 is symmetric under E -> 2/lam^2 - E.  Upper-family levels
    sit just below 2/lam^2 where the float energy has lost the digits of the
    gap, so the map is evaluated at the partner energy instead and the root
    taken on the lower imaginary axis, as momentum_map does above 1/lam^2.
    """
    if level.family == "II":
        p = -momentum_map(energy_I(level.n, -alpha, lam), lam)
    else:
        p = momentum_map(level.value, lam)
    return abs(rgamma(j + 1 - 1j * alpha / p))


def enumerate_poles(j: int, alpha: float, lam: float, count: int) -> list[tuple[EnergyLevel, float]]:
    """Poles at p_n = i alpha/n, n = j+1..j+count, each with its reciprocal-Gamma residual."""
    if alpha == 0:
        raise ValueError("alpha must be nonzero")
    family = "I" if alpha > 0 else "II"
    out = []
    for n in range(j + 1, j + 1 + count):
        level = bound_energy(family, n, j, alpha, lam)
        out.append((level, pole_residual(j, alpha, level, lam)))
    return out


def so31_casimir_tau(energy: float, q: float, lam: float) -> float:
    factor = 2 * energy - lam * lam * energy * energy
    if not 0.0 < energy < 2.0 / lam**2:
        raise KinematicsDomainError("energy outside the scattering interval")
    return 1.0 + q * q / factor
