"""Coulomb Hamiltonian on the fuzzy space and its radial reduction.

Units are m_e = hbar = 1, so the coupling q equals alpha.  In a fixed (j, m)
sector the Hamiltonian acts on the radial sequence R(n) (indexed by the level
n of the middle factor) as a three-term operator T.  T is self-adjoint for the
weight w(n) = (n+j+1) C(n+2j+1, 2j+1); H_sym = W^(1/2) T W^(-1/2) is real
symmetric.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal

from . import ordering
from .fock import TruncatedFockSpace, build_space
from .opwave import (
    AngularLabel,
    OpWave,
    SuperOp,
    annihilator_sparse,
    build_psi_jm,
    creator_sparse,
    hs_inner,
    radial_weight,
    radius_values,
)
from .specfun import hyp1f1, hyp2f1, pochhammer

Family = Literal["I", "II"]


# ---- super-operators --------------------------------------------------------


def double_commutator_superop(space: TruncatedFockSpace) -> SuperOp:
    """Psi -> sum_alpha [a_alpha^+, [a_alpha, Psi]]."""
    pairs = [(creator_sparse(space, a), annihilator_sparse(space, a)) for a in range(2)]

    def act(m: np.ndarray) -> np.ndarray:
        out = np.zeros_like(m)
        for up, down in pairs:
            inner = down @ m - m @ down
            out += up @ inner - inner @ up
        return out

    return SuperOp(act, 2, "dd")


def laplacian_superop(space: TruncatedFockSpace, lam: float) -> SuperOp:
    """-(1/(lam r)) [a^+, [a, Psi]] with 1/r multiplying from the left."""
    dd = double_commutator_superop(space)
    inv = -1.0 / (lam * radius_values(space, lam))
    return SuperOp(lambda m: inv[:, None] * dd.action(m), 2, "Laplacian")


def kinetic_superop(space: TruncatedFockSpace, lam: float) -> SuperOp:
    """Free Hamiltonian (1/(2 lam r)) [a^+, [a, Psi]]."""
    dd = double_commutator_superop(space)
    inv = 1.0 / (2 * lam * radius_values(space, lam))
    return SuperOp(lambda m: inv[:, None] * dd.action(m), 2, "H0")


def potential_superop(space: TruncatedFockSpace, lam: float, q: float, side: str = "left") -> SuperOp:
    """Multiplication by -q/r from the chosen side."""
    u = -q / radius_values(space, lam)
    if side == "left":
        return SuperOp(lambda m: u[:, None] * m, 0, "U")
    if side == "right":
        return SuperOp(lambda m: m * u[None, :], 0, "U")
    raise ValueError(f"unknown side {side!r}")


def hamiltonian_superop(space: TruncatedFockSpace, lam: float, q: float) -> SuperOp:
    h0 = kinetic_superop(space, lam)
    u = -q / radius_values(space, lam)
    return SuperOp(lambda m: h0.action(m) + u[:, None] * m, 2, "H")


def solve_nc_laplace(q: float, q0: float, lam: float, n_max: int) -> np.ndarray:
    """Radial solution U(N) of the free equation with U(0) = q0 - q/lam.

    The first integral (M+1)U(M) - M U(M-1) = q0 fixes U(1); the three-term
    recurrence then runs forward from N = 1.
    """
    u = np.zeros(n_max + 1)
    u[0] = q0 - q / lam
    if n_max >= 1:
        u[1] = (q0 + u[0]) / 2
    for n in range(1, n_max):
        u[n + 1] = (2 * (n + 1) * u[n] - n * u[n - 1]) / (n + 2)
    return u


def coulomb_closed_form(q: float, q0: float, lam: float, n_max: int) -> np.ndarray:
    return q0 - q / (lam * (np.arange(n_max + 1) + 1.0))


# ---- energies ---------------------------------------------------------------


@dataclass(frozen=True)
class EnergyLevel:
    family: Family
    n: int
    j: int
    value: float


def energy_I(n: int, alpha: float, lam: float) -> float:
    """E^I in the cancellation-safe form -alpha^2 / (n^2 (1 + sqrt(1 + kappa^2)))."""
    kappa = alpha * lam / n
    return -(alpha**2) / (n**2 * (1.0 + math.sqrt(1.0 + kappa * kappa)))


def bound_energy(family: Family, n: int, j: int, alpha: float, lam: float) -> EnergyLevel:
    if n < j + 1:
        raise ValueError("principal number must satisfy n >= j + 1")
    if family == "I":
        if alpha <= 0:
            raise ValueError("family I needs an attractive coupling (alpha > 0)")
        return EnergyLevel("I", n, j, energy_I(n, alpha, lam))
    if family == "II":
        if alpha >= 0:
            raise ValueError("family II needs a repulsive coupling (alpha < 0)")
        return EnergyLevel("II", n, j, 2.0 / lam**2 - energy_I(n, -alpha, lam))
    raise ValueError(f"unknown family {family!r}")


# ---- radial reduction -------------------------------------------------------


def radial_weights(j: int, length: int) -> np.ndarray:
    return np.array([float(radial_weight(j, n)) for n in range(length)])


@dataclass(frozen=True)
class RadialVector:
    j: int
    lam: float
    coeffs: np.ndarray
    weight: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=complex))
        object.__setattr__(self, "weight", radial_weights(self.j, len(self.coeffs)))

    def weighted_norm(self) -> float:
        return math.sqrt(float(np.sum(self.weight * np.abs(self.coeffs) ** 2)))

    def normalized_at_origin(self) -> RadialVector:
        return RadialVector(self.j, self.lam, self.coeffs / self.coeffs[0])


@dataclass(frozen=True, eq=False)
class RadialHamiltonian:
    """Tridiagonal radial operator on indices 0..window_len-1.

    ``lower[n]`` is T[n+1, n] and ``upper[n]`` is T[n, n+1].
    """

    j: int
    lam: float
    q: float
    diag: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    window_len: int

    @property
    def weight(self) -> np.ndarray:
        return radial_weights(self.j, self.window_len)

    @property
    def T(self) -> np.ndarray:
        return (
            np.diag(self.diag.astype(complex))
            + np.diag(self.lower.astype(complex), -1)
            + np.diag(self.upper.astype(complex), 1)
        )

    @property
    def sym_diag(self) -> np.ndarray:
        return self.diag.real.copy()

    @property
    def sym_offdiag(self) -> np.ndarray:
        # geometric mean of the two similarity-scaled entries
        return -np.sqrt(np.abs(self.lower * self.upper))

    @property
    def H_sym(self) -> np.ndarray:
        off = self.sym_offdiag
        return np.diag(self.sym_diag) + np.diag(off, -1) + np.diag(off, 1)

    def similarity_transform(self) -> np.ndarray:
        """W^(1/2) T W^(-1/2) assembled directly, for symmetry checks."""
        s = np.sqrt(self.weight)
        return (s[:, None] * self.T) / s[None, :]

    def apply(self, r: np.ndarray) -> np.ndarray:
        out = self.diag * r
        out[1:] += self.lower * r[:-1]
        out[:-1] += self.upper * r[1:]
        return out


def _recurrence_entries(j: int, q: float, lam: float, length: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    n = np.arange(length, dtype=float)
    s = n + j + 1
    diag = 1.0 / lam**2 - q / (lam * s)
    upper = -(n[:-1] + 2 * j + 2) / (2 * lam**2 * s[:-1])
    lower = -(n[1:]) / (2 * lam**2 * s[1:])
    return diag, lower, upper


def radial_basis_state(space: TruncatedFockSpace, lam: float, j: int, n: int) -> OpWave:
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[n] = 1.0
    return build_psi_jm(space, lam, AngularLabel(j, j), coeffs)


def _fock_entries(j: int, q: float, lam: float, space: TruncatedFockSpace) -> np.ndarray:
    """Dense T from inner products of H B_n with the indicator states B_n'."""
    length = space.n_max - j + 1
    h = hamiltonian_superop(space, lam, q)
    basis = [radial_basis_state(space, lam, j, n) for n in range(length)]
    norms = [hs_inner(b, b).real for b in basis]
    t = np.zeros((length, length), dtype=complex)
    for n, b in enumerate(basis):
        hb = h(b)
        for k, bk in enumerate(basis):
            t[k, n] = hs_inner(bk, hb) / norms[k]
    return t


def build_radial_hamiltonian(
    j: int,
    q: float,
    lam: float,
    space: TruncatedFockSpace | int,
    method: Literal["recurrence", "fock"] = "recurrence",
) -> RadialHamiltonian:
    """Radial operator of the (j, m=j) sector with the last two rows dropped.

    ``method="fock"`` expands H B_n in the indicator states through the
    weighted trace; ``"recurrence"`` writes the same entries in closed form
    and scales to large truncations.
    """
    n_max = space if isinstance(space, int) else space.n_max
    if n_max < j + 4:
        raise ValueError("truncation too small: need n_max >= j + 4")
    length = n_max - j + 1
    keep = length - 2
    if method == "recurrence":
        diag, lower, upper = _recurrence_entries(j, q, lam, keep)
        return RadialHamiltonian(j, lam, q, diag, lower, upper, keep)
    if method == "fock":
        fs = space if isinstance(space, TruncatedFockSpace) else build_space(n_max)
        t = _fock_entries(j, q, lam, fs)[:keep, :keep]
        scale = np.abs(t).max()
        far = np.abs(np.triu(t, 2)).max(initial=0.0) + np.abs(np.tril(t, -2)).max(initial=0.0)
        if far > 1e-12 * scale:
            raise AssertionError(f"radial operator is not tridiagonal (far entry {far:.3e})")
        return RadialHamiltonian(
            j,
            lam,
            q,
            np.diag(t).real.copy(),
            np.diag(t, -1).real.copy(),
            np.diag(t, 1).real.copy(),
            keep,
        )
    raise ValueError(f"unknown method {method!r}")


def diagonalize(
    h: RadialHamiltonian, count: int, which: Literal["lowest", "highest"] = "lowest"
) -> list[tuple[float, RadialVector]]:
    """Extreme eigenpairs; eigenvectors are orthonormal in the weighted product."""
    size = h.window_len
    count = min(count, size)
    rng = (0, count - 1) if which == "lowest" else (size - count, size - 1)
    vals, vecs = eigh_tridiagonal(h.sym_diag, h.sym_offdiag, select="i", select_range=rng)
    order = np.argsort(vals) if which == "lowest" else np.argsort(vals)[::-1]
    inv_sqrt_w = 1.0 / np.sqrt(h.weight)
    out = []
    for idx in order:
        out.append((float(vals[idx]), RadialVector(h.j, h.lam, vecs[:, idx] * inv_sqrt_w)))
    return out


def spectrum(h: RadialHamiltonian) -> np.ndarray:
    return eigh_tridiagonal(h.sym_diag, h.sym_offdiag, eigvals_only=True)


def eigen_residual(h: RadialHamiltonian, vec: np.ndarray, energy: complex) -> float:
    """Weighted ||T R - E R|| / ||R|| over rows whose neighbours are all present.

    ``vec`` may be longer than the operator; only the first window_len + 1
    entries are used so the last kept row is exact.
    """
    size = h.window_len
    r = np.asarray(vec, dtype=complex)
    rows = min(size, len(r) - 1)
    n = np.arange(rows)
    s = n + h.j + 1
    lam = h.lam
    diag = 1.0 / lam**2 - h.q / (lam * s)
    up = -(n + 2 * h.j + 2) / (2 * lam**2 * s)
    low = -n / (2 * lam**2 * s)
    prev = np.concatenate([[0.0], r[: rows - 1]])
    tr = diag * r[:rows] + up * r[1 : rows + 1] + low * prev
    w = radial_weights(h.j, rows)
    res = math.sqrt(float(np.sum(w * np.abs(tr - energy * r[:rows]) ** 2)))
    ref = math.sqrt(float(np.sum(w * np.abs(r[:rows]) ** 2)))
    return res / ref


# ---- closed forms -----------------------------------------------------------

ClosedCase = Literal["generic_plus", "generic_minus", "eta0", "eta1", "boundI", "boundII", "scatter"]


def eta_parameter(energy: complex, lam: float) -> complex:
    """eta = k lam / 2 with k = sqrt(2E) on the principal branch."""
    return cmath.sqrt(2 * complex(energy)) * lam / 2


def omega_I(kappa: float) -> float:
    root = math.sqrt(1 + kappa * kappa)
    return (kappa - root + 1) / (kappa + root - 1)


def omega_II(kappa: float) -> float:
    root = math.sqrt(1 + kappa * kappa)
    return -(kappa + root + 1) / (kappa - root - 1)


def _generic_params(energy: complex, alpha: float, lam: float, j: int, sign: int) -> tuple[complex, complex, complex]:
    eta = eta_parameter(energy, lam)
    es = eta * cmath.sqrt(eta * eta - 1)
    base = 1 + sign * 2 * es - 2 * eta * eta
    a = j + 1 + sign * alpha * lam / (2 * es)
    x = sign * 4 * es / base
    return base, a, x


def generic_normal_series(n: int, energy: complex, alpha: float, lam: float, j: int, sign: int = 1) -> complex:
    """Same radial solution summed as sum_m (a)_m g^m/((c)_m m!) :rho^m e^(beta rho):."""
    eta = eta_parameter(energy, lam)
    es = eta * cmath.sqrt(eta * eta - 1)
    beta = (sign * 2 * es - 2 * eta * eta) / lam
    gamma_ = -sign * 4 * es / lam
    a = j + 1 + sign * alpha * lam / (2 * es)
    c = 2 * j + 2
    total = 0j
    for m in range(n + 1):
        coef = pochhammer(a, m) / (pochhammer(c, m) * math.factorial(m)) * gamma_**m
        total += coef * ordering.normal_power_times_exponential(m, beta, n, lam)
    return total


def solve_radial_closed_form(
    case: ClosedCase,
    j: int,
    lam: float,
    alpha: float,
    length: int,
    *,
    n: int | None = None,
    energy: complex | None = None,
) -> RadialVector:
    """Closed-form radial sequence R(0..length-1), normalized so R(0) = 1.

    ``generic_plus``/``generic_minus`` and ``scatter`` take ``energy``;
    ``boundI``/``boundII`` take the principal number ``n``.
    """
    idx = range(length)
    c = 2 * j + 2
    if case in ("generic_plus", "generic_minus"):
        if energy is None:
            raise ValueError("energy required")
        base, a, x = _generic_params(energy, alpha, lam, j, 1 if case == "generic_plus" else -1)
        vals = [base**k * hyp2f1(a, -k, c, x) for k in idx]
    elif case == "eta0":
        vals = [hyp1f1(-k, c, 2 * alpha * lam) for k in idx]
    elif case == "eta1":
        vals = [(-1) ** k * hyp1f1(-k, c, -2 * alpha * lam) for k in idx]
    elif case == "scatter":
        if energy is None:
            raise ValueError("energy required")
        from .scattering import momentum_map, omega_map

        p = momentum_map(energy, lam)
        om = omega_map(energy, lam)
        a = j + 1 - 1j * alpha / p
        vals = [om ** (-k) * hyp2f1(a, -k, c, 2j * lam * p * om) for k in idx]
    elif case in ("boundI", "boundII"):
        if n is None or n < j + 1:
            raise ValueError("bound families need a principal number n >= j + 1")
        kappa = lam * alpha / n
        if case == "boundI":
            if alpha <= 0:
                raise ValueError("family I needs alpha > 0")
            om = omega_I(kappa)
            vals = [om**k * hyp2f1(j + 1 - n, -k, c, -2 * kappa / om) for k in idx]
        else:
            if alpha >= 0:
                raise ValueError("family II needs alpha < 0")
            om = omega_II(kappa)
            vals = [(-om) ** k * hyp2f1(j + 1 - n, -k, c, 2 * kappa / om) for k in idx]
    else:
        raise ValueError(f"unknown case {case!r}")
    return RadialVector(j, lam, np.array(vals, dtype=complex))


def bound_form_minus_n(j: int, lam: float, alpha: float, n: int, length: int) -> RadialVector:
    """Bound-state form with first 2F1 parameter -n instead of j+1-n.

    Not a solution of the radial equation; tests use it as a negative control.
    """
    kappa = lam * alpha / n
    om = omega_I(kappa)
    vals = [om**k * hyp2f1(-n, -k, 2 * j + 2, -2 * kappa / om) for k in range(length)]
    return RadialVector(j, lam, np.array(vals, dtype=complex))


def reflection_check(n: int, j: int, alpha: float, lam: float, length: int = 40) -> float:
    """max_k |R^II(-alpha)(k) - (-1)^k R^I(alpha)(k)| with both normalized to R(0) = 1."""
    r1 = solve_radial_closed_form("boundI", j, lam, alpha, length, n=n).coeffs
    r2 = solve_radial_closed_form("boundII", j, lam, -alpha, length, n=n).coeffs
    sign = (-1.0) ** np.arange(length)
    return float(np.max(np.abs(r2 - sign * r1)))


def qm_radial_sample(n: int, j: int, alpha: float, r: np.ndarray) -> np.ndarray:
    """Commutative radial factor exp(-alpha r/n) 1F1(-n_r, 2j+2, 2 alpha r/n)."""
    n_r = n - j - 1
    return np.array([math.exp(-alpha * x / n) * hyp1f1(-n_r, 2 * j + 2, 2 * alpha * x / n).real for x in r])


def sector_energies(j: int, q: float, lam: float, n_max: int, count: int) -> list[float]:
    h = build_radial_hamiltonian(j, q, lam, n_max)
    which = "lowest" if q > 0 else "highest"
    return [e for e, _ in diagonalize(h, count, which)]


def coefficients_from(vec: Sequence[complex]) -> np.ndarray:
    return np.asarray(vec, dtype=complex)
