"""Velocity operator, kinematic E(4) algebra and the Laplace-Runge-Lenz vector.

Conventions: axes are 0, 1, 2 and mode indices 0, 1.  Functions of r that
multiply a super-operator output act from the left; on block-diagonal
wave functions the side does not matter.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Literal, Sequence

import numpy as np

from .fock import TruncatedFockSpace, valid_window
from .hamiltonian import kinetic_superop
from .opwave import (
    PAULI,
    AngularLabel,
    OpWave,
    SuperOp,
    angular_momentum_superop,
    annihilator,
    annihilator_sparse,
    build_psi_jm,
    commutator,
    coordinate_superop,
    creator,
    creator_sparse,
    identity_superop,
    levi_civita,
    radius_superop,
    radius_values,
    relative_residual,
    superop_sum,
)

AXES = (0, 1, 2)


def _left_r_function(space: TruncatedFockSpace, lam: float, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    return np.asarray(f(radius_values(space, lam)), dtype=complex)


def left_function_superop(space: TruncatedFockSpace, lam: float, f, label: str = "f(r)") -> SuperOp:
    vals = _left_r_function(space, lam, f)
    return SuperOp(lambda m: vals[:, None] * m, 0, label)


def inverse_radius(space: TruncatedFockSpace, lam: float) -> SuperOp:
    return left_function_superop(space, lam, lambda r: 1.0 / r, "1/r")


# ---- auxiliary two-sided ladder strings ------------------------------------


def w_pair(space: TruncatedFockSpace, alpha: int, beta: int) -> SuperOp:
    """Psi -> a_alpha^+ Psi a_beta - a_beta Psi a_alpha^+."""
    up, dn = creator_sparse(space, alpha), annihilator_sparse(space, beta)
    return SuperOp(lambda m: up @ (m @ dn) - dn @ (m @ up), 2, f"w{alpha}{beta}")


def zeta_pair(space: TruncatedFockSpace, alpha: int, beta: int) -> SuperOp:
    """Psi -> a_alpha^+ Psi a_beta + a_beta Psi a_alpha^+."""
    up, dn = creator_sparse(space, alpha), annihilator_sparse(space, beta)
    return SuperOp(lambda m: up @ (m @ dn) + dn @ (m @ up), 2, f"z{alpha}{beta}")


def _sigma_contract(space: TruncatedFockSpace, k: int | None, pair) -> SuperOp:
    terms = []
    for a, b in itertools.product(range(2), repeat=2):
        coef = (1.0 if a == b else 0.0) if k is None else PAULI[k][a, b]
        if coef != 0:
            terms.append(pair(space, a, b).scale(coef))
    return superop_sum(terms, "")


def w_trace(space: TruncatedFockSpace) -> SuperOp:
    return _sigma_contract(space, None, w_pair)


def zeta_trace(space: TruncatedFockSpace) -> SuperOp:
    return _sigma_contract(space, None, zeta_pair)


def w_vector(space: TruncatedFockSpace, k: int) -> SuperOp:
    return _sigma_contract(space, k, w_pair)


def zeta_vector(space: TruncatedFockSpace, k: int) -> SuperOp:
    return _sigma_contract(space, k, zeta_pair)


# ---- velocity --------------------------------------------------------------


def velocity_superop(space: TruncatedFockSpace, lam: float, i: int) -> SuperOp:
    """V^i = (i / 2r) sigma^i_ab w_ab."""
    wk = w_vector(space, i)
    inv = 1.0 / radius_values(space, lam)
    return SuperOp(lambda m: 0.5j * inv[:, None] * wk.action(m), 2, f"V{i}")


def velocity_fourth(space: TruncatedFockSpace, lam: float) -> SuperOp:
    """V_4 = (1/2r)(a^+ Psi a + a Psi a^+)."""
    z = zeta_trace(space)
    inv = 1.0 / radius_values(space, lam)
    return SuperOp(lambda m: 0.5 * inv[:, None] * z.action(m), 2, "V4")


def apply_velocity(space: TruncatedFockSpace, lam: float, i: int, mat: np.ndarray) -> np.ndarray:
    return velocity_superop(space, lam, i).action(mat)


def leibniz_correction(space: TruncatedFockSpace, lam: float, i: int, a_mat: np.ndarray, b_mat: np.ndarray) -> np.ndarray:
    """K^i(A, B) = -(i/2r) sigma^i_ab ([a_a^+, A][a_b, B] - [a_b, A][a_a^+, B])."""
    inv = 1.0 / radius_values(space, lam)
    out = np.zeros_like(a_mat)
    for a, b in itertools.product(range(2), repeat=2):
        s = PAULI[i][a, b]
        if s == 0:
            continue
        up, dn = creator_sparse(space, a), annihilator_sparse(space, b)
        c_up_a = up @ a_mat - a_mat @ up
        c_dn_b = dn @ b_mat - b_mat @ dn
        c_dn_a = dn @ a_mat - a_mat @ dn
        c_up_b = up @ b_mat - b_mat @ up
        out += s * (c_up_a @ c_dn_b - c_dn_a @ c_up_b)
    return -0.5j * inv[:, None] * out


def finite_difference(f: Callable[[np.ndarray], np.ndarray], lam: float) -> Callable[[np.ndarray], np.ndarray]:
    """f'_lam(r) = (f(r+lam) - f(r-lam)) / (2 lam)."""
    return lambda r: (f(r + lam) - f(r - lam)) / (2 * lam)


def second_difference(f: Callable[[np.ndarray], np.ndarray], lam: float) -> Callable[[np.ndarray], np.ndarray]:
    return lambda r: (f(r + lam) - 2 * f(r) + f(r - lam)) / lam**2


def ehrenfest_w_superop(space: TruncatedFockSpace, lam: float, i: int) -> SuperOp:
    """W^i Psi = (1/2r) sigma^i_ab [a_b, [a_a^+, Psi]]."""
    inv = 1.0 / radius_values(space, lam)
    pairs = [
        (PAULI[i][a, b], creator_sparse(space, a), annihilator_sparse(space, b))
        for a, b in itertools.product(range(2), repeat=2)
        if PAULI[i][a, b] != 0
    ]

    def act(m: np.ndarray) -> np.ndarray:
        out = np.zeros_like(m)
        for s, up, dn in pairs:
            inner = up @ m - m @ up
            out += s * (dn @ inner - inner @ dn)
        return 0.5 * inv[:, None] * out

    return SuperOp(act, 2, f"W{i}")


EhrenfestForm = Literal["unit", "corrected"]
_EHRENFEST_COEFFS = {"unit": (1.0, 1.0), "corrected": (2.0, -1j)}


def ehrenfest_rhs(
    space: TruncatedFockSpace,
    lam: float,
    i: int,
    potential,
    mat: np.ndarray,
    form: EhrenfestForm = "unit",
) -> np.ndarray:
    """Right side of the deformed Ehrenfest relation applied to Psi.

    -i (V^i U) Psi + U'_lam (lam/r L^i + cw lam^2 W^i) Psi + cv (lam^2/2) U''_lam V^i Psi,
    with (cw, cv) = (1, 1) for the unit form and (2, -i) for the form that matches
    -i [V^i, U].  The finite differences are regrouped by shift so U is never
    evaluated at r - lam = 0; that shifted term is dropped on the vacuum row.
    """
    cw, cv = _EHRENFEST_COEFFS[form]
    r = radius_values(space, lam)
    u_mat = np.diag(_left_r_function(space, lam, potential))
    vu = apply_velocity(space, lam, i, u_mat)
    l_psi = angular_momentum_superop(space, lam, i).action(mat)
    w_psi = ehrenfest_w_superop(space, lam, i).action(mat)
    v_psi = apply_velocity(space, lam, i, mat)
    first = (lam / r)[:, None] * l_psi + cw * lam**2 * w_psi
    up = first / (2 * lam) + 0.5 * cv * v_psi
    mid = -cv * v_psi
    down = -first / (2 * lam) + 0.5 * cv * v_psi
    u_up = _left_r_function(space, lam, lambda x: potential(x + lam))
    u_mid = _left_r_function(space, lam, potential)
    inner = r > lam * 1.5
    u_down = np.zeros_like(u_mid)
    u_down[inner] = np.asarray(potential(r[inner] - lam), dtype=complex)
    return -1j * (vu @ mat) + u_up[:, None] * up + u_mid[:, None] * mid + u_down[:, None] * down


def vacuum_shift_coefficient(space: TruncatedFockSpace, lam: float, i: int, mat: np.ndarray, form: EhrenfestForm) -> float:
    """Largest entry multiplying U(0) on the vacuum row; zero when that row is well defined."""
    cw, cv = _EHRENFEST_COEFFS[form]
    r = radius_values(space, lam)
    l_psi = angular_momentum_superop(space, lam, i).action(mat)
    w_psi = ehrenfest_w_superop(space, lam, i).action(mat)
    v_psi = apply_velocity(space, lam, i, mat)
    down = -((lam / r)[:, None] * l_psi + cw * lam**2 * w_psi) / (2 * lam) + 0.5 * cv * v_psi
    return float(np.max(np.abs(down[space.totals == 0]), initial=0.0))


def ehrenfest_lhs(space: TruncatedFockSpace, lam: float, i: int, potential, mat: np.ndarray) -> np.ndarray:
    """-i [V^i, U] Psi with U multiplying from the left."""
    u = _left_r_function(space, lam, potential)
    v = velocity_superop(space, lam, i)
    return -1j * (v.action(u[:, None] * mat) - u[:, None] * v.action(mat))


# ---- auxiliary operator set for the LRL analysis ---------------------------


@dataclass(frozen=True, eq=False)
class AuxOperatorSet:
    """Two-sided operator strings for fixed lambda and energy."""

    space: TruncatedFockSpace
    lam: float
    energy: float

    @property
    def omega(self) -> float:
        return -2 * self.lam * self.energy

    @property
    def eta(self) -> float:
        return 2 / self.lam + self.omega

    def X(self, k: int) -> SuperOp:
        return coordinate_superop(self.space, self.lam, k, "symmetric")

    def r(self) -> SuperOp:
        return radius_superop(self.space, self.lam, 1, "symmetric")

    def w(self) -> SuperOp:
        return w_trace(self.space)

    def zeta(self) -> SuperOp:
        return zeta_trace(self.space)

    def w_k(self, k: int) -> SuperOp:
        return w_vector(self.space, k)

    def zeta_k(self, k: int) -> SuperOp:
        return zeta_vector(self.space, k)

    def W_k(self, k: int) -> SuperOp:
        return self.X(k).scale(2 / self.lam) - self.zeta_k(k)

    def W(self) -> SuperOp:
        return self.r().scale(2 / self.lam) - self.zeta()

    def Wp_k(self, k: int) -> SuperOp:
        return self.X(k).scale(self.eta) - self.zeta_k(k)

    def Wp(self) -> SuperOp:
        return self.r().scale(self.eta) - self.zeta()


def lrl_superop(space: TruncatedFockSpace, lam: float, q: float, k: int) -> SuperOp:
    """A_k = (1/2) eps_ijk (L_i V_j + V_j L_i) + q X_k / r."""
    terms = []
    for i, j in itertools.product(AXES, repeat=2):
        e = levi_civita(i, j, k)
        if e == 0:
            continue
        li = angular_momentum_superop(space, lam, i)
        vj = velocity_superop(space, lam, j)
        terms.append((li @ vj + vj @ li).scale(0.5 * e))
    terms.append((inverse_radius(space, lam) @ coordinate_superop(space, lam, k)).scale(q))
    return superop_sum(terms, f"A{k}")


def lrl_superop_rewritten(space: TruncatedFockSpace, lam: float, q: float, k: int, energy: float = 0.0) -> SuperOp:
    """(1/(2 r lam)) (r W'_k - X_k (W' - 2 lam q)); independent of the energy used in W'."""
    aux = AuxOperatorSet(space, lam, energy)
    inner = aux.r() @ aux.Wp_k(k) - aux.X(k) @ (aux.Wp() - identity_superop().scale(2 * lam * q))
    inv = 1.0 / radius_values(space, lam)
    return SuperOp(lambda m: inv[:, None] * inner.action(m) / (2 * lam), inner.degree, f"A{k}'")


def hamiltonian_with(space: TruncatedFockSpace, lam: float, q: float) -> SuperOp:
    from .hamiltonian import hamiltonian_superop

    return hamiltonian_superop(space, lam, q)


def casimir_factor(energy: float, lam: float) -> float:
    """-2E + lam^2 E^2, whose sign fixes the symmetry algebra."""
    return -2 * energy + lam * lam * energy * energy


def classify_algebra(energy: float, lam: float, tol: float = 0.0) -> Literal["so4", "so31", "e3"]:
    f = casimir_factor(energy, lam)
    if abs(f) <= tol:
        return "e3"
    return "so4" if f > 0 else "so31"


@dataclass(frozen=True)
class SymmetryVerdict:
    algebra: str
    energy: float
    factor: float
    casimir1: float
    casimir2: float


def spectrum_from_symmetry(q: float, lam: float, n: int) -> tuple[float, float]:
    """Roots of n^2 = q^2 / (lam^2 E^2 - 2E): E = 1/lam^2 -/+ sqrt(1 + kappa^2)/lam^2."""
    if n < 1:
        raise ValueError("n must be >= 1")
    kappa = q * lam / n
    root = math.sqrt(1 + kappa * kappa)
    # the lower root in the same cancellation-safe form as the closed spectrum
    e_low = -(q * q) / (n * n * (1.0 + root))
    return e_low, 2.0 / lam**2 - e_low


# ---- residual helpers -------------------------------------------------------


def window_project(mat: np.ndarray, space: TruncatedFockSpace, degree: int) -> np.ndarray:
    mask = valid_window(space, degree)
    out = np.zeros_like(mat)
    out[np.ix_(mask, mask)] = mat[np.ix_(mask, mask)]
    return out


def residual(
    lhs: np.ndarray,
    rhs: np.ndarray,
    psi: OpWave,
    degree: int | None = None,
) -> float:
    """Relative weighted residual, optionally restricted to the window."""
    if degree is not None:
        lhs = window_project(lhs, psi.space, degree)
        rhs = window_project(rhs, psi.space, degree)
        ref = window_project(psi.mat, psi.space, degree)
    else:
        ref = psi.mat
    return relative_residual(lhs, rhs, ref, psi.space, psi.lam)


def e4_generator(space: TruncatedFockSpace, lam: float, a: int, b: int) -> SuperOp:
    """L_ab on indices 0..3: L_ij = eps_ijk L_k, L_k3 = -L_3k = X_k / lam."""
    if a == b:
        return SuperOp(lambda m: np.zeros_like(m), 0, "0")
    if a < 3 and b < 3:
        k = 3 - a - b
        return angular_momentum_superop(space, lam, k).scale(levi_civita(a, b, k))
    if b == 3:
        return coordinate_superop(space, lam, a).scale(1 / lam)
    return coordinate_superop(space, lam, b).scale(-1 / lam)


def e4_velocity(space: TruncatedFockSpace, lam: float, a: int) -> SuperOp:
    return velocity_fourth(space, lam) if a == 3 else velocity_superop(space, lam, a)


def free_hamiltonian(space: TruncatedFockSpace, lam: float) -> SuperOp:
    return kinetic_superop(space, lam)


def sum_of_squares(ops: Sequence[SuperOp]) -> SuperOp:
    return superop_sum([o @ o for o in ops], "sumsq")


def coordinate_left_right(space: TruncatedFockSpace, lam: float, i: int) -> tuple[SuperOp, SuperOp]:
    return (
        coordinate_superop(space, lam, i, "left"),
        coordinate_superop(space, lam, i, "right"),
    )


def radial_power_identity_matrices(space: TruncatedFockSpace, lam: float, power: int, alpha: int):
    """Both sides of a r^N = (r + lam)^N a and a^+ r^N = (r - lam)^N a^+."""
    r = np.diag(radius_values(space, lam).astype(complex))
    eye = np.eye(space.dim)
    a, ad = annihilator(space, alpha), creator(space, alpha)
    rp = np.linalg.matrix_power(r, power)
    lhs1 = a @ rp
    rhs1 = np.linalg.matrix_power(r + lam * eye, power) @ a
    lhs2 = ad @ rp
    rhs2 = np.linalg.matrix_power(r - lam * eye, power) @ ad
    return (lhs1, rhs1), (lhs2, rhs2)





def bound_eigenstate(space: TruncatedFockSpace, lam: float, q: float, n: int, j: int, m: int, radial_n_max: int = 300) -> tuple[float, OpWave, float]:
    """Eigenstate with principal number n from the radial diagonalization.

    Returns (energy, Psi, eigen-residual of the radial vector).  q > 0 picks
    the lowest family, q < 0 the mirrored family from the top of the band.
    """
    from .hamiltonian import build_radial_hamiltonian, diagonalize, eigen_residual

    if n < j + 1:
        raise ValueError("need n >= j + 1")
    h = build_radial_hamiltonian(j, q, lam, radial_n_max)
    which = "lowest" if q > 0 else "highest"
    energy, vec = diagonalize(h, n - j, which)[n - j - 1]
    gate = eigen_residual(h, vec.coeffs, energy)
    psi = build_psi_jm(space, lam, AngularLabel(j, m), vec.coeffs[: space.n_max + 1])
    return energy, psi, gate


# ---- identity registry for the auxiliary operator algebra -------------------


@dataclass(frozen=True)
class IdentityCase:
    """A claimed operator identity lhs == rhs on balanced wave functions."""

    name: str
    lhs: SuperOp
    rhs: SuperOp

    @property
    def degree(self) -> int:
        return max(self.lhs.degree, self.rhs.degree)

    def residual(self, psi: OpWave) -> float:
        return residual(self.lhs.action(psi.mat), self.rhs.action(psi.mat), psi, self.degree)


def _zero() -> SuperOp:
    return SuperOp(lambda m: np.zeros_like(m), 0, "0")


def _sum(ops: Sequence[SuperOp]) -> SuperOp:
    return superop_sum(list(ops), "")


def auxiliary_identities(space: TruncatedFockSpace, lam: float, energy: float = -0.3) -> list[IdentityCase]:
    """The commutator and product identities behind the LRL algebra."""
    aux = AuxOperatorSet(space, lam, energy)
    r, z, w = aux.r(), aux.zeta(), aux.w()
    X = [aux.X(k) for k in AXES]
    Z = [aux.zeta_k(k) for k in AXES]
    L = [angular_momentum_superop(space, lam, k) for k in AXES]
    Wp = [aux.Wp_k(k) for k in AXES]
    out: list[IdentityCase] = []
    for k in AXES:
        two_i_rv = r @ velocity_superop(space, lam, k)
        out.append(IdentityCase(f"[zeta,X{k}] = -lam w{k}", commutator(z, X[k]), aux.w_k(k).scale(-lam)))
        out.append(IdentityCase(f"[zeta{k},r] = -lam w{k}", commutator(Z[k], r), aux.w_k(k).scale(-lam)))
        out.append(IdentityCase(f"-lam w{k} = 2i lam r V{k}", aux.w_k(k).scale(-lam), two_i_rv.scale(2j * lam)))
        out.append(IdentityCase(f"[zeta,zeta{k}] = 0", commutator(z, Z[k]), _zero()))
        out.append(IdentityCase(f"[W',W'{k}] = 0", commutator(aux.Wp(), Wp[k]), _zero()))
        out.append(IdentityCase(f"[X{k},r] = 0", commutator(X[k], r), _zero()))
    for i, j in itertools.product(AXES, repeat=2):
        k = 3 - i - j if i != j else 0
        e = levi_civita(i, j, k) if i != j else 0
        lk = L[k]
        out.append(IdentityCase(f"[zeta{i},zeta{j}]", commutator(Z[i], Z[j]), lk.scale(-4j * e)))
        out.append(IdentityCase(f"[X{i},zeta{j}]", commutator(X[i], Z[j]), w.scale(lam * (i == j))))
        out.append(IdentityCase(f"[X{i},X{j}]", commutator(X[i], X[j]), lk.scale(1j * lam**2 * e)))
        out.append(
            IdentityCase(
                f"[W'{i},W'{j}]",
                commutator(Wp[i], Wp[j]),
                lk.scale(4j * lam * aux.omega * (1 + lam * aux.omega / 4) * e),
            )
        )
        out.append(IdentityCase(f"[L{i},X{j}]", commutator(L[i], X[j]), X[k].scale(1j * e)))
        out.append(IdentityCase(f"[L{i},zeta{j}]", commutator(L[i], Z[j]), Z[k].scale(1j * e)))
        out.append(IdentityCase(f"[L{i},W'{j}]", commutator(L[i], Wp[j]), Wp[k].scale(1j * e)))
        xl = coordinate_superop(space, lam, i, "left")
        xr = [coordinate_superop(space, lam, t, "right") for t in AXES]
        out.append(IdentityCase(f"[xR{i},xR{j}]", commutator(xr[i], xr[j]), xr[k].scale(-2j * lam * e)))
        out.append(IdentityCase(f"[xL{i},xR{j}] = 0", commutator(xl, xr[j]), _zero()))
    out.append(IdentityCase("L.zeta = 0", _sum(L[k] @ Z[k] for k in AXES), _zero()))
    out.append(IdentityCase("L.X = 0", _sum(L[k] @ X[k] for k in AXES), _zero()))
    l2 = _sum(L[k] @ L[k] for k in AXES)
    c = aux.eta**2 * lam**2 - 4
    out.append(
        IdentityCase(
            "W'.W' + (eta^2 lam^2 - 4)(L^2 + 1) = W'^2",
            _sum(Wp[k] @ Wp[k] for k in AXES) + (l2 + identity_superop()).scale(c),
            aux.Wp() @ aux.Wp(),
        )
    )
    zr, rz = z @ r, r @ z
    out.append(IdentityCase("[r,zeta] = lam w", commutator(r, z), w.scale(lam)))
    out.append(IdentityCase("{r,zeta} = lam w + 2 zeta r", rz + zr, w.scale(lam) + zr.scale(2)))
    zx = _sum(Z[k] @ X[k] for k in AXES)
    xz = _sum(X[k] @ Z[k] for k in AXES)
    out.append(IdentityCase("zeta_i X_i = r zeta - 2 lam w", zx, rz - w.scale(2 * lam)))
    out.append(IdentityCase("X_i zeta_i = r zeta + lam w", xz, rz + w.scale(lam)))
    out.append(IdentityCase("[X_i,zeta_i] = 3 lam w", xz - zx, w.scale(3 * lam)))
    out.append(IdentityCase("{X_i,zeta_i} = 2 r zeta - lam w", xz + zx, rz.scale(2) - w.scale(lam)))
    out.append(IdentityCase("lam w + 2 zeta r = 2 r zeta - lam w", w.scale(lam) + zr.scale(2), rz.scale(2) - w.scale(lam)))
    return out


# ---- suites -----------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tolerance)


def _window_norm(mat: np.ndarray, psi: OpWave, degree: int) -> float:
    from .opwave import matrix_hs_norm

    return matrix_hs_norm(window_project(mat, psi.space, degree), psi.space, psi.lam)


def velocity_hermiticity_residual(phi: OpWave, psi: OpWave, i: int) -> float:
    """|<phi, V psi> - conj<psi, V phi>| relative to the norms involved."""
    from .opwave import hs_inner, hs_norm

    v = velocity_superop(psi.space, psi.lam, i)
    left = hs_inner(phi, v(psi))
    right = np.conj(hs_inner(psi, v(phi)))
    return abs(left - right) / max(hs_norm(phi) * hs_norm(v(psi)), hs_norm(psi) * hs_norm(v(phi)), 1e-300)


def uncertainty_check(i: int, j: int, psi: OpWave) -> float:
    """[V^i, X^j] Psi against -i delta_ij (1 - lam^2 H0) Psi."""
    sp, lam = psi.space, psi.lam
    lhs = commutator(velocity_superop(sp, lam, i), coordinate_superop(sp, lam, j)).action(psi.mat)
    h0 = free_hamiltonian(sp, lam).action(psi.mat)
    rhs = -1j * (i == j) * (psi.mat - lam**2 * h0)
    return residual(lhs, rhs, psi, 4)


def velocity_commutator_check(psi: OpWave) -> float:
    sp, lam = psi.space, psi.lam
    worst = 0.0
    for i, j in itertools.combinations(AXES, 2):
        out = commutator(velocity_superop(sp, lam, i), velocity_superop(sp, lam, j)).action(psi.mat)
        worst = max(worst, _window_norm(out, psi, 4) / max(_window_norm(psi.mat, psi, 4), 1e-300))
    return worst


def v2_h0_relation_check(psi: OpWave) -> float:
    """(1/2) V^2 Psi against H0 (1 - lam^2 H0 / 2) Psi."""
    sp, lam = psi.space, psi.lam
    v2 = sum_of_squares([velocity_superop(sp, lam, i) for i in AXES]).action(psi.mat)
    h0 = free_hamiltonian(sp, lam)
    h = h0.action(psi.mat)
    return residual(0.5 * v2, h - 0.5 * lam**2 * h0.action(h), psi, 4)


def e4_symmetry_suite(psi: OpWave, tol: float = 1e-10) -> list[CheckResult]:
    """Generator algebra, velocity covariance, quadratic Casimir and vanishing Pauli-Lubanski vector."""
    sp, lam, m = psi.space, psi.lam, psi.mat
    delta = lambda a, b: 1.0 if a == b else 0.0  # noqa: E731
    gens = {(a, b): e4_generator(sp, lam, a, b) for a in range(4) for b in range(4)}
    gm = {key: g.action(m) for key, g in gens.items()}
    vel = [e4_velocity(sp, lam, a) for a in range(4)]
    vm = [v.action(m) for v in vel]
    worst = 0.0
    for a, b, c, d in itertools.product(range(4), repeat=4):
        if a >= b or c >= d:
            continue
        lhs = gens[a, b].action(gm[c, d]) - gens[c, d].action(gm[a, b])
        rhs = 1j * (delta(a, c) * gm[b, d] - delta(a, d) * gm[b, c] - delta(b, c) * gm[a, d] + delta(b, d) * gm[a, c])
        worst = max(worst, residual(lhs, rhs, psi, 4))
    out = [CheckResult("so(4) generator algebra", worst, tol)]
    worst = 0.0
    for a, b in itertools.combinations(range(4), 2):
        worst = max(worst, residual(vel[a].action(vm[b]), vel[b].action(vm[a]), psi, 4))
    out.append(CheckResult("[V_a, V_b] = 0", worst, tol))
    worst = 0.0
    for a, b, c in itertools.product(range(4), repeat=3):
        lhs = gens[a, b].action(vm[c]) - vel[c].action(gm[a, b])
        rhs = 1j * (delta(a, c) * vm[b] - delta(b, c) * vm[a])
        worst = max(worst, residual(lhs, rhs, psi, 4))
    out.append(CheckResult("[L_ab, V_c] covariance", worst, tol))
    h0 = free_hamiltonian(sp, lam).action(m)
    out.append(CheckResult("V_4 + lam H0 = 1/lam", residual(vm[3] + lam * h0, m / lam, psi, 2), tol))
    c2 = sum(vel[a].action(vm[a]) for a in range(4))
    out.append(CheckResult("C2 = 1/lam^2", residual(c2, m / lam**2, psi, 4), tol))
    lm = [angular_momentum_superop(sp, lam, k).action(m) for k in AXES]
    lam4 = sum(angular_momentum_superop(sp, lam, k).action(vm[k]) for k in AXES)
    worst = _window_norm(lam4, psi, 4) / max(_window_norm(m, psi, 4), 1e-300)
    for i in AXES:
        li = vel[3].action(lm[i])
        for j, k in itertools.product(AXES, repeat=2):
            e = levi_civita(i, j, k)
            if e:
                li = li + e * vel[j].action(gm[k, 3])
        worst = max(worst, _window_norm(li, psi, 4) / max(_window_norm(m, psi, 4), 1e-300))
    out.append(CheckResult("Pauli-Lubanski vector = 0", worst, tol))
    return out


def ehrenfest_check(
    q: float, psi: OpWave, form: EhrenfestForm = "unit", potential=None
) -> float:
    """Worst component residual of -i[V^i, U] Psi against the deformed Ehrenfest form.

    The default potential is U = -q/r.
    """
    u = potential if potential is not None else (lambda r: -q / r)
    return max(
        residual(
            ehrenfest_lhs(psi.space, psi.lam, i, u, psi.mat),
            ehrenfest_rhs(psi.space, psi.lam, i, u, psi.mat, form),
            psi,
            2,
        )
        for i in AXES
    )


def w_normalization_factor(psi: OpWave, i: int) -> complex:
    """Scalar c with W^i Psi = c (1/r) W_i Psi, fitted by least squares."""
    sp, lam = psi.space, psi.lam
    a = ehrenfest_w_superop(sp, lam, i).action(psi.mat)
    b = (1.0 / radius_values(sp, lam))[:, None] * AuxOperatorSet(sp, lam, 0.0).W_k(i).action(psi.mat)
    a, b = window_project(a, sp, 2).ravel(), window_project(b, sp, 2).ravel()
    return complex(np.vdot(b, a) / np.vdot(b, b))


def lrl_algebra_suite(
    energy: float,
    q: float,
    lam: float,
    states: Sequence[OpWave],
    tol: float = 1e-7,
    gate: float = 1e-8,
) -> tuple[SymmetryVerdict, list[CheckResult]]:
    """Symmetry relations of the LRL vector on sampled fixed-energy eigenstates."""
    if not states:
        raise ValueError("no states supplied")
    f = casimir_factor(energy, lam)
    sp = states[0].space
    ham = hamiltonian_with(sp, lam, q)
    A = [lrl_superop(sp, lam, q, k) for k in AXES]
    L = [angular_momentum_superop(sp, lam, k) for k in AXES]
    aux = AuxOperatorSet(sp, lam, energy)
    worst = dict.fromkeys(
        ["eigen", "conservation", "[A,A]", "[L,A]", "C1", "C2", "A = W'/2lam", "rewritten A", "[K,K]"], 0.0
    )
    c1_val = 0.0
    c2_val = 0.0
    for psi in states:
        m = psi.mat
        worst["eigen"] = max(worst["eigen"], residual(ham.action(m), energy * m, psi, 2))
        if worst["eigen"] > gate:
            raise ValueError(f"state fails the eigen-residual gate: {worst['eigen']:.3e}")
        am = [a.action(m) for a in A]
        lm = [l.action(m) for l in L]
        hm = ham.action(m)
        for k in AXES:
            worst["conservation"] = max(
                worst["conservation"], residual(A[k].action(hm), ham.action(am[k]), psi, 6)
            )
            worst["A = W'/2lam"] = max(worst["A = W'/2lam"], residual(am[k], aux.Wp_k(k).action(m) / (2 * lam), psi, 4))
            worst["rewritten A"] = max(
                worst["rewritten A"], residual(am[k], lrl_superop_rewritten(sp, lam, q, k, energy).action(m), psi, 4)
            )
        for i, j in itertools.product(AXES, repeat=2):
            k = 3 - i - j if i != j else 0
            e = levi_civita(i, j, k) if i != j else 0
            if i < j:
                lhs = A[i].action(am[j]) - A[j].action(am[i])
                worst["[A,A]"] = max(worst["[A,A]"], residual(lhs, 1j * e * f * lm[k], psi, 8))
                if f != 0:
                    worst["[K,K]"] = max(worst["[K,K]"], residual(lhs / abs(f), 1j * e * np.sign(f) * lm[k], psi, 8))
            lhs = L[i].action(am[j]) - A[j].action(lm[i])
            worst["[L,A]"] = max(worst["[L,A]"], residual(lhs, 1j * e * am[k], psi, 6))
        c1 = sum(L[k].action(am[k]) for k in AXES)
        worst["C1"] = max(worst["C1"], _window_norm(c1, psi, 6) / _window_norm(m, psi, 6))
        l2 = sum(L[k].action(lm[k]) for k in AXES)
        c2 = sum(A[k].action(am[k]) for k in AXES) + f * (l2 + m)
        worst["C2"] = max(worst["C2"], residual(c2, q * q * m, psi, 8))
        ref = window_project(m, sp, 8).ravel()
        c1_val = max(c1_val, abs(np.vdot(ref, window_project(c1, sp, 8).ravel()) / np.vdot(ref, ref)))
        c2_val = complex(np.vdot(ref, window_project(c2, sp, 8).ravel()) / np.vdot(ref, ref)).real
    verdict = SymmetryVerdict(classify_algebra(energy, lam), energy, f, c1_val, c2_val)
    checks = [CheckResult(name, val, gate if name == "eigen" else tol) for name, val in worst.items()]
    if f == 0:
        checks = [c for c in checks if c.name != "[K,K]"]
    return verdict, checks
