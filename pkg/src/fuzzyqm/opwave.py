"""Operator wave functions and the super-operators acting on them.

An OpWave is a matrix on the truncated Fock space.  Super-operators are built
from left and right multiplication by ladder matrices; the hatted ladders are
a (left a), a_dag (left a^+), b (right a) and b_dag (right a^+).
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Literal, Sequence

import numpy as np

from .fock import TruncatedFockSpace, valid_window

Side = Literal["left", "right", "symmetric"]

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def levi_civita(i: int, j: int, k: int) -> int:
    return (i - j) * (j - k) * (k - i) // 2


@dataclass(frozen=True, eq=False)
class OpWave:
    lam: float
    mat: np.ndarray
    space: TruncatedFockSpace

    def __post_init__(self) -> None:
        if self.lam <= 0:
            raise ValueError("lambda must be positive")
        if self.mat.shape != (self.space.dim, self.space.dim):
            raise ValueError("matrix shape does not match the Fock space")

    @property
    def is_balanced(self) -> bool:
        """True when the matrix maps each level block F_n into itself."""
        totals = self.space.totals
        off = totals[:, None] != totals[None, :]
        return not np.any(self.mat[off])

    def with_mat(self, mat: np.ndarray) -> OpWave:
        return OpWave(self.lam, mat, self.space)

    def __add__(self, other: OpWave) -> OpWave:
        return self.with_mat(self.mat + other.mat)

    def __sub__(self, other: OpWave) -> OpWave:
        return self.with_mat(self.mat - other.mat)

    def __mul__(self, scalar: complex) -> OpWave:
        return self.with_mat(self.mat * scalar)

    __rmul__ = __mul__

    def __matmul__(self, other: OpWave) -> OpWave:
        return self.with_mat(self.mat @ other.mat)


MatMap = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class SuperOp:
    """Linear map on OpWave matrices; degree bounds the window shrinkage."""

    action: MatMap
    degree: int
    label: str = ""

    def __call__(self, psi: OpWave) -> OpWave:
        return psi.with_mat(self.action(psi.mat))

    def apply(self, mat: np.ndarray) -> np.ndarray:
        return self.action(mat)

    def __matmul__(self, other: SuperOp) -> SuperOp:
        f, g = self.action, other.action
        return SuperOp(lambda m: f(g(m)), self.degree + other.degree, f"({self.label})({other.label})")

    def __add__(self, other: SuperOp) -> SuperOp:
        f, g = self.action, other.action
        return SuperOp(lambda m: f(m) + g(m), max(self.degree, other.degree), f"{self.label}+{other.label}")

    def __sub__(self, other: SuperOp) -> SuperOp:
        f, g = self.action, other.action
        return SuperOp(lambda m: f(m) - g(m), max(self.degree, other.degree), f"{self.label}-{other.label}")

    def __neg__(self) -> SuperOp:
        f = self.action
        return SuperOp(lambda m: -f(m), self.degree, f"-{self.label}")

    def scale(self, c: complex) -> SuperOp:
        f = self.action
        return SuperOp(lambda m: c * f(m), self.degree, f"{c}*{self.label}")

    __rmul__ = scale

    def __mul__(self, c: complex) -> SuperOp:
        return self.scale(c)


def identity_superop() -> SuperOp:
    return SuperOp(lambda m: m.copy(), 0, "1")


def zero_superop() -> SuperOp:
    return SuperOp(lambda m: np.zeros_like(m), 0, "0")


def commutator(x: SuperOp, y: SuperOp) -> SuperOp:
    return SuperOp(
        lambda m: x.action(y.action(m)) - y.action(x.action(m)),
        x.degree + y.degree,
        f"[{x.label},{y.label}]",
    )


def anticommutator(x: SuperOp, y: SuperOp) -> SuperOp:
    return SuperOp(
        lambda m: x.action(y.action(m)) + y.action(x.action(m)),
        x.degree + y.degree,
        f"{{{x.label},{y.label}}}",
    )


def superop_sum(ops: Sequence[SuperOp], label: str = "") -> SuperOp:
    ops = tuple(ops)

    def act(m: np.ndarray) -> np.ndarray:
        out = np.zeros_like(m)
        for op in ops:
            out = out + op.action(m)
        return out

    return SuperOp(act, max((op.degree for op in ops), default=0), label)


def left_mult(mat: np.ndarray, degree: int, label: str = "") -> SuperOp:
    return SuperOp(lambda m: mat @ m, degree, label)


def right_mult(mat: np.ndarray, degree: int, label: str = "") -> SuperOp:
    return SuperOp(lambda m: m @ mat, degree, label)


# ---- matrices on the Fock space -------------------------------------------


@lru_cache(maxsize=64)
def _dense_ladders(space: TruncatedFockSpace) -> dict[str, np.ndarray]:
    return {k: space.ladder_sparse(k).toarray() for k in ("a1", "a2", "a1_dag", "a2_dag", "N")}


def annihilator(space: TruncatedFockSpace, alpha: int) -> np.ndarray:
    return _dense_ladders(space)[f"a{alpha + 1}"]


def creator(space: TruncatedFockSpace, alpha: int) -> np.ndarray:
    return _dense_ladders(space)[f"a{alpha + 1}_dag"]


def annihilator_sparse(space: TruncatedFockSpace, alpha: int):
    """CSR form of annihilator; products with dense matrices return ndarrays."""
    return space.ladder_sparse(f"a{alpha + 1}")


def creator_sparse(space: TruncatedFockSpace, alpha: int):
    return space.ladder_sparse(f"a{alpha + 1}_dag")


@lru_cache(maxsize=256)
def coordinate_sparse(space: TruncatedFockSpace, lam: float, i: int):
    sig = PAULI[i]
    out = None
    for a, b in itertools.product(range(2), repeat=2):
        if sig[a, b] != 0:
            term = sig[a, b] * (creator_sparse(space, a) @ annihilator_sparse(space, b))
            out = term if out is None else out + term
    return (lam * out).tocsr()


def radius_values(space: TruncatedFockSpace, lam: float) -> np.ndarray:
    """Diagonal of r = lam (N + 1)."""
    return lam * (space.totals + 1.0)


def coordinate_matrix(space: TruncatedFockSpace, lam: float, i: int) -> np.ndarray:
    """x_i = lam a^+ sigma_i a on the Fock space (axes 0, 1, 2)."""
    sig = PAULI[i]
    out = np.zeros((space.dim, space.dim), dtype=complex)
    for a, b in itertools.product(range(2), repeat=2):
        if sig[a, b] != 0:
            out += sig[a, b] * (creator(space, a) @ annihilator(space, b))
    return lam * out


def diagonal_function(space: TruncatedFockSpace, lam: float, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """f(r) evaluated on each basis state."""
    return np.asarray(f(radius_values(space, lam)), dtype=complex)


# ---- super-operators -------------------------------------------------------


def super_ladder(space: TruncatedFockSpace, kind: str, alpha: int) -> SuperOp:
    """Hatted ladder: a/a_dag multiply from the left, b/b_dag from the right."""
    if kind == "a":
        return left_mult(annihilator(space, alpha), 1, f"a{alpha}")
    if kind == "a_dag":
        return left_mult(creator(space, alpha), 1, f"a{alpha}+")
    if kind == "b":
        return right_mult(annihilator(space, alpha), 1, f"b{alpha}")
    if kind == "b_dag":
        return right_mult(creator(space, alpha), 1, f"b{alpha}+")
    raise ValueError(f"unknown super ladder kind {kind!r}")


def elementwise(weights: np.ndarray, degree: int = 0, label: str = "") -> SuperOp:
    """Hadamard multiplication; used for functions of r acting symmetrically."""
    return SuperOp(lambda m: weights * m, degree, label)


def diag_superop(space: TruncatedFockSpace, lam: float, f: Callable[[np.ndarray], np.ndarray], side: Side) -> SuperOp:
    vals = diagonal_function(space, lam, f)
    if side == "left":
        return elementwise(vals[:, None] * np.ones((1, space.dim)), 0, "f(r)L")
    if side == "right":
        return elementwise(np.ones((space.dim, 1)) * vals[None, :], 0, "f(r)R")
    if side == "symmetric":
        return elementwise((vals[:, None] + vals[None, :]) / 2, 0, "f(r)")
    raise ValueError(f"unknown side {side!r}")


def radius_superop(space: TruncatedFockSpace, lam: float, power: int = 1, side: Side = "symmetric") -> SuperOp:
    return diag_superop(space, lam, lambda r: r**power, side)


def coordinate_superop(space: TruncatedFockSpace, lam: float, i: int, side: Side = "symmetric") -> SuperOp:
    x = coordinate_sparse(space, lam, i)
    if side == "left":
        return left_mult(x, 2, f"x{i}L")
    if side == "right":
        return right_mult(x, 2, f"x{i}R")
    if side == "symmetric":
        return SuperOp(lambda m: (x @ m + m @ x) / 2, 2, f"X{i}")
    raise ValueError(f"unknown side {side!r}")


def angular_momentum_superop(space: TruncatedFockSpace, lam: float, i: int) -> SuperOp:
    x = coordinate_sparse(space, lam, i)
    return SuperOp(lambda m: (x @ m - m @ x) / (2 * lam), 2, f"L{i}")


def angular_momentum_squared(space: TruncatedFockSpace, lam: float) -> SuperOp:
    ls = [angular_momentum_superop(space, lam, i) for i in range(3)]
    return superop_sum([l @ l for l in ls], "L^2")


# ---- inner product ----------------------------------------------------------


def hs_inner(phi: OpWave, psi: OpWave) -> complex:
    """<phi, psi> = 4 pi lam^3 Tr[(N+1) phi^+ psi]."""
    weights = phi.space.totals + 1.0
    # Tr[(N+1) A^+ B] = sum_{a,b} (N_a+1) conj(A_ba) B_ba
    return 4 * math.pi * phi.lam**3 * complex(np.einsum("a,ba,ba->", weights, phi.mat.conj(), psi.mat))


def hs_norm_sq(psi: OpWave) -> float:
    if not psi.is_balanced:
        warnings.warn("hs_norm_sq called on an unbalanced OpWave", RuntimeWarning, stacklevel=2)
    return float(hs_inner(psi, psi).real)


def hs_norm(psi: OpWave) -> float:
    return math.sqrt(max(hs_norm_sq(psi), 0.0))


def matrix_hs_norm(mat: np.ndarray, space: TruncatedFockSpace, lam: float) -> float:
    weights = space.totals + 1.0
    return math.sqrt(4 * math.pi * lam**3 * float(np.einsum("a,ba->", weights, np.abs(mat) ** 2)))


def relative_residual(lhs: np.ndarray, rhs: np.ndarray, ref: np.ndarray, space: TruncatedFockSpace, lam: float) -> float:
    """Weighted HS norm of lhs - rhs relative to the largest operand norm."""
    scale = max(
        matrix_hs_norm(lhs, space, lam),
        matrix_hs_norm(rhs, space, lam),
        matrix_hs_norm(ref, space, lam),
    )
    diff = matrix_hs_norm(lhs - rhs, space, lam)
    return diff / scale if scale > 0 else diff


# ---- states -----------------------------------------------------------------


@dataclass(frozen=True)
class AngularLabel:
    j: int
    m: int

    def __post_init__(self) -> None:
        if self.j < 0 or abs(self.m) > self.j:
            raise ValueError(f"invalid angular label j={self.j}, m={self.m}")


def random_balanced(space: TruncatedFockSpace, lam: float, rng: np.random.Generator, top_level: int | None = None) -> OpWave:
    """Random block-diagonal OpWave supported on levels n <= top_level."""
    top = space.n_max if top_level is None else top_level
    mat = np.zeros((space.dim, space.dim), dtype=complex)
    for n in range(0, top + 1):
        blk = space.block(n)
        size = n + 1
        mat[blk, blk] = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
    return OpWave(lam, mat, space)


def radial_diagonal(space: TruncatedFockSpace, coeffs: Sequence[complex]) -> np.ndarray:
    """Diagonal operator with value coeffs[n] on level n (zero past the sequence)."""
    vals = np.zeros(space.dim, dtype=complex)
    coeffs = np.asarray(coeffs, dtype=complex)
    for n in range(min(len(coeffs), space.n_max + 1)):
        vals[space.block(n)] = coeffs[n]
    return np.diag(vals)


def radial_opwave(space: TruncatedFockSpace, lam: float, coeffs: Sequence[complex]) -> OpWave:
    return OpWave(lam, radial_diagonal(space, coeffs), space)


def angular_quadruples(j: int, m: int) -> list[tuple[int, int, int, int]]:
    """All (m1, m2, n1, n2) with m1+m2 = n1+n2 = j and m1-m2-n1+n2 = 2m."""
    out = []
    for m1 in range(j + 1):
        for n1 in range(j + 1):
            m2, n2 = j - m1, j - n1
            if m1 - m2 - n1 + n2 == 2 * m:
                out.append((m1, m2, n1, n2))
    return out


def build_psi_jm(space: TruncatedFockSpace, lam: float, label: AngularLabel, coeffs: Sequence[complex]) -> OpWave:
    """Angular eigenfunction with radial part R(n) acting on the middle level n.

    Psi = lam^j sum (a1^+)^m1 (a2^+)^m2 / (m1! m2!) R (a1)^n1 (-a2)^n2 / (n1! n2!).
    Restricted to F_n the state carries R(n - j) and vanishes for n < j.
    """
    j, m = label.j, label.m
    a1, a2 = annihilator(space, 0), annihilator(space, 1)
    c1, c2 = creator(space, 0), creator(space, 1)
    mp = np.linalg.matrix_power
    radial = radial_diagonal(space, coeffs)
    out = np.zeros((space.dim, space.dim), dtype=complex)
    for m1, m2, n1, n2 in angular_quadruples(j, m):
        left = mp(c1, m1) @ mp(c2, m2) / (math.factorial(m1) * math.factorial(m2))
        right = mp(a1, n1) @ mp(-a2, n2) / (math.factorial(n1) * math.factorial(n2))
        out += left @ radial @ right
    return OpWave(lam, lam**j * out, space)


def radial_weight(j: int, n: int) -> int:
    """(n + j + 1) C(n + 2j + 1, 2j + 1)."""
    return (n + j + 1) * math.comb(n + 2 * j + 1, 2 * j + 1)


def radial_norm_formula(j: int, coeffs: Sequence[complex], lam: float, m: int | None = None) -> float:
    """Squared norm of Psi_jm from its radial coefficients.

    The bare sum is the m = j value; other m pick up C(2j, j + m) from the
    angular sum.
    """
    total = sum(radial_weight(j, n) * abs(c) ** 2 for n, c in enumerate(coeffs))
    angular = 1 if m is None else math.comb(2 * j, j + AngularLabel(j, m).m)
    return 4 * math.pi * lam ** (3 + 2 * j) / math.factorial(j) ** 2 * total * angular


def ball_volume(n: int, lam: float) -> float:
    return 4 * math.pi * lam**3 * sum((k + 1) ** 2 for k in range(n + 1))


def window_mask_2d(space: TruncatedFockSpace, degree: int) -> np.ndarray:
    mask = valid_window(space, degree)
    return mask[:, None] & mask[None, :]
