"""Named verification suites shared by the command line and the test gate.

Each suite returns CheckResult rows.  Random inputs come from
numpy.random.default_rng(seed), so a suite is reproducible for a fixed seed.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from .dynamics import (
    AXES,
    CheckResult,
    apply_velocity,
    auxiliary_identities,
    bound_eigenstate,
    e4_symmetry_suite,
    ehrenfest_check,
    lrl_algebra_suite,
    radial_power_identity_matrices,
    spectrum_from_symmetry,
    uncertainty_check,
    v2_h0_relation_check,
    velocity_commutator_check,
    velocity_superop,
)
from .fock import build_space, restrict_to_window
from .hamiltonian import bound_energy
from .opwave import (
    angular_momentum_superop,
    annihilator,
    coordinate_matrix,
    creator,
    levi_civita,
    radius_values,
    random_balanced,
)
from .ordering import (
    ladder_normal_power_diagonal,
    normal_exponential,
    normal_exponential_series_exact,
    normal_power_eigenvalue,
    normal_power_ratio,
)
from .specfun import confluent_limit_residual, gamma, kummer_residual

SUITES = ("algebra", "ordering", "specfun", "dynamics", "lrl")


def _max_abs(mat: np.ndarray) -> float:
    return float(np.max(np.abs(mat), initial=0.0))


# ---- algebra ----------------------------------------------------------------


def algebra_suite(n_max: int = 12, lam: float = 0.5, seed: int = 0, tol: float = 1e-12) -> list[CheckResult]:
    """Absolute entrywise residuals on the valid window."""
    sp = build_space(n_max)
    x = [coordinate_matrix(sp, lam, i) for i in AXES]
    r = np.diag(radius_values(sp, lam).astype(complex))
    eye = np.eye(sp.dim)
    win = lambda m, d: restrict_to_window(m, sp, d)  # noqa: E731

    worst = 0.0
    for i, j in itertools.product(AXES, repeat=2):
        k = 3 - i - j if i != j else 0
        e = levi_civita(i, j, k) if i != j else 0
        worst = max(worst, _max_abs(win(x[i] @ x[j] - x[j] @ x[i] - 2j * lam * e * x[k], 4)))
    rows = [CheckResult("coordinate commutators", worst, tol)]

    worst = 0.0
    for a, b in itertools.product(range(2), repeat=2):
        ca = annihilator(sp, a) @ creator(sp, b) - creator(sp, b) @ annihilator(sp, a)
        aa = annihilator(sp, a) @ annihilator(sp, b) - annihilator(sp, b) @ annihilator(sp, a)
        dd = creator(sp, a) @ creator(sp, b) - creator(sp, b) @ creator(sp, a)
        worst = max(worst, _max_abs(win(ca - (a == b) * eye, 2)), _max_abs(win(aa, 2)), _max_abs(win(dd, 2)))
    rows.append(CheckResult("canonical ladder relations", worst, tol))

    worst = max(_max_abs(win(xi @ r - r @ xi, 4)) for xi in x)
    worst = max(worst, _max_abs(win(r @ r - sum(xi @ xi for xi in x) - lam**2 * eye, 4)))
    rows.append(CheckResult("radius commutes and r^2 - x^2 = lam^2", worst, tol))

    rng = np.random.default_rng(seed)
    psi = random_balanced(sp, lam, rng)
    L = [angular_momentum_superop(sp, lam, i) for i in AXES]
    lm = [l.action(psi.mat) for l in L]
    vm = [apply_velocity(sp, lam, i, psi.mat) for i in AXES]
    worst_l = worst_v = 0.0
    for i, j in itertools.product(AXES, repeat=2):
        k = 3 - i - j if i != j else 0
        e = levi_civita(i, j, k) if i != j else 0
        ll = L[i].action(lm[j]) - L[j].action(lm[i]) - 1j * e * lm[k]
        lv = L[i].action(vm[j]) - velocity_superop(sp, lam, j).action(lm[i]) - 1j * e * vm[k]
        worst_l = max(worst_l, _max_abs(win(ll, 4)))
        worst_v = max(worst_v, _max_abs(win(lv, 4)))
    rows.append(CheckResult("angular momentum algebra", worst_l, tol))
    rows.append(CheckResult("velocity is a vector", worst_v, tol))

    worst = 0.0
    for alpha, power in itertools.product(range(2), range(1, 5)):
        (l1, r1), (l2, r2) = radial_power_identity_matrices(sp, lam, power, alpha)
        scale = lam**power * (n_max + 2) ** power
        worst = max(worst, _max_abs(win(l1 - r1, 2)) / scale, _max_abs(win(l2 - r2, 2)) / scale)
    rows.append(CheckResult("ladders shift functions of r", worst, tol))
    return rows


# ---- ordering ---------------------------------------------------------------


def ordering_suite(n_top: int = 30, samples: int = 50, seed: int = 0, tol: float = 1e-13) -> list[CheckResult]:
    mismatches = 0
    for n in range(n_top + 1):
        for k in range(n + 1):
            brute = ladder_normal_power_diagonal(n - n // 2, n // 2, k)
            if brute != math.perm(n, k) or normal_power_eigenvalue(k, n, 1.0) != float(brute):
                mismatches += 1
    rows = [CheckResult("normal powers vs ladder products (exact)", float(mismatches), 0.0)]

    mismatches = 0
    for n in range(n_top + 1):
        for k in range(1, n_top + 1):
            exact = Fraction(1, math.prod(range(n + 1, n + k + 1)))
            if normal_power_ratio(-k, n) != exact or normal_power_eigenvalue(-k, n, 1.0) != float(exact):
                mismatches += 1
    rows.append(CheckResult("negative normal powers vs exact rationals", float(mismatches), 0.0))

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        beta = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        lam = float(rng.uniform(0.05, 1.0))
        n = int(rng.integers(0, 40))
        closed = normal_exponential(beta, n, lam)
        series = normal_exponential_series_exact(beta, n, lam)
        worst = max(worst, abs(closed - series) / max(abs(closed), abs(series), 1e-300))
    rows.append(CheckResult("normal exponential", worst, tol))
    return rows


# ---- special functions --------------------------------------------------------


def specfun_suite(tol: float = 1e-12) -> list[CheckResult]:
    grid = [
        (complex(a), complex(c), complex(x))
        for a in (-2.5, -0.5, 0.3, 1.0, 2.7)
        for c in (0.5, 1.5, 3.0, 4.2)
        for x in (-3.0, -0.7, 0.4, 1.9, 3.5)
    ]
    worst = max(kummer_residual(a, c, x) / max(1.0, abs(np.exp(x.real / 2))) for a, c, x in grid)
    rows = [CheckResult(f"Kummer transformation ({len(grid)} points)", worst, tol)]

    zs = [complex(re, im) for re in (-3.7, -1.2, 0.3, 1.5, 4.4, 9.1) for im in (-2.0, 0.0, 0.8, 3.1)]
    worst = max(abs(gamma(z + 1) - z * gamma(z)) / abs(gamma(z + 1)) for z in zs)
    rows.append(CheckResult("Gamma recurrence", worst, tol))

    a, c, x = 0.7, 1.9, 0.8
    r3 = confluent_limit_residual(a, c, x, 1e3)
    r4 = confluent_limit_residual(a, c, x, 1e4)
    slope = math.log10(r3 / r4)
    rows.append(CheckResult("confluent limit order (|slope - 1|)", abs(slope - 1.0), 0.05))
    return rows


# ---- dynamics -----------------------------------------------------------------


def dynamics_suite(n_max: int = 10, lam: float = 0.5, q: float = 1.0, count: int = 20, seed: int = 0, tol: float = 1e-10) -> list[CheckResult]:
    sp = build_space(n_max)
    rng = np.random.default_rng(seed)
    worst: dict[str, float] = {}

    def bump(name: str, value: float) -> None:
        worst[name] = max(worst.get(name, 0.0), value)

    for _ in range(count):
        psi = random_balanced(sp, lam, rng)
        bump("uncertainty relation", max(uncertainty_check(i, j, psi) for i in AXES for j in AXES))
        bump("velocity components commute", velocity_commutator_check(psi))
        bump("V^2 against H0", v2_h0_relation_check(psi))
        for row in e4_symmetry_suite(psi, tol):
            bump(row.name, row.residual)
        bump("Ehrenfest relation, unit coefficients", ehrenfest_check(q, psi, "unit"))
        bump("Ehrenfest relation, corrected coefficients", ehrenfest_check(q, psi, "corrected"))
    return [CheckResult(name, value, tol) for name, value in worst.items()]


# ---- LRL vector ---------------------------------------------------------------

LRL_STATES = ((1, 0, 0), (2, 0, 0), (2, 1, 1), (2, 1, -1), (3, 1, 0), (3, 2, 1))


def lrl_suite(
    lam: float = 0.5,
    q: float = 1.0,
    n_max: int = 22,
    identity_n_max: int = 10,
    seed: int = 0,
    tol: float = 1e-7,
) -> list[CheckResult]:
    sp = build_space(n_max)
    rows: list[CheckResult] = []
    by_n: dict[int, list] = {}
    for n, j, m in LRL_STATES:
        energy, psi, gate = bound_eigenstate(sp, lam, q, n, j, m)
        by_n.setdefault(n, []).append((energy, psi, gate))
    for n, items in sorted(by_n.items()):
        energy = items[0][0]
        verdict, checks = lrl_algebra_suite(energy, q, lam, [p for _, p, _ in items], tol=tol)
        rows.extend(CheckResult(f"n={n} {c.name}", c.residual, c.tolerance) for c in checks)
        rows.append(CheckResult(f"n={n} Casimir C2' - q^2", abs(verdict.casimir2 - q * q), tol))
        rows.append(CheckResult(f"n={n} algebra is so(4)", 0.0 if verdict.algebra == "so4" else 1.0, 0.0))
    worst = 0.0
    for n in range(1, 6):
        for qq in (1.0, -1.0):
            e_low, e_high = spectrum_from_symmetry(qq, lam, n)
            level = bound_energy("I" if qq > 0 else "II", n, 0, qq, lam).value
            got = e_low if qq > 0 else e_high
            worst = max(worst, abs(got - level) / abs(level))
    rows.append(CheckResult("symmetry-derived energies", worst, 1e-12))

    isp = build_space(identity_n_max)
    psi = random_balanced(isp, lam, np.random.default_rng(seed))
    worst = 0.0
    for case in auxiliary_identities(isp, lam):
        worst = max(worst, case.residual(psi))
    rows.append(CheckResult("auxiliary operator identities", worst, 1e-10))
    return rows


def run_suite(name: str, seed: int = 0, n_max: int | None = None) -> list[CheckResult]:
    """Run one suite; n_max overrides the Fock truncation where a suite has one."""
    sized = {} if n_max is None else {"n_max": n_max}
    if name == "algebra":
        return algebra_suite(seed=seed, **sized)
    if name == "ordering":
        return ordering_suite(seed=seed)
    if name == "specfun":
        return specfun_suite()
    if name == "dynamics":
        return dynamics_suite(seed=seed, **sized)
    if name == "lrl":
        return lrl_suite(seed=seed, **sized)
    raise ValueError(f"unknown suite {name!r}")
