"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line.

The lines are collected and printed in the terminal summary.
"""

import math
import time

import mpmath
import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from fuzzyqm.dynamics import auxiliary_identities, radial_power_identity_matrices, spectrum_from_symmetry
from fuzzyqm.fock import build_space, restrict_to_window
from fuzzyqm.hamiltonian import (
    bound_energy,
    build_radial_hamiltonian,
    diagonalize,
    eigen_residual,
    reflection_check,
    solve_radial_closed_form,
)
from fuzzyqm.opwave import AngularLabel, build_psi_jm, hs_norm_sq, radial_norm_formula, random_balanced
from fuzzyqm.scattering import enumerate_poles, s_matrix, standard_s_matrix
from fuzzyqm.suites import algebra_suite, dynamics_suite, lrl_suite, ordering_suite, specfun_suite


def report(number, title, passed, detail):
    line = f"[{number:02d}] {'PASS' if passed else 'FAIL'}  {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert passed, line


def suite_report(number, title, rows):
    failing = [r for r in rows if not r.passed]
    worst = max(rows, key=lambda r: r.residual / r.tolerance if r.tolerance else (0 if r.residual == 0 else math.inf))
    detail = f"{len(rows)} checks, worst {worst.name} = {worst.residual:.2e}"
    if failing:
        detail += "; failing: " + ", ".join(f"{r.name} ({r.residual:.3g})" for r in failing)
    report(number, title, not failing, detail)


def test_01_bound_spectrum_attractive():
    start = time.perf_counter()
    pairs = diagonalize(build_radial_hamiltonian(0, 1.0, 0.5, 300), 3, "lowest")
    elapsed = time.perf_counter() - start
    errs = [abs(e - bound_energy("I", n, 0, 1.0, 0.5).value) / abs(bound_energy("I", n, 0, 1.0, 0.5).value) for n, (e, _) in zip((1, 2, 3), pairs)]
    report(1, "bound spectrum, attractive family", max(errs) <= 1e-6 and elapsed <= 10, f"max rel err {max(errs):.2e} in {elapsed:.2f}s")


def test_02_bound_spectrum_repulsive_mirror():
    pairs = diagonalize(build_radial_hamiltonian(0, -1.0, 0.5, 300), 3, "highest")
    errs = []
    for n, (e, _) in zip((1, 2, 3), pairs):
        mirror = 2 / 0.25 - bound_energy("I", n, 0, 1.0, 0.5).value
        errs.append(abs(e - mirror) / mirror)
    report(2, "mirror spectrum, repulsive family", max(errs) <= 1e-6, f"max rel err {max(errs):.2e}")


def _lam2_coefficient(n, q=1.0):
    lams = (1e-2, 5e-3, 2.5e-3)
    base = -(q**2) / (2 * n * n)
    c = [(spectrum_from_symmetry(q, lam, n)[0] - base) / lam**2 for lam in lams]
    # c(lam) = c0 + c1 lam^2 + ...; two Richardson steps with ratio 2
    r1 = [(4 * c[k + 1] - c[k]) / 3 for k in range(2)]
    return (16 * r1[1] - r1[0]) / 15


def test_03_small_length_correction_stated_coefficient():
    q = 1.0
    rel = [abs(_lam2_coefficient(n, q) / (q**4 / (24 * n**4)) - 1) for n in (1, 2)]
    detail = (
        f"extrapolated/stated - 1 = {rel[0]:.3f} (n=1), {rel[1]:.3f} (n=2); "
        "the closed-form spectrum expands with q^4/(8 n^4), see companion test"
    )
    report(3, "small-length correction against q^4/(24 n^4)", max(rel) <= 0.05, detail)


@pytest.mark.parametrize("n", [1, 2])
def test_03_companion_coefficient_from_taylor_series(n):
    # oracle: Taylor coefficient of (1 - sqrt(1 + (q lam/n)^2)) / lam^2 in lam^2, computed by mpmath
    q = 1.0
    with mpmath.workdps(40):
        series = mpmath.taylor(lambda t: (1 - mpmath.sqrt(1 + q * q * t / n**2)) / t if t else -(q**2) / (2 * n**2), 0, 2)
    assert _lam2_coefficient(n, q) == pytest.approx(float(series[1]), rel=1e-4)


def test_04_degeneracy_across_angular_momentum():
    worst = 0.0
    for n in (1, 2, 3, 4):
        vals = []
        for j in range(n):
            pairs = diagonalize(build_radial_hamiltonian(j, 1.0, 0.5, 300), n - j, "lowest")
            vals.append(pairs[n - j - 1][0])
        worst = max(worst, (max(vals) - min(vals)) / abs(vals[0]))
    report(4, "j-degeneracy of levels n = 1..4", worst <= 1e-6, f"max spread {worst:.2e}")


def test_05_algebra_suite():
    suite_report(5, "algebra suite at n_max=12", algebra_suite(n_max=12))


def test_06_ordering_suite():
    suite_report(6, "ordering suite", ordering_suite(n_top=30, samples=50))


def test_07_special_function_suite():
    suite_report(7, "special functions", specfun_suite())


def test_08_norm_formula_against_trace():
    sp = build_space(10)
    rng = np.random.default_rng(8)
    worst = 0.0
    for j in (0, 1, 2):
        for _ in range(20):
            deg = int(rng.integers(1, 10 - j))
            coeffs = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
            psi = build_psi_jm(sp, 0.5, AngularLabel(j, j), coeffs)
            worst = max(worst, abs(hs_norm_sq(psi) / radial_norm_formula(j, coeffs, 0.5) - 1))
    report(8, "radial norm formula vs weighted trace", worst <= 1e-12, f"max rel diff {worst:.2e} over 60 states")


def test_09_dynamics_suite():
    rows = dynamics_suite(n_max=10, count=20, seed=0)
    suite_report(9, "dynamics suite, 20 random balanced states", rows)


def test_10_lrl_suite():
    suite_report(10, "LRL symmetry on eigenstates", lrl_suite())


def test_11_auxiliary_identities():
    sp = build_space(10)
    psi = random_balanced(sp, 0.5, np.random.default_rng(11))
    cases = auxiliary_identities(sp, 0.5)
    worst = max(c.residual(psi) for c in cases)
    shift = 0.0
    for alpha in range(2):
        for power in range(1, 6):
            for lhs, rhs in radial_power_identity_matrices(sp, 0.5, power, alpha):
                scale = np.abs(rhs).max()
                shift = max(shift, np.abs(restrict_to_window(lhs - rhs, sp, 2)).max() / scale)
    report(
        11,
        "auxiliary operator identities",
        worst <= 1e-10 and shift <= 1e-10,
        f"{len(cases)} identities, worst {worst:.2e}; ladder shift identities {shift:.2e}",
    )


def test_12_scattering():
    lam, alpha = 0.5, 1.0
    grid = [2 / lam**2 * (k + 0.5) / 100 for k in range(100)]
    unit = max(abs(abs(s_matrix(j, e, alpha, lam)) - 1) for j in (0, 1, 2) for e in grid)
    poles = max(res for a in (1.0, -1.0) for j in (0, 1, 2) for _, res in enumerate_poles(j, a, lam, 5))
    limit = max(
        abs(s_matrix(j, e, alpha, 1e-4) - standard_s_matrix(j, e, alpha)) / abs(standard_s_matrix(j, e, alpha))
        for j in (0, 1, 2)
        for e in (0.05, 0.5, 2.0, 5.0)
    )
    mismatch = 0.0
    for j in (0, 1):
        for a, which in ((1.0, "lowest"), (-1.0, "highest")):
            pairs = diagonalize(build_radial_hamiltonian(j, a, lam, 300), 3, which)
            for (level, _), (e, _) in zip(enumerate_poles(j, a, lam, 3), pairs):
                mismatch = max(mismatch, abs(e - level.value) / abs(level.value))
    ok = unit <= 1e-12 and poles <= 1e-12 and limit <= 1e-6 and mismatch <= 1e-6
    detail = f"||S|-1| {unit:.1e}, pole residual {poles:.1e}, small-lam limit {limit:.1e}, poles vs eigenvalues {mismatch:.1e}"
    report(12, "scattering", ok, detail)


def test_13_reflection_symmetry():
    worst = max(reflection_check(n, j, 1.0, 0.5) for n in (1, 2, 3) for j in range(min(n, 3)))
    report(13, "reflection between families", worst <= 1e-10, f"max {worst:.2e}")


def test_14_closed_form_eigenvectors():
    worst = 0.0
    for n in (1, 2, 3):
        for j in range(n):
            e = bound_energy("I", n, j, 1.0, 0.5).value
            vec = solve_radial_closed_form("boundI", j, 0.5, 1.0, 60, n=n)
            worst = max(worst, eigen_residual(build_radial_hamiltonian(j, 1.0, 0.5, 60 + j), vec.coeffs, e))
    report(14, "closed-form bound eigenvectors", worst <= 1e-8, f"max eigen-residual {worst:.2e}")
