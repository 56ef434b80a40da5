import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzyqm.dynamics import (
    AXES,
    AuxOperatorSet,
    apply_velocity,
    auxiliary_identities,
    bound_eigenstate,
    casimir_factor,
    classify_algebra,
    e4_symmetry_suite,
    ehrenfest_check,
    ehrenfest_lhs,
    ehrenfest_rhs,
    finite_difference,
    free_hamiltonian,
    leibniz_correction,
    lrl_algebra_suite,
    lrl_superop,
    lrl_superop_rewritten,
    residual,
    second_difference,
    spectrum_from_symmetry,
    uncertainty_check,
    v2_h0_relation_check,
    vacuum_shift_coefficient,
    velocity_commutator_check,
    velocity_hermiticity_residual,
    velocity_superop,
    w_normalization_factor,
    window_project,
)
from fuzzyqm.fock import build_space
from fuzzyqm.hamiltonian import bound_energy, solve_radial_closed_form
from fuzzyqm.opwave import (
    AngularLabel,
    OpWave,
    build_psi_jm,
    hs_inner,
    commutator,
    coordinate_matrix,
    coordinate_superop,
    radius_values,
    random_balanced,
)
from fuzzyqm.scattering import so31_casimir_tau

SPACE = build_space(10)
LAM = 0.5
seeds = st.integers(0, 2**32 - 1)


def _psi(seed, lam=LAM, top=None):
    return random_balanced(SPACE, lam, np.random.default_rng(seed), top)


# ---- velocity as a gradient -------------------------------------------------


def test_finite_differences():
    r = np.linspace(1.0, 4.0, 7)
    assert np.allclose(finite_difference(lambda x: x**2, 0.3)(r), 2 * r)
    assert np.allclose(second_difference(lambda x: x**3, 0.3)(r), 6 * r)


@pytest.mark.parametrize("i", AXES)
def test_velocity_acts_as_gradient_on_radial_functions(i):
    r = radius_values(SPACE, LAM)
    f = lambda x: np.exp(-x) + 0.3 * x**3  # noqa: E731
    fmat = np.diag(f(r)).astype(complex)
    grad = np.diag(finite_difference(f, LAM)(r) / r)
    want = -1j * coordinate_matrix(SPACE, LAM, i) @ grad
    assert residual(apply_velocity(SPACE, LAM, i, fmat), want, OpWave(LAM, fmat, SPACE), 2) < 1e-13


@pytest.mark.parametrize("i", AXES)
def test_velocity_of_r_squared_is_exact(i):
    r = radius_values(SPACE, LAM)
    fmat = np.diag(r**2).astype(complex)
    want = -2j * coordinate_matrix(SPACE, LAM, i)
    assert residual(apply_velocity(SPACE, LAM, i, fmat), want, OpWave(LAM, fmat, SPACE), 2) < 1e-13


@given(seeds, st.sampled_from(AXES), st.sampled_from(AXES))
def test_velocity_of_coordinate_is_constant(seed, i, j):
    # V^i (x^j Psi) - x^j (V^i Psi) = -i delta Psi for balanced Psi
    psi = _psi(seed)
    x = coordinate_superop(SPACE, LAM, j, "left")
    v = velocity_superop(SPACE, LAM, i)
    got = v.action(x.action(psi.mat)) - x.action(v.action(psi.mat))
    kx = leibniz_correction(SPACE, LAM, i, coordinate_matrix(SPACE, LAM, j), psi.mat)
    want = -1j * (i == j) * psi.mat + kx
    assert residual(got, want, psi, 4) < 1e-11


@given(seeds, seeds, st.sampled_from(AXES))
def test_velocity_hermitian(s1, s2, i):
    assert velocity_hermiticity_residual(_psi(s1, top=7), _psi(s2, top=7), i) < 1e-12


# ---- deformed Leibniz rule --------------------------------------------------


@given(seeds, st.sampled_from(AXES))
def test_leibniz_rule(seed, i):
    rng = np.random.default_rng(seed)
    a = random_balanced(SPACE, LAM, rng).mat
    b = random_balanced(SPACE, LAM, rng).mat
    v = lambda m: apply_velocity(SPACE, LAM, i, m)  # noqa: E731
    lhs = v(a @ b)
    rhs = v(a) @ b + a @ v(b) + leibniz_correction(SPACE, LAM, i, a, b)
    assert residual(lhs, rhs, OpWave(LAM, a @ b, SPACE), 4) < 1e-11


@given(seeds, st.sampled_from(AXES))
def test_leibniz_correction_vanishes_for_identity(seed, i):
    a = _psi(seed).mat
    eye = np.eye(SPACE.dim, dtype=complex)
    assert np.abs(leibniz_correction(SPACE, LAM, i, eye, a)).max() < 1e-13
    assert np.abs(leibniz_correction(SPACE, LAM, i, a, eye)).max() < 1e-13


@given(seeds, st.sampled_from(AXES))
def test_symmetric_leibniz_correction_with_coordinate(seed, i):
    # half the sum of both orderings with x^i is i lam^2 H0 Psi
    psi = _psi(seed)
    x = coordinate_matrix(SPACE, LAM, i)
    k_sym = 0.5 * (leibniz_correction(SPACE, LAM, i, x, psi.mat) + leibniz_correction(SPACE, LAM, i, psi.mat, x))
    h0 = free_hamiltonian(SPACE, LAM).action(psi.mat)
    assert residual(k_sym, 1j * LAM**2 * h0, psi, 4) < 1e-11


@pytest.mark.parametrize("lam", [0.25, 0.5, 1.0])
def test_leibniz_correction_scales_as_lam_squared(lam):
    # for a fixed Fock-space matrix the correction carries lam^2 relative to V
    psi = _psi(2, lam=lam)
    x = coordinate_matrix(SPACE, lam, 0)
    k = leibniz_correction(SPACE, lam, 0, x, psi.mat)
    ref = leibniz_correction(SPACE, 1.0, 0, coordinate_matrix(SPACE, 1.0, 0), psi.mat)
    assert np.allclose(k, ref, atol=1e-12)


# ---- uncertainty relation and [V, V] -----------------------------------------


@given(seeds, st.sampled_from(AXES), st.sampled_from(AXES))
def test_uncertainty_relation(seed, i, j):
    assert uncertainty_check(i, j, _psi(seed)) < 1e-10


@pytest.mark.parametrize("lam", [0.4, 0.2, 0.1])
def test_uncertainty_on_free_eigenstate(lam):
    energy = 0.7
    coeffs = solve_radial_closed_form("generic_plus", 0, lam, 0.0, 14, energy=energy).coeffs
    psi = build_psi_jm(SPACE, lam, AngularLabel(0, 0), coeffs)
    h0 = free_hamiltonian(SPACE, lam).action(psi.mat)
    assert residual(h0, energy * psi.mat, psi, 2) < 1e-12
    lhs = commutator(velocity_superop(SPACE, lam, 0), coordinate_superop(SPACE, lam, 0)).action(psi.mat)
    assert residual(lhs, -1j * (1 - lam**2 * energy) * psi.mat, psi, 4) < 1e-12
    # the departure from the canonical value is lam^2 E
    assert residual(lhs, -1j * psi.mat, psi, 4) / lam**2 == pytest.approx(energy, rel=1e-10)


@given(seeds)
def test_velocities_commute_on_balanced(seed):
    assert velocity_commutator_check(_psi(seed)) < 1e-10


@pytest.mark.parametrize("j,m", [(0, 0), (1, 1), (2, -1)])
def test_velocities_commute_on_angular_states(j, m):
    psi = build_psi_jm(SPACE, LAM, AngularLabel(j, m), [1.0, -0.4, 0.3, 0.1])
    assert velocity_commutator_check(psi) < 1e-10


def test_velocities_fail_to_commute_off_balance():
    # a one-sided wave function: a single creation operator
    psi = OpWave(LAM, SPACE.ladder_sparse("a1_dag").toarray().astype(complex), SPACE)
    assert not psi.is_balanced
    assert velocity_commutator_check(psi) > 1e-3


@given(seeds)
def test_velocity_square_and_free_hamiltonian(seed):
    assert v2_h0_relation_check(_psi(seed)) < 1e-10


@given(seeds)
def test_free_energy_expectation_within_band(seed):
    psi = _psi(seed, top=7)
    h0 = psi.with_mat(free_hamiltonian(SPACE, LAM).action(psi.mat))
    e = (hs_inner(psi, h0) / hs_inner(psi, psi)).real
    assert -1e-12 <= e <= 2 / LAM**2 + 1e-12


# ---- four-dimensional symmetry -----------------------------------------------


@given(seeds)
@settings(max_examples=8)
def test_e4_symmetry(seed):
    for row in e4_symmetry_suite(_psi(seed)):
        assert row.passed, row


def test_e4_casimir_on_angular_state():
    psi = build_psi_jm(SPACE, LAM, AngularLabel(1, 0), [0.5, 1.0, -0.2])
    rows = {r.name: r for r in e4_symmetry_suite(psi)}
    assert rows["C2 = 1/lam^2"].passed


# ---- Ehrenfest ----------------------------------------------------------------


@given(seeds, st.floats(-3, 3))
def test_ehrenfest_constant_potential(seed, c):
    psi = _psi(seed)
    u = lambda r: c + 0 * r  # noqa: E731
    for i in AXES:
        lhs = ehrenfest_lhs(SPACE, LAM, i, u, psi.mat)
        rhs = ehrenfest_rhs(SPACE, LAM, i, u, psi.mat, "corrected")
        assert np.abs(window_project(lhs, SPACE, 2)).max() < 1e-12
        assert np.abs(window_project(rhs, SPACE, 2)).max() < 1e-12 * max(1.0, abs(c))


@pytest.mark.parametrize(
    "potential",
    [lambda r: -1.0 / r, lambda r: r**2, lambda r: np.exp(-r)],
    ids=["coulomb", "harmonic", "exponential"],
)
@given(seed=seeds)
@settings(max_examples=10)
def test_ehrenfest_corrected_coefficients(potential, seed):
    assert ehrenfest_check(1.0, _psi(seed), "corrected", potential) < 1e-12


@given(seeds)
@settings(max_examples=10)
def test_ehrenfest_unit_coefficients_do_not_hold(seed):
    assert ehrenfest_check(1.0, _psi(seed), "unit") > 1e-3


def test_unit_form_touches_undefined_vacuum_value():
    psi = _psi(3)
    assert vacuum_shift_coefficient(SPACE, LAM, 0, psi.mat, "unit") > 1e-3
    assert vacuum_shift_coefficient(SPACE, LAM, 0, psi.mat, "corrected") < 1e-12


@given(seeds, st.sampled_from(AXES))
def test_w_normalization(seed, i):
    c = w_normalization_factor(_psi(seed), i)
    assert c == pytest.approx(0.5, abs=1e-12)


# ---- auxiliary operators -----------------------------------------------------


@given(seeds, st.floats(-2, 2))
@settings(max_examples=10)
def test_aux_set_relations(seed, energy):
    psi = _psi(seed)
    aux = AuxOperatorSet(SPACE, LAM, energy)
    m = psi.mat
    w_big = aux.W().action(m)
    assert residual(w_big, aux.r().action(m) * 2 / LAM - aux.zeta().action(m), psi, 2) < 1e-12
    assert residual(aux.Wp().action(m), w_big + aux.omega * aux.r().action(m), psi, 2) < 1e-12
    for k in AXES:
        diff = aux.Wp_k(k).action(m) - aux.W_k(k).action(m)
        assert residual(diff, aux.omega * aux.X(k).action(m), psi, 2) < 1e-12
    assert aux.eta == pytest.approx(2 / LAM + aux.omega)


def test_auxiliary_identity_registry():
    psi = _psi(11)
    cases = auxiliary_identities(SPACE, LAM)
    assert len(cases) > 50
    bad = [(c.name, c.residual(psi)) for c in cases if c.residual(psi) > 1e-10]
    assert not bad


@given(seeds, st.floats(-1.5, 1.5), st.sampled_from(AXES))
@settings(max_examples=10)
def test_lrl_rewritten_form(seed, q, k):
    psi = _psi(seed)
    a = lrl_superop(SPACE, LAM, q, k).action(psi.mat)
    b = lrl_superop_rewritten(SPACE, LAM, q, k, energy=-0.2).action(psi.mat)
    assert residual(a, b, psi, 4) < 1e-11


# ---- LRL algebra --------------------------------------------------------------


@pytest.mark.parametrize("energy,expected", [(-0.3, "so4"), (1.0, "so31"), (0.0, "e3"), (2 / LAM**2, "e3"), (9.0, "so4")])
def test_classification(energy, expected):
    assert classify_algebra(energy, LAM) == expected


def test_scattering_energy_is_so31_with_tau_above_one():
    e = 1.3
    assert classify_algebra(e, LAM) == "so31"
    assert so31_casimir_tau(e, 1.0, LAM) > 1
    assert casimir_factor(e, LAM) < 0


@pytest.fixture(scope="module")
def ground():
    sp = build_space(20)
    states = [bound_eigenstate(sp, LAM, 1.0, 1, 0, 0)]
    return states


def test_lrl_ground_state(ground):
    energy, psi, gate = ground[0]
    assert gate < 1e-8
    assert energy == pytest.approx(bound_energy("I", 1, 0, 1.0, LAM).value, rel=1e-10)
    verdict, checks = lrl_algebra_suite(energy, 1.0, LAM, [psi])
    assert verdict.algebra == "so4"
    assert verdict.casimir2 == pytest.approx(1.0, abs=1e-7)
    assert abs(verdict.casimir1) < 1e-7
    failing = [c for c in checks if not c.passed]
    assert not failing


def test_lrl_gate_rejects_non_eigenstates():
    psi = _psi(5)
    with pytest.raises(ValueError):
        lrl_algebra_suite(-0.3, 1.0, LAM, [psi])
    with pytest.raises(ValueError):
        lrl_algebra_suite(-0.3, 1.0, LAM, [])


@pytest.mark.parametrize("lam", [0.1, 0.5, 1.0])
@pytest.mark.parametrize("q", [1.0, -1.0])
def test_symmetry_derived_spectrum(lam, q):
    for n in range(1, 6):
        low, high = spectrum_from_symmetry(q, lam, n)
        if q > 0:
            assert low == bound_energy("I", n, 0, q, lam).value
        else:
            assert high == bound_energy("II", n, 0, q, lam).value
        # both roots satisfy n^2 (lam^2 E^2 - 2E) = q^2
        for e in (low, high):
            assert n * n * (lam**2 * e * e - 2 * e) == pytest.approx(q * q, rel=1e-10)


def test_symmetry_spectrum_validation():
    with pytest.raises(ValueError):
        spectrum_from_symmetry(1.0, LAM, 0)


def test_casimir_factor_at_levels():
    for n in range(1, 5):
        e = bound_energy("I", n, 0, 1.0, LAM).value
        assert casimir_factor(e, LAM) == pytest.approx(1 / n**2, rel=1e-12)
