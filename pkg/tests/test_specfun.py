import cmath

import mpmath
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from fuzzyqm.specfun import (
    GeneralSecondOrderEq,
    SpecialFunctionDomainError,
    bessel_j,
    confluent_limit_residual,
    euler_transform_residual,
    gamma,
    hyp1f1,
    hyp2f1,
    kummer_residual,
    log_gamma,
    pochhammer,
    reduce_general_equation,
    rgamma,
)

mpmath.mp.dps = 30

real = st.floats(-4.0, 4.0, allow_nan=False)


def _close(got, want, rel=1e-11, abs_=1e-13):
    want = complex(want)
    assert abs(got - want) <= rel * abs(want) + abs_, (got, want)


@given(st.floats(-5, 5), st.integers(0, 12))
def test_pochhammer_matches_mpmath(a, m):
    _close(pochhammer(a, m), mpmath.rf(a, m), abs_=1e-10)


def test_pochhammer_rejects_negative_count():
    with pytest.raises(ValueError):
        pochhammer(1.0, -1)


@given(real, st.floats(0.2, 5.0), st.floats(-6.0, 6.0))
def test_hyp1f1_against_mpmath(a, c, x):
    _close(hyp1f1(a, c, x), mpmath.hyp1f1(a, c, x), rel=1e-10, abs_=1e-12)


@pytest.mark.parametrize("a", [0, -1, -3, -6])
def test_hyp1f1_terminates_on_negative_integer(a):
    # 1F1(-n; c; x) is a Laguerre-type polynomial of degree n
    x, c = 2.3, 1.7
    _close(hyp1f1(a, c, x), mpmath.hyp1f1(a, c, x))


def test_hyp1f1_pole_in_denominator():
    with pytest.raises(SpecialFunctionDomainError):
        hyp1f1(0.5, -2, 1.0)
    # a terminates before c reaches zero, so the value is finite
    _close(hyp1f1(-1, -2, 1.0), 1 + 0.5)


@given(real, real, st.floats(0.3, 4.0), st.floats(-0.9, 0.9))
def test_hyp2f1_against_mpmath(a, b, c, x):
    _close(hyp2f1(a, b, c, x), mpmath.hyp2f1(a, b, c, x), rel=1e-9, abs_=1e-11)


def test_hyp2f1_polynomial_outside_disc():
    _close(hyp2f1(-3, 0.7, 1.4, 3.5), mpmath.hyp2f1(-3, 0.7, 1.4, 3.5))
    with pytest.raises(SpecialFunctionDomainError):
        hyp2f1(0.5, 0.5, 1.5, 1.2)


@given(st.floats(-8.0, 12.0), st.floats(-6.0, 6.0))
def test_log_gamma_against_mpmath(re, im):
    z = complex(re, im)
    assume(abs(z - round(re)) > 1e-3 or round(re) > 0)
    want = complex(mpmath.loggamma(mpmath.mpc(re, im)))
    _close(log_gamma(z), want, rel=1e-12, abs_=1e-11)


def test_log_gamma_principal_branch_far_left():
    z = complex(-7.5, 0.3)
    _close(log_gamma(z), complex(mpmath.loggamma(mpmath.mpc(-7.5, 0.3))), abs_=1e-11)


@pytest.mark.parametrize("n", [0, -1, -5])
def test_gamma_poles(n):
    with pytest.raises(SpecialFunctionDomainError):
        log_gamma(n)
    assert rgamma(n) == 0


@given(st.floats(0.1, 8.0))
def test_gamma_real(x):
    _close(gamma(x), mpmath.gamma(x), rel=1e-12)


@given(st.floats(-3.0, 4.0), st.floats(0.05, 12.0))
def test_bessel_against_mpmath(nu, x):
    assume(abs(nu - round(nu)) > 1e-6 or nu >= 0)
    _close(bessel_j(nu, x), mpmath.besselj(nu, x), rel=1e-9, abs_=1e-11)


@pytest.mark.parametrize("n", [1, 2, 5])
def test_bessel_negative_integer_order(n):
    _close(bessel_j(-n, 2.5), (-1) ** n * complex(mpmath.besselj(n, 2.5)))
    assert bessel_j(-n, 0) == 0


def test_bessel_at_origin():
    assert bessel_j(0, 0) == 1
    assert bessel_j(1.5, 0) == 0


@given(st.floats(-3, 3), st.floats(0.3, 4.0), st.floats(-3.0, 3.0))
def test_kummer_identity(a, c, x):
    assert kummer_residual(a, c, x) <= 1e-11 * max(1.0, abs(cmath.exp(x / 2)) * 10)


def test_confluent_limit_shrinks_with_b():
    r = [confluent_limit_residual(0.7, 1.9, 0.8, b) for b in (1e2, 1e3, 1e4)]
    assert r[0] > r[1] > r[2]
    assert 0.9 < r[1] / r[2] / 10 < 1.1


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(0.5, 3.0), st.floats(-0.6, 0.6))
def test_euler_transformation(a, b, c, x):
    assert euler_transform_residual(a, b, c, x) <= 1e-10 * max(1.0, abs(hyp2f1(a, b, c, x)))


def _ode_residual(eq, form, x, h=1e-4):
    y0, yp, ym = form.evaluate(x), form.evaluate(x + h), form.evaluate(x - h)
    d1 = (yp - ym) / (2 * h)
    d2 = (yp - 2 * y0 + ym) / (h * h)
    res = (eq.a0 * x + eq.b0) * d2 + (eq.a1 * x + eq.b1) * d1 + (eq.a2 * x + eq.b2) * y0
    return abs(res) / max(abs(y0), abs(d1), abs(d2), 1.0)


@given(
    st.floats(-2, 2),
    st.floats(0.3, 3.0),
    st.floats(-1.5, 1.5),
    st.floats(-2, 2),
    st.sampled_from([1, -1]),
)
def test_reduced_equation_solves_confluent_case(a1, b1, a2, b2, branch):
    eq = GeneralSecondOrderEq(1, 0, a1, b1, a2, b2)
    assume(abs(eq.discriminant_sq) > 1e-3)
    form = reduce_general_equation(eq, branch)
    assert form.kind == "confluent"
    assert _ode_residual(eq, form, 0.7) < 1e-5


def test_reduced_equation_bessel_case():
    eq = GeneralSecondOrderEq(1, 0, 2.0, 0.5, 1.0, 1.3)
    assert eq.discriminant_sq == 0
    form = reduce_general_equation(eq)
    assert form.kind == "bessel"
    assert _ode_residual(eq, form, 0.9) < 1e-5


def test_reduce_rejects_unsupported():
    with pytest.raises(NotImplementedError):
        reduce_general_equation(GeneralSecondOrderEq(1, 1, 0, 0, 0, 0))
    with pytest.raises(ValueError):
        reduce_general_equation(GeneralSecondOrderEq(1, 0, 1, 1, 1, 1), branch=2)
