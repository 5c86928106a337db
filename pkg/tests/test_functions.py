"""Tests for test functions, their classes, and Gaussian functionals."""

import math

import numpy as np
import pytest
from scipy import integrate

from src.errors import QuadratureError
from src.functions import (
    CutoffPsi,
    TestFunction,
    abs_moment,
    class_membership,
    derivative,
    gaussian_expectation,
    get_test_function,
    phi,
    rho,
    rho_many,
    rho_product,
    rho_square,
)


def _quad_rho(g, sigma):
    value, _ = integrate.quad(
        lambda x: float(g(np.array([x]))[0]) * math.exp(-0.5 * (x / sigma) ** 2) / (sigma * math.sqrt(2 * math.pi)),
        -40 * sigma, 40 * sigma, points=[0.0], limit=400,
    )
    return value


def test_abs_moments():
    assert abs_moment(0.0) == 1.0
    assert abs_moment(2.0) == 1.0
    assert abs_moment(4.0) == 3.0
    assert abs_moment(6.0) == 15.0
    assert abs_moment(1.0) == pytest.approx(math.sqrt(2.0 / math.pi), rel=1e-14)
    assert abs(abs_moment(2.0) - abs_moment(1.0) ** 2 - (1.0 - 2.0 / math.pi)) < 1e-12
    with pytest.raises(ValueError):
        abs_moment(-1.0)


@pytest.mark.parametrize("r", [0.5, 1.0, 1.5, 3.0])
def test_rho_of_power_is_moment(r):
    for sigma in (0.3, 1.0, 2.5):
        assert rho(TestFunction.power(r), sigma) == pytest.approx(abs_moment(r) * sigma ** r, rel=1e-9)


def test_rho_at_zero_sigma():
    g = TestFunction.bounded_c2("cos_bump")
    assert rho(g, 0.0) == 0.0
    with pytest.raises(ValueError):
        rho(g, -1.0)


@pytest.mark.parametrize("name", ["cos_bump", "rational_square"])
def test_rho_of_bounded_c2_matches_quadrature(name):
    g = TestFunction.bounded_c2(name)
    for sigma in (0.2, 1.0, 3.0):
        assert rho(g, sigma) == pytest.approx(_quad_rho(g, sigma), rel=1e-7)


def test_cos_bump_closed_form():
    # E[(1 - cos σU)/2] = (1 - exp(-σ²/2))/2
    g = TestFunction.bounded_c2("cos_bump")
    sigmas = np.array([0.1, 0.7, 1.9])
    np.testing.assert_allclose(rho_many(g, sigmas), 0.5 * (1.0 - np.exp(-0.5 * sigmas ** 2)), rtol=1e-9)


def test_square_indicator_closed_form_matches_quadrature():
    g = TestFunction.square_indicator(0.8)
    for sigma in (0.5, 1.0, 2.0):
        value, _ = integrate.quad(
            lambda x: x * x * math.exp(-0.5 * (x / sigma) ** 2) / (sigma * math.sqrt(2 * math.pi)), -0.8, 0.8
        )
        assert rho(g, sigma) == pytest.approx(value, rel=1e-8)


def test_power_cutoff_below_power():
    g = TestFunction.power_cutoff(1.0, 0.5)
    sigmas = np.array([0.05, 0.5, 2.0])
    values = rho_many(g, sigmas)
    assert np.all(values <= abs_moment(1.0) * sigmas + 1e-12)
    # σ small against η: the cutoff is invisible
    assert values[0] == pytest.approx(abs_moment(1.0) * 0.05, rel=1e-9)


def test_rho_square_and_product_of_powers():
    sigmas = np.array([0.5, 1.0])
    h = TestFunction.power(0.75)
    np.testing.assert_allclose(rho_square(h, sigmas), abs_moment(1.5) * sigmas ** 1.5)
    np.testing.assert_allclose(rho_product(h, TestFunction.power(1.25), sigmas), abs_moment(2.0) * sigmas ** 2)


def test_gaussian_expectation_vectorized():
    sigmas = np.array([[0.5, 1.0], [2.0, 0.0]])
    out = gaussian_expectation(lambda x: x ** 4, sigmas)
    assert out.shape == (2, 2)
    np.testing.assert_allclose(out, 3.0 * sigmas ** 4, rtol=1e-10, atol=1e-14)


def test_cutoff_sandwich():
    psi = CutoffPsi(0.5)
    x = np.linspace(-2.0, 2.0, 4001)
    values = psi(x)
    assert np.all((values >= 0.0) & (values <= 1.0))
    assert np.all(values[np.abs(x) <= 0.5] == 1.0)
    assert np.all(values[np.abs(x) >= 1.0] == 0.0)
    assert np.all(np.diff(values[x >= 0.0]) <= 1e-12)
    assert np.all(CutoffPsi()(x) == 1.0)
    with pytest.raises(ValueError):
        CutoffPsi(0.0)


def test_phi():
    x = np.array([0.0, 0.5, 2.0])
    np.testing.assert_array_equal(phi(0.0, x), [0.0, 1.0, 1.0])
    np.testing.assert_allclose(phi(2.0, x), [0.0, 0.25, 1.0])


def test_class_membership():
    m = class_membership(TestFunction.power(1.5))
    assert m.exact_power == 1.5 and m.equivalent_power == 1.5
    assert not m.bounded and m.c1 and not m.c2
    assert m.in_class("E''", 1.2) and not m.in_class("E'''", 1.5)

    cos_bump = class_membership(TestFunction.bounded_c2("cos_bump"))
    assert cos_bump.equivalent_power is None
    assert cos_bump.in_class("E''", 2.0)
    assert not cos_bump.in_class("E'", 2.0)

    rational = class_membership(TestFunction.bounded_c2("rational_square"))
    assert rational.in_class("E'", 2.0) and rational.bounded and rational.even and rational.c2

    indicator = class_membership(TestFunction.square_indicator(0.3))
    assert not indicator.continuous
    assert indicator.sup_norm == pytest.approx(0.09)

    assert class_membership(TestFunction.power_cutoff(1.0, 0.5)).sup_norm == 1.0


def test_derivatives_match_finite_differences():
    x = np.array([-1.3, -0.4, 0.2, 0.9])
    eps = 1e-6
    for f in (TestFunction.power(2.5), TestFunction.power_cutoff(2.0, 0.6),
              TestFunction.bounded_c2("cos_bump"), TestFunction.bounded_c2("rational_square")):
        numeric = (f(x + eps) - f(x - eps)) / (2 * eps)
        np.testing.assert_allclose(derivative(f)(x), numeric, rtol=1e-5, atol=1e-8)
    with pytest.raises(ValueError):
        derivative(TestFunction.square_indicator(0.5))


def test_function_factory():
    assert get_test_function("power:r=1.5") == TestFunction.power(1.5)
    assert get_test_function("power_cutoff:r=1,eta=0.5") == TestFunction.power_cutoff(1.0, 0.5)
    assert get_test_function("bounded_c2:name=cos_bump").label == "bounded_c2:name=cos_bump"
    assert get_test_function("square_indicator:u=0.3").u == 0.3
    with pytest.raises(ValueError, match="Unknown test function kind"):
        get_test_function("cubic:r=3")
    with pytest.raises(ValueError):
        get_test_function("power:r=1,eta=2")
    with pytest.raises(ValueError):
        get_test_function("power:r=-1")
    with pytest.raises(ValueError):
        get_test_function("bounded_c2:name=sinc")


def test_unconverged_hermite_falls_back_for_every_sigma():
    # |x|^{1/2} is not smooth at 0, so Gauss–Hermite stalls for every σ
    sigmas = np.linspace(0.5, 2.0, 100)
    out = gaussian_expectation(lambda x: np.sqrt(np.abs(x)), sigmas)
    np.testing.assert_allclose(out, abs_moment(0.5) * np.sqrt(sigmas), rtol=1e-7)


def test_gaussian_expectation_raises_when_no_rule_converges():
    with pytest.raises(QuadratureError):
        gaussian_expectation(lambda x: np.full(np.shape(x), np.nan), np.linspace(0.5, 2.0, 100))
