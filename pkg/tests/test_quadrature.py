import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from hardyeq.quadrature import (DomainError, Integrand, QuadratureError, integrate_finite,
                                integrate_halfline, integrate_log_split, integrate_t)


def test_polynomial_and_trig():
    assert integrate_finite(lambda x: x * x, 0.0, 1.0).value == pytest.approx(1 / 3, abs=1e-14)
    assert integrate_finite(np.sin, 0.0, math.pi).value == pytest.approx(2.0, abs=1e-14)


def test_against_symbolic_oracles():
    x = sp.symbols("x", positive=True)
    cases = [
        (sp.exp(-x), lambda v: np.exp(-v), "exponential"),
        (x**2 * sp.exp(-x**2), lambda v: v * v * np.exp(-v * v), "exponential"),
        (1 / (1 + x**2), lambda v: 1 / (1 + v * v), "power"),
        (x**3 * sp.exp(-2 * x), lambda v: v**3 * np.exp(-2 * v), "exponential"),
    ]
    for expr, fn, hint in cases:
        exact = float(sp.integrate(expr, (x, 0, sp.oo)))
        res = integrate_halfline(fn, 1e-12, hint)
        assert res.value == pytest.approx(exact, rel=1e-11)


def test_endpoint_singularity_in_log_coordinates():
    res = integrate_finite(lambda x: 1 / np.sqrt(x), 0.0, 1.0, 1e-12)
    assert res.value == pytest.approx(2.0, rel=1e-11)


def test_log_form_resolves_logarithmic_singularity():
    g = Integrand(lambda x: 1 / (x * np.log(x) ** 2), log_form=lambda t: 1 / (t * t))
    res = integrate_finite(g, 0.0, 0.5, 1e-12)
    assert res.value == pytest.approx(1 / math.log(2), rel=1e-11)


def test_singular_points_are_split_not_sampled():
    def g(x):
        if np.any(x == 1.0):
            raise AssertionError("sampled the singular point")
        return np.abs(x - 1.0) ** -0.25
    res = integrate_finite(Integrand(g, singular_points=(1.0,)), 0.5, 2.0, 1e-9)
    exact = (0.5**0.75 + 1.0) / 0.75
    assert res.value == pytest.approx(exact, rel=1e-8)


def test_compact_support_hint():
    res = integrate_halfline(lambda x: x, 1e-12, ("compact_support", 1.0))
    assert res.value == pytest.approx(0.5, abs=1e-14)


def test_log_split_pieces_add_up():
    res = integrate_log_split(lambda r: r * np.exp(-r), 2.0, 1e-12)
    assert res.inner.value + res.outer.value == pytest.approx(1.0, rel=1e-12)
    assert res.value == pytest.approx(1.0, rel=1e-12)
    assert res.inner.value == pytest.approx(1 - 3 * math.exp(-2), rel=1e-11)


def test_algebraic_tails():
    # int 1/(1+t^2) over the line
    res = integrate_t(lambda t: 1 / (1 + t * t), -math.inf, math.inf, 1e-12, tails="algebraic")
    assert res.value == pytest.approx(math.pi, rel=1e-11)


def test_non_finite_integrand_raises():
    with pytest.raises(DomainError):
        integrate_finite(lambda x: np.where(x > 0.5, np.inf, 1.0), 0.0, 1.0)


def test_divergent_tail_raises():
    with pytest.raises(QuadratureError):
        integrate_t(lambda t: np.ones_like(t), 0.0, math.inf, 1e-9, window=(-50, 50))


def test_bad_tolerance():
    with pytest.raises(ValueError):
        integrate_finite(lambda x: x, 0.0, 1.0, rel_tol=1e-16)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.2, 5.0), st.floats(0.5, 3.0))
def test_error_estimate_monotone_in_tolerance(k, s):
    def g(x):
        return np.exp(-k * x) * np.cos(s * x) ** 2
    loose = integrate_halfline(g, 1e-6, "exponential")
    tight = integrate_halfline(g, 1e-11, "exponential")
    assert tight.error_estimate <= loose.error_estimate * (1 + 1e-12)
    assert abs(tight.value - loose.value) <= loose.error_estimate + tight.error_estimate + 1e-15


@settings(max_examples=25, deadline=None)
@given(st.floats(0.1, 10.0))
def test_gamma_moments(a):
    res = integrate_halfline(lambda x: x ** a * np.exp(-x), 1e-11, "exponential")
    assert res.value == pytest.approx(math.gamma(a + 1), rel=1e-9)
