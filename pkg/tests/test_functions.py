import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hardyeq.functions import (FAMILIES, CachedPrimitive, ExtremizerSpec, ValidationError,
                               cos_mode, first_harmonic, make_family, make_profile_1d,
                               make_radial, smooth_step, sphere_surface_measure, window)

RADIAL_CASES = [
    ("gaussian", (), 3), ("exp_decay", (), 3), ("bump", (1.0, 2.0), 4),
    ("power_cutoff", (2.0,), 5), ("log_gaussian", (), 2),
    ("subcritical_extremizer_approx", (1e-3,), 3),
    ("log_extremizer_approx", (1e-2, 1.0), 2),
]
PROFILE_CASES = [
    ("exp_decay", ()), ("exp_decay", (2.0, 1.5)), ("power_window", (2.0, 0.5, 3.0)),
    ("bump", (1.0, 2.0)), ("extremizer_forward_approx", (1.0, 1e-2)),
    ("extremizer_backward_approx", (2.0, 1e-2)),
]


def test_sphere_measures():
    assert sphere_surface_measure(2) == pytest.approx(2 * math.pi)
    assert sphere_surface_measure(3) == pytest.approx(4 * math.pi)
    assert sphere_surface_measure(4) == pytest.approx(2 * math.pi**2)
    with pytest.raises(ValidationError):
        sphere_surface_measure(1)


def test_first_harmonic_constants():
    a = first_harmonic(4)
    area = sphere_surface_measure(4)
    assert a.sphere_norm_sq == pytest.approx(area / 4)
    assert a.sphere_deriv_norm_sq == pytest.approx(3 * area / 4)
    c = cos_mode(3)
    assert (c.sphere_norm_sq, c.sphere_deriv_norm_sq) == pytest.approx((math.pi, 9 * math.pi))


def test_smooth_step_shape():
    x = np.linspace(-1, 2, 3001)
    s, ds = smooth_step(x)
    assert np.all(s[x <= 0] == 0) and np.all(s[x >= 1] == 1)
    assert np.all(np.diff(s) >= 0)
    assert np.all(ds >= 0)
    assert smooth_step(np.array([0.5]))[0][0] == pytest.approx(0.5)


def test_window_plateau():
    w, dw = window(np.array([0.0, 5.0, 10.0]), 0.0, 10.0, 2.0)
    assert list(w) == [0.0, 1.0, 0.0]
    assert list(dw) == [0.0, 0.0, 0.0]


@pytest.mark.parametrize("name,params,n", RADIAL_CASES)
def test_radial_slope_matches_finite_difference(name, params, n):
    prof = make_radial(name, params, n)
    lo, hi = prof.support_t
    lo, hi = max(lo, -6.0), min(hi, 3.0)
    t = np.linspace(lo, hi, 413)[1:-1]
    h = 1e-6
    fd = (prof.value_t(t + h) - prof.value_t(t - h)) / (2 * h)
    scale = max(np.abs(prof.slope_t(t)).max(), 1e-12)
    assert np.max(np.abs(fd - prof.slope_t(t))) <= 1e-6 * scale


@pytest.mark.parametrize("name,params,n", RADIAL_CASES)
def test_radial_values_finite_far_out(name, params, n):
    prof = make_radial(name, params, n)
    t = np.array([-1e6, -800.0, -300.0, 300.0, 800.0, 1e6])
    with np.errstate(all="ignore"):
        assert np.all(np.isfinite(prof.value_t(t)))
        assert np.all(np.isfinite(prof.slope_t(t)))


def test_radial_deriv_in_r():
    prof = make_radial("gaussian")
    r = np.array([0.3, 1.0, 2.5])
    assert prof.value(r) == pytest.approx(np.exp(-r * r / 2))
    assert prof.deriv(r) == pytest.approx(-r * np.exp(-r * r / 2))


@pytest.mark.parametrize("name,params", PROFILE_CASES)
def test_primitives_are_consistent(name, params):
    g = make_profile_1d(name, params)
    a, b = g.support
    x = np.geomspace(max(a, 1e-3), min(b, 50.0), 200)[1:-1]
    total = g.forward(x) + g.tail(x)
    assert np.ptp(total) <= 1e-12 * max(1.0, np.abs(total).max())
    h = 1e-6 * x
    fd = (g.forward(x + h) - g.forward(x - h)) / (2 * h)
    assert np.max(np.abs(fd - g.value(x))) <= 1e-5 * max(np.abs(g.value(x)).max(), 1e-12)


def test_inverted_swaps_primitives():
    g = make_profile_1d("power_window", (2.0, 0.5, 3.0))
    inv = g.inverted()
    x = np.array([0.4, 1.0, 1.7])
    assert inv.value(x) == pytest.approx(g.value(1 / x) / x**2)
    assert inv.forward(x) == pytest.approx(g.tail(1 / x))
    assert inv.support == pytest.approx((1 / 3, 2.0))


def test_cached_primitive_matches_closed_form():
    F = CachedPrimitive(lambda x: np.cos(x), 0.0, 3.0)
    x = np.array([0.1, 1.0, 2.9, 3.0, 5.0])
    assert F(x) == pytest.approx(np.sin(np.minimum(x, 3.0)), abs=1e-12)
    assert F.total == pytest.approx(math.sin(3.0), abs=1e-13)


def test_validation_errors():
    with pytest.raises(ValidationError):
        make_family("nope")
    with pytest.raises(ValidationError):
        make_family("gaussian", (), 1)
    with pytest.raises(ValidationError):
        make_radial("subcritical_extremizer_approx", (1e-3,), 2)
    with pytest.raises(ValidationError):
        make_radial("log_extremizer_approx", (1e-15, 5.0))
    with pytest.raises(ValidationError):
        make_profile_1d("exp_decay", (-1.0,))
    with pytest.raises(ValidationError):
        ExtremizerSpec("logarithmic", 1.0, n=2, R=-1.0)


def test_all_families_build():
    for name in FAMILIES:
        params = {"subcritical_extremizer_approx": (1e-2,),
                  "log_extremizer_approx": (1e-2,)}.get(name, ())
        f = make_family(name, params, 3)
        assert f.label.startswith(name)


def test_extremizer_form_values():
    s = ExtremizerSpec("subcritical", 4 * math.pi, n=4)
    assert s.radial_value(np.array([2.0]))[0] == pytest.approx(0.5)
    assert s.expected_slope == pytest.approx(4 * math.pi)
    assert ExtremizerSpec("oned_forward", 3.0, p=2.0).expected_slope == 9.0


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 20.0), st.floats(-4.0, 2.0))
def test_scaling_shifts_log_coordinate(lam, t):
    prof = make_radial("gaussian")
    s = prof.scaled(lam)
    tt = np.array([t])
    assert s.value_t(tt)[0] == pytest.approx(prof.value_t(tt + math.log(lam))[0], rel=1e-12)
