import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hardyeq import sharpness as sh
from hardyeq.functions import ExtremizerSpec, make_family, make_profile_1d, sphere_surface_measure

EPS = (1e-2, 1e-4, 1e-8, 1e-16)


def test_quotient_examples():
    assert sh.rayleigh_quotient("T1_eq15", make_family("gaussian", (), 3)) == \
        pytest.approx(4 / 3, rel=1e-10)
    q = sh.rayleigh_quotient("T3_eq113", make_profile_1d("exp_decay"), {"p": 1.0})
    assert q == pytest.approx(4 * math.log(2), rel=1e-10)


def test_zero_main_term_is_undefined():
    from hardyeq.functions import zero_function
    with pytest.raises(sh.UndefinedQuotient):
        sh.rayleigh_quotient("T1_eq15", zero_function(3))


def test_sharp_values():
    assert sh.sharp_value("T1_eq15", {"n": 3}) == pytest.approx(4.0)
    assert sh.sharp_value("T1_eq15", {"n": 6}) == pytest.approx(0.25)
    assert sh.sharp_value("T2_eq19", {}) == pytest.approx(4.0)
    assert sh.sharp_value("T3_eq113", {"p": 0.5}) == pytest.approx(16.0)


@pytest.mark.parametrize("ident,params", [
    ("T1_eq15", {"n": 3}), ("T1_eq15", {"n": 4}), ("T2_eq19", {"n": 2, "R": 1.0}),
    ("T3_eq113", {"p": 2.0}), ("T3_eq117", {"p": 1.0}),
])
def test_sweeps_increase_towards_sharp_value(ident, params):
    res = sh.sharpness_sweep(ident, None, EPS, params)
    qs = [q for _, q in res.points]
    assert [e for e, _ in res.points] == sorted(EPS, reverse=True)
    assert all(b >= a for a, b in zip(qs, qs[1:]))
    assert max(qs) <= res.sharp_value * (1 + 1e-7)
    assert res.attained_fraction >= 0.98


def test_coarse_truncation_stays_well_below_sharp_value():
    # the cutoff energy caps the n = 3 quotient at eps = 1e-4
    f = make_family("subcritical_extremizer_approx", (1e-4, 0.5 * math.log(1e4)), 3)
    q = sh.rayleigh_quotient("T1_eq15", f) / 4.0
    assert 0.75 < q < 0.9


def test_single_point_sweep_stays_below_one():
    res = sh.single_point_sweep("T1_eq15", make_family("bump", (1.0, 2.0), 3), {})
    assert res.attained_fraction < 1.0
    res = sh.single_point_sweep("T3_eq117", make_profile_1d("exp_decay"), {"p": 1.0})
    assert res.attained_fraction == pytest.approx(0.5, rel=1e-9)


def test_sweep_rejects_property_violation():
    # a callable family whose quotient falls as eps shrinks
    def build(eps):
        return make_family("bump", (1.0, 1.0 + 10 * eps), 3)
    with pytest.raises(sh.SweepPropertyError):
        sh.sharpness_sweep("T1_eq15", build, (0.5, 0.05), {"n": 3})


def test_sweep_input_validation():
    with pytest.raises(ValueError):
        sh.sharpness_sweep("T1_eq15", None, [], {"n": 3})
    with pytest.raises(ValueError):
        sh.sharpness_sweep("T1_eq15", None, [2.0], {"n": 3})


def test_divergence_subcritical():
    d = sh.divergence_diagnostic(ExtremizerSpec("subcritical", 4 * math.pi, n=3),
                                 [(1e-1, 10.0), (1e-2, 100.0), (1e-3, 1e3)])
    assert d.integrals == pytest.approx([4 * math.pi * math.log(m) for m in (1e2, 1e4, 1e6)],
                                        rel=1e-10)
    assert d.fitted_slope == pytest.approx(4 * math.pi, rel=1e-6)
    assert d.passed


def test_divergence_zero_amplitude():
    d = sh.divergence_diagnostic(ExtremizerSpec("subcritical", 0.0, n=3),
                                 [(1e-1, 10.0), (1e-2, 100.0)])
    assert d.integrals == [0.0, 0.0] and d.passed


def test_divergence_logarithmic_both_sides():
    d = sh.divergence_diagnostic(ExtremizerSpec("logarithmic", 2 * math.pi, n=2, R=1.0),
                                 [(1e-2, 1.0), (1e-4, 1.0), (1e-6, 1.0), (1e-8, 1.0)])
    expect = [2 * math.pi * math.log(1 / d_) for d_ in (1e-2, 1e-4, 1e-6, 1e-8)]
    assert d.integrals == pytest.approx(expect, rel=1e-10)
    assert d.integrals_outer == pytest.approx(expect, rel=1e-10)
    assert d.passed and d.fitted_slope_outer == pytest.approx(2 * math.pi, rel=1e-6)


@pytest.mark.parametrize("kind,p", [("oned_forward", 1.0), ("oned_backward", 3.0)])
def test_divergence_one_dimensional(kind, p):
    d = sh.divergence_diagnostic(ExtremizerSpec(kind, -2.0, p=p),
                                 [(1e-1, 1.0), (1e-2, 1.0), (1e-3, 10.0), (1e-4, 1e3)])
    assert d.fitted_slope == pytest.approx(4.0, rel=1e-6) and d.passed


def test_divergence_window_validation():
    spec = ExtremizerSpec("subcritical", 1.0, n=3)
    with pytest.raises(ValueError):
        sh.divergence_diagnostic(spec, [(1.0, 2.0)])
    with pytest.raises(ValueError):
        sh.divergence_diagnostic(spec, [(2.0, 1.0), (1.0, 3.0)])


def test_r_sweep_main_term_independent_of_radius():
    f = make_family("gaussian", (), 2)
    reps = sh.r_sweep_T2(f, [0.5, 1.0, 2.0])
    assert all(r.passed for r in reps)
    assert sh.main_term_spread(reps) <= 1e-10


def test_r_sweep_constant_function():
    # a constant profile has f = f_R for every R
    from hardyeq.functions import Decay, ProductTestFunction, RadialProfile, constant_angular
    const = RadialProfile("const", lambda t: np.ones(np.shape(t)),
                          lambda t: np.zeros(np.shape(t)), Decay("constant"))
    f = ProductTestFunction(const, constant_angular(2), 2)
    for rep in sh.r_sweep_T2(f, [0.5, 1.0, 3.0]):
        assert rep.lhs == 0.0


def test_r_sweep_scaling_pair():
    f = make_family("exp_decay", (), 3)
    lam = 2.5
    a = sh.r_sweep_T2(f, [0.5, 1.0, 2.0])
    b = sh.r_sweep_T2(f.scaled(lam), [0.5 / lam, 1.0 / lam, 2.0 / lam])
    for x, y in zip(a, b):
        for k in ("lhs", "main_term", "remainder_term"):
            assert getattr(y, k) == pytest.approx(getattr(x, k), rel=1e-8)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["gaussian", "exp_decay", "bump"]), st.integers(3, 6),
       st.sampled_from([1 / 3, 2.0, 10.0]))
def test_radial_quotient_scale_invariant(name, n, lam):
    f = make_family(name, (), n)
    q0 = sh.rayleigh_quotient("T1_eq15", f)
    assert sh.rayleigh_quotient("T1_eq15", f.scaled(lam)) == pytest.approx(q0, rel=1e-9)
    assert q0 <= sh.sharp_value("T1_eq15", {"n": n})


@settings(max_examples=15, deadline=None)
@given(st.floats(1e-3, 0.5), st.integers(3, 5))
def test_quotient_never_exceeds_sharp_value(eps, n):
    f = make_family("subcritical_extremizer_approx", (eps, 0.5 * math.log(1 / eps)), n)
    assert sh.rayleigh_quotient("T1_eq15", f) <= sh.sharp_value("T1_eq15", {"n": n}) * (1 + 1e-9)


def test_amplitude_matches_sphere_measure():
    spec = ExtremizerSpec("subcritical", sphere_surface_measure(5), n=5)
    d = sh.divergence_diagnostic(spec, [(1e-1, 1.0), (1e-2, 1.0), (1e-3, 1.0), (1e-4, 1.0)])
    assert d.fitted_slope == pytest.approx(sphere_surface_measure(5), rel=1e-6)
