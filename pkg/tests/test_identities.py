import dataclasses
import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from hardyeq import identities as ids
from hardyeq.functions import (Decay, ProductTestFunction, RadialProfile, ValidationError,
                               constant_angular, make_family, make_profile_1d, zero_function,
                               zero_profile_1d)

PI32 = math.pi**1.5
LOG2 = math.log(2.0)

# frozen closed-form values; test_frozen_values_match_symbolic re-derives them
FROZEN = {
    "gauss_T1_n3": (PI32 / 2, 3 * PI32 / 2, PI32),
    "exp_T3_forward_p1": (LOG2 / 2, 0.5, (1 - LOG2) / 2),
    "exp_T3_backward_p1": (0.125, 0.25, 0.125),
    "loggauss_T2_n2_R1": (0.5 * math.pi * (4 * math.sqrt(math.pi) - 2 * math.sqrt(2 * math.pi)),
                          2 * math.pi * math.sqrt(math.pi / 2)),
}


@pytest.fixture(scope="module")
def symbolic():
    x, r = sp.symbols("x r", positive=True)
    T = sp.symbols("T", real=True)
    oo = sp.oo
    phi = sp.exp(-r**2 / 2)
    s3 = 4 * sp.pi
    gauss = (sp.Rational(1, 4) * s3 * sp.integrate(phi**2, (r, 0, oo)),
             s3 * sp.integrate(sp.diff(phi, r) ** 2 * r**2, (r, 0, oo)),
             s3 * sp.integrate((sp.diff(phi, r) + phi / (2 * r)) ** 2 * r**2, (r, 0, oo)))
    F = 1 - sp.exp(-x)
    fwd = (sp.Rational(1, 4) * sp.integrate(F**2 / x**2, (x, 0, oo)),
           sp.integrate(sp.exp(-2 * x), (x, 0, oo)),
           sp.integrate((sp.exp(-x) - F / (2 * x)) ** 2, (x, 0, oo)))
    G = sp.exp(-x)
    bwd = (sp.Rational(1, 4) * sp.integrate(G**2, (x, 0, oo)),
           sp.integrate(x**2 * G**2, (x, 0, oo)),
           sp.integrate(x**2 * (G - G / (2 * x)) ** 2, (x, 0, oo)))
    # log-gaussian in n = 2, R = 1: Phi(t) = exp(-t^2), u = -t, Phi(tau) = 1
    s2 = 2 * sp.pi
    logg = (s2 / 4 * sp.integrate((sp.exp(-T**2) - 1) ** 2 / T**2, (T, -oo, oo)),
            s2 * sp.integrate((2 * T * sp.exp(-T**2)) ** 2, (T, -oo, oo)))
    return {"gauss_T1_n3": gauss, "exp_T3_forward_p1": fwd, "exp_T3_backward_p1": bwd,
            "loggauss_T2_n2_R1": logg}


def test_frozen_values_match_symbolic(symbolic):
    for key, values in FROZEN.items():
        for frozen, expr in zip(values, symbolic[key]):
            assert float(expr) == pytest.approx(frozen, rel=1e-14)


def test_gaussian_radial_identity():
    rep = ids.eval_T1(make_family("gaussian", (), 3))
    lhs, main, rem = FROZEN["gauss_T1_n3"]
    assert rep.lhs == pytest.approx(lhs, abs=1e-9)
    assert rep.main_term == pytest.approx(main, abs=1e-9)
    assert rep.remainder_term == pytest.approx(rem, abs=1e-9)
    assert rep.passed and rep.identity_id == "T1_eq15"
    conj = ids.eval_T1(make_family("gaussian", (), 3), form="conjugated")
    assert conj.identity_id == "T1_eq16" and conj.passed
    assert conj.remainder_term == pytest.approx(rem, abs=1e-9)


def test_one_dimensional_oracles():
    e = make_profile_1d("exp_decay", ())
    for rep, key in ((ids.eval_T3_forward(e, 1.0), "exp_T3_forward_p1"),
                     (ids.eval_T3_backward(e, 1.0), "exp_T3_backward_p1")):
        got = (rep.lhs, rep.main_term, rep.remainder_term)
        assert got == pytest.approx(FROZEN[key], abs=1e-9)
        assert rep.passed


def test_logarithmic_oracle():
    rep = ids.eval_T2(make_family("log_gaussian", (), 2), 1.0)
    lhs, main = FROZEN["loggauss_T2_n2_R1"]
    assert rep.lhs == pytest.approx(lhs, rel=1e-10)
    assert rep.main_term == pytest.approx(main, rel=1e-10)
    assert rep.passed


def test_zero_function_gives_zero_terms():
    for rep in (ids.eval_T1(zero_function(3)), ids.eval_T2(zero_function(2), 1.0),
                ids.eval_T3_forward(zero_profile_1d(), 1.0),
                ids.eval_T3_backward(zero_profile_1d(), 2.0)):
        assert (rep.lhs, rep.main_term, rep.remainder_term) == (0.0, 0.0, 0.0)
        assert rep.passed


def test_report_serializes_declared_fields_only():
    rep = ids.eval_T1(make_family("gaussian", (), 3))
    assert tuple(rep.to_dict()) == ids.REPORT_FIELDS


def test_inadmissible_decay_rejected():
    with pytest.raises(ValidationError):
        ids.eval_T1(make_family("power_cutoff", (2.0,), 6))


def test_dimension_preconditions():
    with pytest.raises(ValueError):
        ids.eval_T1(make_family("gaussian", (), 2))
    with pytest.raises(ValueError):
        ids.eval_T2(make_family("gaussian", (), 2), 0.0)
    with pytest.raises(ValueError):
        ids.eval_T3_forward(make_profile_1d("bump"), -1.0)


@pytest.mark.parametrize("R", [0.3, 1.0, 1.5, 7.0])
def test_taylor_guard_is_invisible(R):
    f = make_family("gaussian", (), 3)
    unguarded = ProductTestFunction(dataclasses.replace(f.radial, guard_radius=1e-12),
                                    f.angular, 3)
    a, b = ids.eval_T2(f, R), ids.eval_T2(unguarded, R)
    assert a.lhs == pytest.approx(b.lhs, rel=1e-10)
    assert a.remainder_term == pytest.approx(b.remainder_term, rel=1e-10)


def test_inner_outer_split_adds_up():
    rep = ids.eval_T2(make_family("exp_decay", (), 3), 2.0)
    inner, outer = ids.split_reports_T2(rep)
    assert inner["lhs"] + outer["lhs"] == pytest.approx(rep.lhs, rel=1e-14)
    assert inner["main"] + outer["main"] == pytest.approx(rep.main_term, rel=1e-14)
    # each side satisfies the identity on its own
    for side in (inner, outer):
        assert side["lhs"] == pytest.approx(side["main"] - side["remainder"], rel=1e-8)


def test_ibp_routes():
    direct, via = ids.cross_check_ibp("T1_eq15", make_family("gaussian", (), 3))
    assert direct == pytest.approx(2 * PI32, rel=1e-9)
    assert via == pytest.approx(direct, rel=1e-9)
    assert ids.cross_check_ibp("T1_eq15", zero_function(3)) == (0.0, 0.0)
    direct, via = ids.cross_check_ibp("T3_eq113", make_profile_1d("exp_decay"), {"p": 1.0})
    assert direct == pytest.approx(2 * LOG2, rel=1e-9)
    assert via == pytest.approx(2 * LOG2, rel=1e-9)
    d, v = ids.cross_check_ibp("T2_eq19", make_family("bump", (0.7, 1.6), 2), {"R": 1.0})
    assert d == pytest.approx(v, rel=1e-9)
    d, v = ids.cross_check_ibp("T3_eq117", make_profile_1d("bump"), {"p": 2.0})
    assert d == pytest.approx(v, rel=1e-9)


def test_corollary_inequalities():
    rep = ids.eval_T1(make_family("gaussian", (), 3))
    assert ids.verify_corollary_inequalities(rep)
    assert rep.main_term - rep.lhs == pytest.approx(PI32, rel=1e-9)


def test_divergent_lhs_is_classified():
    # phi = 1 - exp(-r): |d_r f| is square integrable in R^3, f/|x| is not
    prof = RadialProfile(
        "saturating",
        lambda t: -np.expm1(-np.exp(np.asarray(t, dtype=float))),
        lambda t: np.exp(np.asarray(t, dtype=float) - np.exp(np.asarray(t, dtype=float))),
        Decay("saturating"))
    f = ProductTestFunction(prof, constant_angular(3), 3)
    with pytest.raises(ids.ExtremizerDivergence) as info:
        ids.eval_T1(f)
    assert math.isfinite(info.value.main_term) and info.value.main_term > 0


def test_backward_extremizer_remainder_shrinks():
    ratios = []
    for eps in (1e-2, 1e-4, 1e-8):
        g = make_profile_1d("extremizer_backward_approx", (1.0, eps, 0.5 * math.log(1 / eps)))
        rep = ids.eval_T3_backward(g, 1.0)
        ratios.append(rep.remainder_term / rep.main_term)
    assert ratios[0] > ratios[1] > ratios[2]
    assert ratios[2] < 0.1


def test_full_gradient_gap_is_spherical_part():
    f = make_family("bump", (1.0, 2.0), 4, angular="first_harmonic")
    gap, spherical = ids.full_gradient_gap(f)
    assert gap == pytest.approx(spherical, rel=1e-8)
    assert spherical > 0
    rep = ids.dirichlet_decomposition(f)
    assert rep.passed


def test_radial_full_gradient_equals_radial_report():
    f = make_family("power_cutoff", (2.0,), 5)
    a, b = ids.eval_T1(f), ids.eval_T1_fullgradient(f)
    for k in ("lhs", "main_term", "remainder_term"):
        assert getattr(a, k) == pytest.approx(getattr(b, k), rel=1e-12)


def test_non_attainment_margin():
    cases = [ids.eval_T1(make_family(n, (), 3)) for n in ("gaussian", "exp_decay", "bump")]
    cases += [ids.eval_T2(make_family("gaussian", (), 2), R) for R in (0.5, 2.0)]
    cases += [ids.eval_T3_forward(make_profile_1d("bump"), p) for p in (0.5, 4.0)]
    for rep in cases:
        assert rep.remainder_term > 10 * rep.quad_error_budget


def test_boundary_control_bounds():
    rng = np.random.default_rng(3)
    R = rng.uniform(0.2, 4.0, 1000)
    r = R * rng.uniform(0.01, 0.999, 1000)
    for name, params in (("gaussian", ()), ("bump", (0.5, 3.0)), ("power_cutoff", (2.0,))):
        lip, logb = ids.boundary_control_check(make_family(name, params, 3).radial, r, R)
        assert lip.all() and logb.all()


def test_weighted_lemma_pieces_match_report():
    f = make_family("exp_decay", (), 4)
    pc = ids.lemma_pieces("T1_eq15", f)
    rep = ids.eval_T1(f)
    assert pc.norm_u_sq * 1.0 == pytest.approx(rep.lhs / 1.0, rel=1e-12)
    assert pc.norm_v_sq == pytest.approx(rep.main_term, rel=1e-12)


def test_threshold_is_configurable():
    f = make_family("gaussian", (), 3)
    rep = ids.eval_T1(f, threshold=1e-7)
    assert rep.passed == (rep.residual_rel <= 1e-7)
    loose = ids.eval_T1(f, rel_tol=1e-4, threshold=1e-30)
    assert loose.passed == (loose.residual_rel <= 1e-30)


T1_FAMS = ["gaussian", "exp_decay", "bump", "power_cutoff", "log_gaussian"]


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(T1_FAMS), st.integers(3, 7), st.sampled_from([None, "first_harmonic"]))
def test_radial_identity_residual(name, n, ang):
    # power_cutoff(alpha) needs alpha > (n - 2) / 2
    f = make_family(name, (n / 2,) if name == "power_cutoff" else (), n, angular=ang)
    for rep in (ids.eval_T1(f), ids.eval_T1(f, form="conjugated"), ids.eval_T1_fullgradient(f)):
        assert rep.residual_rel <= 1e-7 and rep.passed


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(T1_FAMS), st.integers(2, 4), st.floats(0.2, 5.0))
def test_logarithmic_identity_residual(name, n, R):
    f = make_family(name, (), n)
    a, b = ids.eval_T2(f, R), ids.eval_T2(f, R, form="conjugated")
    assert a.passed and b.passed
    assert a.remainder_term == pytest.approx(b.remainder_term, rel=1e-8)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(T1_FAMS[:3]), st.floats(0.3, 3.0), st.floats(0.1, 10.0))
def test_logarithmic_scaling_invariance(name, R, lam):
    f = make_family(name, (), 2)
    a, b = ids.eval_T2(f, R), ids.eval_T2(f.scaled(lam), R / lam)
    for k in ("lhs", "main_term", "remainder_term", "cross_term"):
        assert getattr(b, k) == pytest.approx(getattr(a, k), rel=1e-8)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(T1_FAMS[:4]), st.integers(3, 6), st.floats(0.1, 10.0))
def test_radial_scaling_covariance(name, n, lam):
    f = make_family(name, (), n)
    a, b = ids.eval_T1(f), ids.eval_T1(f.scaled(lam))
    for k in ("lhs", "main_term", "remainder_term"):
        assert getattr(b, k) == pytest.approx(lam ** (2 - n) * getattr(a, k), rel=1e-8)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.1, 1.0), st.floats(1.5, 6.0), st.floats(0.25, 5.0))
def test_one_dimensional_duality(a, b, p):
    g = make_profile_1d("bump", (a, b))
    back = ids.eval_T3_backward(g, p)
    fwd = ids.eval_T3_forward(g.inverted(), p)
    for k in ("lhs", "main_term", "remainder_term", "cross_term"):
        assert getattr(fwd, k) == pytest.approx(getattr(back, k), rel=1e-8)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.25, 4.0), st.booleans())
def test_one_dimensional_forms_agree(p, backward):
    g = make_profile_1d("power_window", (2.0, 0.5, 3.0))
    fn = ids.eval_T3_backward if backward else ids.eval_T3_forward
    a, b = fn(g, p), fn(g, p, form="derivative")
    assert a.passed and b.passed
    assert a.remainder_term == pytest.approx(b.remainder_term, rel=1e-8)
