"""Sharp-but-unattained constants: Rayleigh-quotient sweeps and divergence fits."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .functions import ExtremizerSpec, make_family, make_profile_1d
from .identities import (DEFAULT_REL_TOL, DEFAULT_THRESHOLD, IdentityReport, eval_T2, evaluate,
                         lhs_constant)
from .quadrature import integrate_finite

SLOPE_TOL = 1e-6
FIT_TOL = 1e-8
DEFAULT_RAMP_FRACTION = 0.5

# the extremizer-approximant family that belongs to each identity
SWEEP_FAMILIES = {
    "T1": "subcritical_extremizer_approx",
    "T2": "log_extremizer_approx",
    "T3_eq113": "extremizer_forward_approx",
    "T3_eq117": "extremizer_backward_approx",
}


class UndefinedQuotient(ArithmeticError):
    pass


class SweepPropertyError(AssertionError):
    """A sweep left the inequality direction or stopped increasing."""

    def __init__(self, message: str, result: "SweepResult"):
        super().__init__(message)
        self.result = result


def sharp_value(identity_id: str, params: dict) -> float:
    """Supremum of the Rayleigh quotient, i.e. the squared sharp constant."""
    return 1.0 / lhs_constant(identity_id, params)


def _quotient(rep: IdentityReport) -> tuple[float, float]:
    if rep.main_term == 0.0:
        raise UndefinedQuotient(f"{rep.identity_id}: derivative norm is zero")
    k = lhs_constant(rep.identity_id, rep.params)
    q = rep.lhs / k / rep.main_term
    lhs, main = rep.terms["lhs"], rep.terms["main"]
    rel = (lhs.error / abs(lhs.value) if lhs.value else 0.0) + main.error / abs(main.value)
    return q, abs(q) * rel


def rayleigh_quotient(identity_id: str, f, params: dict | None = None,
                      rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Unscaled left-hand norm divided by the derivative norm.

    For ``T1`` this is ``|f/|x||^2 / |d_r f|^2``; its supremum over
    admissible ``f`` is ``sharp_value(identity_id, params)``.
    """
    params = dict(params or {})
    if identity_id.startswith("T1"):
        params.setdefault("n", f.dimension)
    return _quotient(evaluate(identity_id, f, params, rel_tol))[0]


@dataclass
class SweepResult:
    identity_id: str
    family_label: str
    points: list[tuple[float, float]]
    sharp_value: float
    attained_fraction: float
    budgets: list[float] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {"identity_id": self.identity_id, "family_label": self.family_label,
                "points": [[e, q] for e, q in self.points], "sharp_value": self.sharp_value,
                "attained_fraction": self.attained_fraction}

    def plot_rows(self) -> list[tuple[float, float]]:
        return [(math.log(e), q) for e, q in self.points]


def _family_builder(identity_id: str, family: str, params: dict,
                    ramp_fraction: float) -> Callable[[float], object]:
    def width(eps):
        return ramp_fraction * math.log(1.0 / eps)

    if identity_id.startswith("T1"):
        return lambda eps: make_family(family, (eps, width(eps)), params["n"])
    if identity_id.startswith("T2"):
        return lambda eps: make_family(family, (eps, params.get("R", 1.0), width(eps)),
                                       params["n"])
    return lambda eps: make_profile_1d(family, (params["p"], eps, width(eps)))


def sharpness_sweep(identity_id: str, family: str | Callable[[float], object] | None,
                    eps_list: Sequence[float], params: dict,
                    rel_tol: float = DEFAULT_REL_TOL,
                    ramp_fraction: float = DEFAULT_RAMP_FRACTION,
                    check: bool = True) -> SweepResult:
    """Rayleigh quotients along a truncated extremizer family.

    ``family`` is a family name (``None`` picks the matching one) or a
    callable ``eps -> test function``.  Named families cut off smoothly over
    ``ramp_fraction * log(1/eps)`` in ``log r`` at each end; a ramp width that
    grows with the window is what lets the quotient approach the sharp value
    (fixed-width ramps cap it below 1 through their own Dirichlet energy).

    With ``check`` the sweep must stay below the sharp value and be
    nondecreasing as ``eps`` decreases, both up to the quadrature budget.
    """
    if not eps_list:
        raise ValueError("eps_list must not be empty")
    if any(not 0 < e < 1 for e in eps_list):
        raise ValueError(f"truncation parameters must lie in (0, 1), got {list(eps_list)}")
    params = dict(params)
    key = identity_id if identity_id.startswith("T3") else identity_id[:2]
    if family is None:
        family = SWEEP_FAMILIES[key]
    build = (_family_builder(identity_id, family, params, ramp_fraction)
             if isinstance(family, str) else family)
    sharp = sharp_value(identity_id, params)
    points, budgets, label = [], [], None
    for eps in sorted(set(eps_list), reverse=True):
        f = build(eps)
        q, b = _quotient(evaluate(identity_id, f, params, rel_tol))
        points.append((float(eps), q))
        budgets.append(b)
        label = label or (family if isinstance(family, str) else f.label)
    result = SweepResult(identity_id, label, points, sharp, points[-1][1] / sharp, budgets)
    if check:
        for (e, q), b in zip(points, budgets):
            if q > sharp + b:
                raise SweepPropertyError(
                    f"quotient {q!r} at eps={e:g} exceeds the sharp value {sharp!r}", result)
        for (e0, q0), (e1, q1), b0, b1 in zip(points, points[1:], budgets, budgets[1:]):
            if q1 < q0 - (b0 + b1):
                raise SweepPropertyError(
                    f"quotient decreased from {q0!r} (eps={e0:g}) to {q1!r} (eps={e1:g})",
                    result)
    return result


def single_point_sweep(identity_id: str, f, params: dict,
                       rel_tol: float = DEFAULT_REL_TOL) -> SweepResult:
    """Degenerate sweep of one fixed function (no truncation parameter)."""
    params = dict(params)
    if identity_id.startswith("T1"):
        params.setdefault("n", f.dimension)
    q, b = _quotient(evaluate(identity_id, f, params, rel_tol))
    sharp = sharp_value(identity_id, params)
    return SweepResult(identity_id, f.label, [(1.0, q)], sharp, q / sharp, [b])


# --------------------------------------------------------------------------
# divergence of the exact extremizer forms
# --------------------------------------------------------------------------

@dataclass
class DivergenceReport:
    identity_id: str
    windows: list[tuple[float, float]]
    integrals: list[float]
    log_windows: list[float]
    fitted_slope: float
    expected_slope: float
    fit_residual: float
    passed: bool
    # the logarithmic form diverges on both sides of the sphere
    integrals_outer: list[float] | None = None
    fitted_slope_outer: float | None = None

    def to_dict(self) -> dict:
        out = {"identity_id": self.identity_id, "windows": [list(w) for w in self.windows],
               "integrals": self.integrals, "log_windows": self.log_windows,
               "fitted_slope": self.fitted_slope, "expected_slope": self.expected_slope,
               "fit_residual": self.fit_residual, "passed": self.passed}
        if self.integrals_outer is not None:
            out["integrals_outer"] = self.integrals_outer
            out["fitted_slope_outer"] = self.fitted_slope_outer
        return out

    def plot_rows(self) -> list[tuple[float, float]]:
        return list(zip(self.log_windows, self.integrals))


_FORM_IDS = {"subcritical": "T1_eq15", "logarithmic": "T2_eq19",
             "oned_forward": "T3_eq113", "oned_backward": "T3_eq117"}


def _window_integral(g, lo: float, hi: float) -> float:
    # split at decades: the integrands are scale-free and G-K prefers O(1) ratios
    edges = np.unique(np.geomspace(lo, hi, max(2, int(math.log10(hi / lo)) + 2)))
    return math.fsum(integrate_finite(g, a, b, 1e-13).value for a, b in zip(edges, edges[1:]))


def _fit(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    slope, intercept = np.polyfit(x, y, 1)
    scale = max(float(np.max(np.abs(y))), 1e-300)
    resid = float(np.max(np.abs(slope * x + intercept - y))) / scale if np.any(y) else 0.0
    return float(slope), resid


def divergence_diagnostic(spec: ExtremizerSpec,
                          windows: Sequence[tuple[float, float]]) -> DivergenceReport:
    """Left-hand integrals of an exact extremizer form over growing windows.

    For the radial forms the window is ``eps < |x| < M``; for the logarithmic
    form it is ``delta < |log(R/|x|)| < M`` on each side of the sphere
    ``|x| = R``.  The integrals are computed by quadrature from the pointwise
    form and fitted against the log of the window ratio.
    """
    if len(windows) < 2:
        raise ValueError("need at least two windows for a slope fit")
    for lo, hi in windows:
        if not 0 < lo < hi:
            raise ValueError(f"windows must satisfy 0 < lo < hi, got ({lo}, {hi})")
    windows = [(float(lo), float(hi)) for lo, hi in windows]
    amp = spec.amplitude
    outer = None
    if spec.kind == "subcritical":
        k = spec.n - 3

        def g(r):
            return amp * spec.radial_value(r) ** 2 * r ** k
        ints = [_window_integral(g, lo, hi) for lo, hi in windows]
    elif spec.kind == "logarithmic":
        def side(sign):
            # r = R exp(-sign u); |f - f_R|^2 / (r^n log^2) r^(n-1) dr = |phi|^2 / u^2 du
            def g(u):
                return amp * spec.value_log_distance(sign * u) ** 2 / (u * u)
            return g

        ints = [_window_integral(side(1.0), lo, hi) for lo, hi in windows]
        outer = [_window_integral(side(-1.0), lo, hi) for lo, hi in windows]
    else:
        p = spec.p
        e = -p - 1.0 if spec.kind == "oned_forward" else p - 1.0

        def g(x):
            return spec.radial_value(x) ** 2 * x ** e
        ints = [_window_integral(g, lo, hi) for lo, hi in windows]
    logs = np.array([math.log(hi / lo) for lo, hi in windows])
    slope, resid = _fit(logs, np.array(ints))
    expected = spec.expected_slope
    ok = abs(slope - expected) <= SLOPE_TOL * max(abs(expected), 1e-300) or \
        (expected == 0.0 and abs(slope) <= 1e-300)
    ok = ok and resid <= FIT_TOL
    slope_out = None
    if outer is not None:
        slope_out, resid_out = _fit(logs, np.array(outer))
        resid = max(resid, resid_out)
        ok = ok and resid_out <= FIT_TOL and (
            abs(slope_out - expected) <= SLOPE_TOL * max(abs(expected), 1e-300))
    return DivergenceReport(_FORM_IDS[spec.kind], windows, ints, logs.tolist(), slope,
                            expected, resid, bool(ok), outer, slope_out)


def r_sweep_T2(f, R_list: Sequence[float], rel_tol: float = DEFAULT_REL_TOL,
               threshold: float = DEFAULT_THRESHOLD) -> list[IdentityReport]:
    """One logarithmic-identity report per radius (the left side as a function of R).

    No conclusion is drawn about whether a supremum over R is attained.
    """
    if not R_list:
        raise ValueError("R_list must not be empty")
    return [eval_T2(f, float(R), rel_tol, threshold) for R in R_list]


def main_term_spread(reports: Sequence[IdentityReport]) -> float:
    """Relative spread of ``main_term`` over an R-sweep (zero in exact arithmetic)."""
    m = np.array([r.main_term for r in reports])
    return float((m.max() - m.min()) / max(abs(m).max(), 1e-300))
