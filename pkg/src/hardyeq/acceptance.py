"""The end-to-end acceptance suite: eight numbered criteria, one pass/fail line each."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import hilbert, identities as ids, sharpness
from .functions import ExtremizerSpec, make_family, make_profile_1d, sphere_surface_measure

REL_TOL = 1e-9
THRESHOLD = 1e-7
RUNTIME_LIMIT = 120.0


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return (f"[{'PASS' if self.passed else 'FAIL'}] criterion {self.number}: "
                f"{self.title} -- {self.detail} ({self.seconds:.2f}s)")

    def to_dict(self) -> dict:
        return {"number": self.number, "title": self.title, "passed": self.passed,
                "detail": self.detail, "seconds": self.seconds}


# --------------------------------------------------------------------------
# catalogue of admissible cases
# --------------------------------------------------------------------------

T1_FAMILIES = (("gaussian", ()), ("exp_decay", ()), ("bump", (1.0, 2.0)),
               ("power_cutoff", (2.0,)), ("log_gaussian", ()))
T2_FAMILIES = (("gaussian", ()), ("exp_decay", ()), ("bump", (0.7, 1.6)),
               ("power_cutoff", (2.0,)), ("log_gaussian", ()))
T3_PROFILES = (("bump", (1.0, 2.0)), ("bump", (0.3, 5.0)), ("power_window", (2.0, 0.5, 3.0)),
               ("power_window", (0.5, 1.0, 4.0)), ("exp_decay", (1.0, 3.0)),
               ("exp_decay", (2.0, 0.0)))


def t3_admissible(name: str, params: tuple, p: float, backward: bool) -> bool:
    """Integrability at the origin for the non-compact catalogue entries."""
    if name != "exp_decay" or backward:
        return True
    k = params[1] if len(params) > 1 else 0.0
    # x^(1-p) |x^k|^2 integrable at 0 (the primitive then is automatically)
    return 2 * k + 1 - p > -1


def identity_suite(rel_tol: float = REL_TOL, threshold: float = THRESHOLD):
    """Every (identity, test function) report of the residual suite, ordered by case id."""
    reports = []
    for n in (3, 4, 5):
        for name, params in T1_FAMILIES:
            for ang in (None, "first_harmonic"):
                f = make_family(name, params, n, angular=ang)
                reports.append(ids.eval_T1(f, rel_tol, threshold))
                reports.append(ids.eval_T1(f, rel_tol, threshold, form="conjugated"))
                reports.append(ids.eval_T1_fullgradient(f, rel_tol, threshold))
                reports.append(ids.dirichlet_decomposition(f, rel_tol, threshold))
    for n in (2, 3):
        for name, params in T2_FAMILIES:
            f = make_family(name, params, n)
            for R in (0.5, 1.0, 2.0):
                reports.append(ids.eval_T2(f, R, rel_tol, threshold))
                reports.append(ids.eval_T2(f, R, rel_tol, threshold, form="conjugated"))
    for p in (0.5, 1.0, 2.0, 4.0):
        for name, params in T3_PROFILES:
            g = make_profile_1d(name, params)
            for backward, fn in ((False, ids.eval_T3_forward), (True, ids.eval_T3_backward)):
                if not t3_admissible(name, params, p, backward):
                    continue
                for form in ("pointwise", "derivative"):
                    reports.append(fn(g, p, rel_tol, threshold, form=form))
    return reports


# --------------------------------------------------------------------------
# fixed-grid oracles, independent of the adaptive engine
# --------------------------------------------------------------------------

ORACLE_POINTS = 10_000_000


def midpoint_on_unit(g: Callable[[np.ndarray], np.ndarray], points: int = ORACLE_POINTS,
                     chunk: int = 1_000_000) -> float:
    """Composite midpoint rule for ``int_0^1 g`` on a uniform grid."""
    h = 1.0 / points
    parts = []
    for start in range(0, points, chunk):
        k = np.arange(start, min(start + chunk, points), dtype=float)
        parts.append(float(np.sum(g((k + 0.5) * h))))
    return math.fsum(parts) * h


def _half_line(g):
    # x = s / (1 - s)
    def mapped(s):
        x = s / (1.0 - s)
        with np.errstate(over="ignore", under="ignore"):
            return g(x) / (1.0 - s) ** 2
    return mapped


def oracle_values(points: int = ORACLE_POINTS) -> dict[str, tuple[float, float, float]]:
    """``(lhs, main, remainder)`` for the three closed-form cases, each term from its own integrand."""
    sig = sphere_surface_measure(3)

    # gaussian phi = exp(-r^2/2), n = 3; radial measure r^2 dr
    def g_lhs(r):
        return 0.25 * sig * np.exp(-r * r)

    def g_main(r):
        return sig * r**4 * np.exp(-r * r)

    def g_rem(r):
        # (phi' + phi / (2r))^2 r^2 = (1/2 - r^2)^2 exp(-r^2)
        return sig * (0.5 - r * r) ** 2 * np.exp(-r * r)

    gauss = tuple(midpoint_on_unit(_half_line(g), points) for g in (g_lhs, g_main, g_rem))

    def avg(x):
        # (1 - e^-x) / x, stable at the origin
        return np.where(x > 0, -np.expm1(-x) / np.where(x > 0, x, 1.0), 1.0)

    fwd = tuple(midpoint_on_unit(_half_line(g), points) for g in (
        lambda x: 0.25 * avg(x) ** 2,
        lambda x: np.exp(-2 * x),
        lambda x: (np.exp(-x) - 0.5 * avg(x)) ** 2,
    ))
    bwd = tuple(midpoint_on_unit(_half_line(g), points) for g in (
        lambda x: 0.25 * np.exp(-2 * x),
        lambda x: x * x * np.exp(-2 * x),
        lambda x: x * x * (np.exp(-x) - 0.5 * np.exp(-x) / np.where(x > 0, x, 1.0)) ** 2,
    ))
    return {"gaussian/T1/n=3": gauss, "exp/T3-forward/p=1": fwd, "exp/T3-backward/p=1": bwd}


CLOSED_FORMS = {
    "gaussian/T1/n=3": (math.pi**1.5 / 2, 3 * math.pi**1.5 / 2, math.pi**1.5),
    "exp/T3-forward/p=1": (math.log(2) / 2, 0.5, (1 - math.log(2)) / 2),
    "exp/T3-backward/p=1": (0.125, 0.25, 0.125),
}


def engine_values(rel_tol: float = REL_TOL) -> dict[str, tuple[float, float, float]]:
    out = {}
    r = ids.eval_T1(make_family("gaussian", (), 3), rel_tol)
    out["gaussian/T1/n=3"] = (r.lhs, r.main_term, r.remainder_term)
    e = make_profile_1d("exp_decay", ())
    r = ids.eval_T3_forward(e, 1.0, rel_tol)
    out["exp/T3-forward/p=1"] = (r.lhs, r.main_term, r.remainder_term)
    r = ids.eval_T3_backward(e, 1.0, rel_tol)
    out["exp/T3-backward/p=1"] = (r.lhs, r.main_term, r.remainder_term)
    return out


# --------------------------------------------------------------------------
# criteria
# --------------------------------------------------------------------------

SWEEP_EPS = (1e-2, 1e-4, 1e-8, 1e-16, 1e-32)
SWEEP_CASES = ([("T1_eq15", {"n": n}) for n in (3, 4, 5)]
               + [("T2_eq19", {"n": n, "R": 1.0}) for n in (2, 3)]
               + [(i, {"p": p}) for i in ("T3_eq113", "T3_eq117") for p in (0.5, 1.0, 2.0, 4.0)])
SWEEP_TARGET = 0.98


def _c1(state) -> tuple[bool, str]:
    t0 = time.perf_counter()
    reps = identity_suite()
    dt = time.perf_counter() - t0
    state["reports"] = reps
    per_id: dict[str, int] = {}
    for r in reps:
        per_id[r.identity_id] = per_id.get(r.identity_id, 0) + 1
    worst = max(reps, key=lambda r: r.residual_rel)
    failed = [r for r in reps if r.residual_rel > THRESHOLD]
    ok = not failed and min(per_id.values()) >= 5 and dt <= RUNTIME_LIMIT
    return ok, (f"{len(reps)} reports over {len(per_id)} identities, max residual_rel "
                f"{worst.residual_rel:.2e} ({worst.identity_id}, {worst.params.get('family')}), "
                f"{len(failed)} above {THRESHOLD:g}, suite time {dt:.1f}s")


def _c2(state) -> tuple[bool, str]:
    oracle = oracle_values()
    engine = engine_values()
    worst_engine = worst_oracle = 0.0
    for key, exact in CLOSED_FORMS.items():
        worst_engine = max(worst_engine, *(abs(a - b) for a, b in zip(engine[key], oracle[key])))
        worst_oracle = max(worst_oracle, *(abs(a - b) for a, b in zip(exact, oracle[key])))
    ok = worst_engine <= 1e-9 and worst_oracle <= 1e-9
    return ok, (f"max |engine - grid oracle| {worst_engine:.1e}, "
                f"max |grid oracle - closed form| {worst_oracle:.1e} (tol 1e-9)")


_FORM_PAIRS = {"T1_eq15": ("remainder_shifted", "remainder_conjugated"),
               "T2_eq19": ("remainder_sum", "remainder_conjugated"),
               "T3_eq113": ("remainder_pointwise", "remainder_derivative"),
               "T3_eq117": ("remainder_pointwise", "remainder_derivative")}


def _c3(state) -> tuple[bool, str]:
    reps = state.get("reports") or identity_suite()
    worst, n = 0.0, 0
    for r in reps:
        pair = _FORM_PAIRS.get(r.identity_id)
        if pair is None:
            continue
        a, b = (r.terms[k].value for k in pair)
        worst = max(worst, abs(a - b) / max(abs(a), 1e-300) if a or b else 0.0)
        n += 1
    return worst <= 1e-8, f"{n} form pairs, max relative difference {worst:.2e} (tol 1e-8)"


def _c4(state) -> tuple[bool, str]:
    parts, ok = [], True
    for ident, params in SWEEP_CASES:
        try:
            res = sharpness.sharpness_sweep(ident, None, SWEEP_EPS, params, REL_TOL)
        except sharpness.SweepPropertyError as exc:
            ok = False
            parts.append(f"{ident}{params}: {exc}")
            continue
        tag = ",".join(f"{k}={v:g}" for k, v in params.items())
        parts.append(f"{ident}[{tag}] {res.attained_fraction:.4f}")
        ok = ok and res.attained_fraction >= SWEEP_TARGET
    return ok, f"fraction of sharp value at eps={SWEEP_EPS[-1]:g}: " + "; ".join(parts)


def divergence_cases():
    windows = [(1e-1, 10.0), (1e-2, 100.0), (1e-3, 1e3), (1e-4, 1e4), (1e-6, 1.0)]
    log_windows = [(1e-2, 1.0), (1e-4, 1.0), (1e-6, 1.0), (1e-8, 1.0), (1e-3, 50.0)]
    cases = [(ExtremizerSpec("subcritical", sphere_surface_measure(n), n=n), windows)
             for n in (3, 4, 5)]
    cases += [(ExtremizerSpec("logarithmic", sphere_surface_measure(n), n=n, R=R), log_windows)
              for n, R in ((2, 1.0), (3, 2.0))]
    cases += [(ExtremizerSpec(k, 1.5, p=p), windows)
              for k in ("oned_forward", "oned_backward") for p in (0.5, 2.0)]
    cases.append((ExtremizerSpec("subcritical", 0.0, n=3), windows))
    return cases


def _c5(state) -> tuple[bool, str]:
    worst_slope = worst_fit = 0.0
    ok = True
    for spec, windows in divergence_cases():
        d = sharpness.divergence_diagnostic(spec, windows)
        ok = ok and d.passed
        if d.expected_slope:
            slopes = [d.fitted_slope] + ([d.fitted_slope_outer] if d.fitted_slope_outer else [])
            worst_slope = max(worst_slope, *(abs(s - d.expected_slope) / d.expected_slope
                                             for s in slopes))
        worst_fit = max(worst_fit, d.fit_residual)
    return ok, (f"{len(divergence_cases())} forms, max slope error {worst_slope:.1e} "
                f"(tol 1e-6), max fit residual {worst_fit:.1e} (tol 1e-8)")


def _c6(state) -> tuple[bool, str]:
    r = hilbert.random_suite(1000, 16, seed=7)
    return r.passed, (f"1000 trials, d=16: consistency {r.max_consistency_defect:.1e}, "
                      f"equality case {r.max_equality_residual:.1e}, orthogonal case "
                      f"{r.max_orthogonal_residual:.1e} (tol 1e-12)")


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300) if a != b else 0.0


def _c7(state) -> tuple[bool, str]:
    lams = (1 / 3, 2.0, 10.0)
    w2 = w1 = wcov = w3 = 0.0
    for name, params in T2_FAMILIES[:3]:
        f = make_family(name, params, 2)
        for R in (0.5, 1.0, 2.0):
            base = ids.eval_T2(f, R, REL_TOL)
            for lam in lams:
                s = ids.eval_T2(f.scaled(lam), R / lam, REL_TOL)
                w2 = max(w2, *(_rel(getattr(base, k), getattr(s, k))
                               for k in ("lhs", "main_term", "remainder_term", "cross_term")))
    for n in (3, 4, 5):
        for name, params in T1_FAMILIES[:3]:
            f = make_family(name, params, n)
            base = ids.eval_T1(f, REL_TOL)
            q0 = sharpness.rayleigh_quotient("T1_eq15", f, rel_tol=REL_TOL)
            for lam in lams:
                fs = f.scaled(lam)
                w1 = max(w1, _rel(q0, sharpness.rayleigh_quotient("T1_eq15", fs, rel_tol=REL_TOL)))
                s = ids.eval_T1(fs, REL_TOL)
                k = lam ** (2 - n)
                wcov = max(wcov, *(_rel(k * getattr(base, a), getattr(s, a))
                                   for a in ("lhs", "main_term", "remainder_term")))
    for name, params in (("bump", (1.0, 2.0)), ("power_window", (2.0, 0.5, 3.0)),
                         ("bump", (0.3, 5.0))):
        g = make_profile_1d(name, params)
        for p in (0.5, 1.0, 2.0, 4.0):
            b = ids.eval_T3_backward(g, p, REL_TOL)
            fw = ids.eval_T3_forward(g.inverted(), p, REL_TOL)
            w3 = max(w3, *(_rel(getattr(b, a), getattr(fw, a))
                           for a in ("lhs", "main_term", "remainder_term", "cross_term")))
    ok = max(w2, w1, wcov, w3) <= 1e-8
    return ok, (f"T2 scaling {w2:.1e}, T1 quotient {w1:.1e}, T1 covariance {wcov:.1e}, "
                f"T3 duality {w3:.1e} (tol 1e-8)")


def _c8(state) -> tuple[bool, str]:
    worst_radial = 0.0
    for n in (3, 4, 5):
        for name, params in T1_FAMILIES:
            f = make_family(name, params, n)
            a, b = ids.eval_T1(f, REL_TOL), ids.eval_T1_fullgradient(f, REL_TOL)
            worst_radial = max(worst_radial, *(_rel(getattr(a, k), getattr(b, k))
                                               for k in ("lhs", "main_term", "remainder_term")))
    worst_gap = 0.0
    for name, params in T1_FAMILIES:
        f = make_family(name, params, 4, angular="first_harmonic")
        gap, spherical = ids.full_gradient_gap(f, REL_TOL)
        worst_gap = max(worst_gap, _rel(gap, spherical))
    ok = worst_radial <= 1e-8 and worst_gap <= 1e-8
    return ok, (f"radial full-gradient vs radial-derivative report {worst_radial:.1e}; n=4 first "
                f"harmonic remainder gap vs spherical Dirichlet part {worst_gap:.1e} (tol 1e-8)")


CRITERIA: tuple[tuple[int, str, Callable], ...] = (
    (1, "identity residual suite", _c1),
    (2, "closed-form oracle values", _c2),
    (3, "remainder-form agreement", _c3),
    (4, "sharpness sweeps", _c4),
    (5, "divergence diagnostics", _c5),
    (6, "orthogonality lemma randomized suite", _c6),
    (7, "invariance suite", _c7),
    (8, "full-gradient comparison", _c8),
)


def run_criterion(number: int, state: dict | None = None) -> CriterionResult:
    state = {} if state is None else state
    _, title, fn = CRITERIA[number - 1]
    t0 = time.perf_counter()
    try:
        ok, detail = fn(state)
    except Exception as exc:  # a crash is a failed criterion, reported as such
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CriterionResult(number, title, bool(ok), detail, time.perf_counter() - t0)


def run_all(echo: Callable[[str], None] | None = print) -> list[CriterionResult]:
    state: dict = {}
    results = []
    for number, _, _ in CRITERIA:
        res = run_criterion(number, state)
        if echo:
            echo(res.line())
        results.append(res)
    return results
