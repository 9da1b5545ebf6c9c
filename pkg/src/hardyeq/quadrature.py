"""Adaptive Gauss-Kronrod quadrature on finite intervals and on (0, inf).

Every integral in this package is one-dimensional. Integrands are
vectorized callables: they receive a 1-D float array of abscissas and
return an array of the same shape.

Integrals over (0, inf) are computed in the logarithmic coordinate
``t = log r``.  A radial integrand ``g(r)`` becomes ``g(e^t) e^t`` on the
whole real line; pure power weights turn into exponentials in ``t`` and the
origin singularity disappears.  Two ways of handling the infinite ends are
offered:

* ``"truncate"``: grow a finite window chunk by chunk until the last chunk
  is negligible (integrands decaying exponentially in ``t``);
* ``"algebraic"``: map each infinite end onto ``(0, 1]`` with
  ``t = t0 + L (1 - s) / s`` (integrands decaying like a power of ``t``,
  e.g. the ``1 / log(R/r)^2`` weights of the logarithmic Hardy terms).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

ArrayFn = Callable[[np.ndarray], np.ndarray]

DEFAULT_LIMIT = 200_000
_EPS = np.finfo(float).eps
# exp(t) is a positive finite double exactly on this range
_T_MIN, _T_MAX = -745.0, 709.0

# 15-point Kronrod nodes (non-negative half) and weights, with the embedded
# 7-point Gauss weights on the odd Kronrod nodes.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[[1, 3, 5]] = _WG[:3]
GAUSS_WEIGHTS[[9, 11, 13]] = _WG[2::-1]
GAUSS_WEIGHTS[7] = _WG[3]


class QuadratureError(RuntimeError):
    """Adaptive integration did not reach the requested tolerance.

    ``best`` carries the last estimate and its error; ``window`` is set when
    the failure happened while truncating an infinite range.
    """

    def __init__(self, message: str, best: "QuadResult | None" = None,
                 window: tuple[float, float] | None = None):
        super().__init__(message)
        self.best = best
        self.window = window


class DomainError(ValueError):
    """The integrand returned NaN or an infinity."""

    def __init__(self, abscissa: float, value: float):
        super().__init__(f"integrand is not finite at {abscissa!r} (value {value!r})")
        self.abscissa = abscissa
        self.value = value


@dataclass(frozen=True)
class QuadResult:
    value: float
    error_estimate: float
    subdivisions: int


@dataclass(frozen=True)
class SplitQuadResult(QuadResult):
    """Sum of an inner (r < R) and an outer (r > R) integral."""

    inner: QuadResult = None
    outer: QuadResult = None


@dataclass(frozen=True)
class Integrand:
    """A vectorized integrand on the positive half-line.

    ``log_form``, when given, must return ``eval(e^t) * e^t`` as a function
    of ``t``.  It is used whenever the integral is taken in logarithmic
    coordinates and lets the caller supply a form that stays accurate where
    ``e^t`` would underflow or overflow.
    """

    eval: ArrayFn
    singular_points: tuple[float, ...] = ()
    log_form: ArrayFn | None = field(default=None, compare=False)

    def __call__(self, x):
        return self.eval(x)


def as_integrand(g) -> Integrand:
    return g if isinstance(g, Integrand) else Integrand(g)


def _log_coordinates(g: Integrand) -> ArrayFn:
    if g.log_form is not None:
        return g.log_form

    def h(t):
        with np.errstate(over="ignore", under="ignore"):
            r = np.exp(t)
        inside = (r > 0.0) & np.isfinite(r)
        out = np.zeros_like(t)
        if inside.any():
            ri = r[inside]
            out[inside] = np.asarray(g.eval(ri), dtype=float) * ri
        return out

    return h


def _gk15(h: ArrayFn, a: np.ndarray, b: np.ndarray):
    """Kronrod estimate, error estimate and |f| integral on each [a_i, b_i]."""
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = center[:, None] + half[:, None] * NODES[None, :]
    fx = np.asarray(h(x.ravel()), dtype=float).reshape(x.shape)
    bad = ~np.isfinite(fx)
    if bad.any():
        i = np.flatnonzero(bad.ravel())[0]
        raise DomainError(float(x.ravel()[i]), float(fx.ravel()[i]))
    kron = fx @ KRONROD_WEIGHTS
    gauss = fx @ GAUSS_WEIGHTS
    resabs = np.abs(fx) @ KRONROD_WEIGHTS
    mean = 0.5 * kron
    resasc = np.abs(fx - mean[:, None]) @ KRONROD_WEIGHTS
    err = np.abs((kron - gauss) * half)
    kron *= half
    resabs *= np.abs(half)
    resasc *= np.abs(half)
    # QUADPACK error scaling
    scale = np.ones_like(err)
    nz = (resasc != 0.0) & (err != 0.0)
    scale[nz] = np.minimum(1.0, (200.0 * err[nz] / resasc[nz]) ** 1.5)
    err = np.where(nz, resasc * scale, err)
    floor = 10.0 * _EPS * resabs
    err = np.maximum(err, floor)
    return kron, err, floor


def _adapt(h: ArrayFn, edges: np.ndarray, rel_tol: float, abs_tol: float,
           limit: int) -> QuadResult:
    """Globally adaptive bisection over the partition ``edges``.

    The refinement path does not depend on the tolerance: at each sweep every
    interval whose error is within a factor 8 of the worst one is bisected.
    A tighter tolerance therefore only continues the same path, which keeps
    the reported error monotone in the tolerance.
    """
    a = np.asarray(edges[:-1], dtype=float)
    b = np.asarray(edges[1:], dtype=float)
    if a.size == 0:
        return QuadResult(0.0, 0.0, 0)
    val, err, floor = _gk15(h, a, b)
    while True:
        total = math.fsum(val)
        etot = math.fsum(err)
        tol = max(abs_tol, rel_tol * abs(total))
        if etot <= tol:
            return QuadResult(total, etot, int(a.size))
        splittable = (b - a) > 64.0 * _EPS * np.maximum(np.abs(a), np.abs(b)) + 1e-300
        # intervals sitting on their roundoff floor cannot improve
        improvable = splittable & (err > floor * 1.0000001)
        if not improvable.any():
            if math.fsum(floor) >= 0.5 * etot:
                return QuadResult(total, etot, int(a.size))
            raise QuadratureError(
                "roundoff limits the attainable accuracy",
                QuadResult(total, etot, int(a.size)))
        emax = err[improvable].max()
        sel = improvable & (err >= emax / 8.0)
        nsel = int(sel.sum())
        if a.size + nsel > limit:
            raise QuadratureError(
                f"subdivision budget of {limit} intervals exhausted",
                QuadResult(total, etot, int(a.size)))
        mid = 0.5 * (a[sel] + b[sel])
        na = np.concatenate([a[sel], mid])
        nb = np.concatenate([mid, b[sel]])
        v2, e2, f2 = _gk15(h, na, nb)
        keep = ~sel
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        val = np.concatenate([val[keep], v2])
        err = np.concatenate([err[keep], e2])
        floor = np.concatenate([floor[keep], f2])


def _partition(lo: float, hi: float, points: Iterable[float]) -> np.ndarray:
    pts = [p for p in points if lo < p < hi]
    return np.unique(np.array([lo, *pts, hi], dtype=float))


def _check_tol(rel_tol: float) -> None:
    if not rel_tol >= 1e-14:
        raise ValueError(f"rel_tol must be >= 1e-14, got {rel_tol!r}")


def integrate_t(h: ArrayFn, lo: float, hi: float, rel_tol: float = 1e-10, *,
                breakpoints: Sequence[float] = (), tails: str = "truncate",
                abs_tol: float = 0.0, limit: int = DEFAULT_LIMIT,
                window: tuple[float, float] = (_T_MIN, _T_MAX)) -> QuadResult:
    """Integrate ``h`` over ``(lo, hi)``; either end may be infinite.

    ``tails`` selects how infinite ends are treated (see module docstring).
    ``window`` bounds how far truncation may extend before giving up.
    """
    _check_tol(rel_tol)
    if not lo < hi:
        raise ValueError(f"need lo < hi, got ({lo}, {hi})")
    finite = [p for p in (lo, hi, *breakpoints) if np.isfinite(p)]
    if np.isfinite(lo) and np.isfinite(hi):
        return _adapt(h, _partition(lo, hi, breakpoints), rel_tol, abs_tol, limit)
    if tails == "algebraic":
        return _integrate_mapped(h, lo, hi, breakpoints, finite, rel_tol, abs_tol, limit)
    if tails == "truncate":
        return _integrate_truncated(h, lo, hi, breakpoints, finite, rel_tol,
                                    abs_tol, limit, window)
    raise ValueError(f"unknown tails mode {tails!r}")


def _integrate_mapped(h, lo, hi, breakpoints, finite, rel_tol, abs_tol, limit):
    # Core [A, B] plus one mapped unit interval per infinite end, all glued
    # into a single synthetic coordinate y so the error budget is global.
    if finite:
        A = lo if np.isfinite(lo) else min(finite)
        B = hi if np.isfinite(hi) else max(finite)
    else:
        A, B = -1.0, 1.0
    if A == B:
        if np.isfinite(lo):
            B = A + 1.0
        else:
            A = B - 1.0
    L = max(1.0, B - A)
    core = _partition(A, B, breakpoints)
    width = B - A
    lower = not np.isfinite(lo)
    upper = not np.isfinite(hi)

    def H(y):
        out = np.empty_like(y)
        m_lo = y < 0.0
        m_hi = y > 1.0
        m_core = ~(m_lo | m_hi)
        if m_core.any():
            out[m_core] = width * h(A + width * y[m_core])
        if m_lo.any():
            s = y[m_lo] + 1.0
            out[m_lo] = h(A - L * (1.0 - s) / s) * (L / (s * s))
        if m_hi.any():
            s = 2.0 - y[m_hi]
            out[m_hi] = h(B + L * (1.0 - s) / s) * (L / (s * s))
        return out

    y_edges = (core - A) / width
    if lower:
        y_edges = np.concatenate([[-1.0], y_edges])
    if upper:
        y_edges = np.concatenate([y_edges, [2.0]])
    return _adapt(H, y_edges, rel_tol, abs_tol, limit)


def _integrate_truncated(h, lo, hi, breakpoints, finite, rel_tol, abs_tol, limit, window):
    wlo, whi = window
    A = lo if np.isfinite(lo) else max(min([*finite, -4.0]), wlo)
    B = hi if np.isfinite(hi) else min(max([*finite, 4.0]), whi)
    if not np.isfinite(lo) and A >= B:
        A = max(B - 8.0, wlo)
    if not np.isfinite(hi) and B <= A:
        B = min(A + 8.0, whi)
    pieces = [_adapt(h, _partition(A, B, breakpoints), rel_tol, abs_tol, limit)]
    tail_err = 0.0
    for side in (-1, 1):
        if np.isfinite(lo if side < 0 else hi):
            continue
        edge = A if side < 0 else B
        step = 4.0
        while True:
            total = math.fsum(p.value for p in pieces)
            start, stop = edge, edge + side * step
            if side < 0:
                stop = max(stop, wlo)
            else:
                stop = min(stop, whi)
            if stop == start:
                raise QuadratureError(
                    "tail contribution did not become negligible",
                    QuadResult(total, math.fsum(p.error_estimate for p in pieces),
                               sum(p.subdivisions for p in pieces)),
                    window=(A, B))
            a_, b_ = min(start, stop), max(start, stop)
            chunk = _adapt(h, np.array([a_, b_]), rel_tol,
                           max(abs_tol, 0.1 * rel_tol * abs(total)), limit)
            pieces.append(chunk)
            if side < 0:
                A = stop
            else:
                B = stop
            edge = stop
            total = math.fsum(p.value for p in pieces)
            contrib = abs(chunk.value) + chunk.error_estimate
            if contrib <= max(abs_tol, 0.1 * rel_tol * abs(total)):
                tail_err += abs(chunk.value)
                break
            step *= 2.0
    value = math.fsum(p.value for p in pieces)
    err = math.fsum(p.error_estimate for p in pieces) + tail_err
    return QuadResult(value, err, sum(p.subdivisions for p in pieces))


def integrate_finite(g, a: float, b: float, rel_tol: float = 1e-10, *,
                     abs_tol: float = 0.0, limit: int = DEFAULT_LIMIT) -> QuadResult:
    """Integrate ``g`` over ``(a, b)`` with ``0 <= a < b < inf``.

    Subdivision edges are forced at every interior singular point, so the
    integrand is never sampled there.  A left end at the origin is handled
    in logarithmic coordinates, which resolves singularities such as
    ``1 / (x log(x)^2)`` that plain bisection cannot.
    """
    g = as_integrand(g)
    _check_tol(rel_tol)
    if not (0.0 <= a < b) or not np.isfinite(b):
        raise ValueError(f"need 0 <= a < b < inf, got ({a}, {b})")
    if a > 0.0:
        return _adapt(g.eval, _partition(a, b, g.singular_points), rel_tol, abs_tol, limit)
    bps = [math.log(p) for p in g.singular_points if 0.0 < p < b]
    return integrate_t(_log_coordinates(g), -math.inf, math.log(b), rel_tol,
                       breakpoints=bps, tails="algebraic", abs_tol=abs_tol, limit=limit)


def integrate_halfline(g, rel_tol: float = 1e-10, decay_hint="exponential", *,
                       abs_tol: float = 0.0, limit: int = DEFAULT_LIMIT) -> QuadResult:
    """Integrate ``g`` over ``(0, inf)`` after the substitution ``r = e^t``.

    ``decay_hint`` is ``"exponential"`` or ``"power"`` (truncate the
    ``t`` window adaptively), ``"logarithmic"`` (algebraic tails in ``t``),
    or ``("compact_support", b)`` which reduces to :func:`integrate_finite`.
    """
    g = as_integrand(g)
    if isinstance(decay_hint, tuple):
        kind, b = decay_hint
        if kind != "compact_support":
            raise ValueError(f"unknown decay hint {decay_hint!r}")
        return integrate_finite(g, 0.0, float(b), rel_tol, abs_tol=abs_tol, limit=limit)
    bps = [math.log(p) for p in g.singular_points if p > 0.0]
    if decay_hint in ("exponential", "power"):
        window = (-1e4, 1e4) if g.log_form is not None else (_T_MIN, _T_MAX)
        return integrate_t(_log_coordinates(g), -math.inf, math.inf, rel_tol,
                           breakpoints=bps, tails="truncate", abs_tol=abs_tol,
                           limit=limit, window=window)
    if decay_hint == "logarithmic":
        return integrate_t(_log_coordinates(g), -math.inf, math.inf, rel_tol,
                           breakpoints=bps, tails="algebraic", abs_tol=abs_tol, limit=limit)
    raise ValueError(f"unknown decay hint {decay_hint!r}")


def integrate_log_split(g, R: float, rel_tol: float = 1e-10, *, a: float = 0.0,
                        b: float = math.inf, abs_tol: float = 0.0,
                        limit: int = DEFAULT_LIMIT) -> SplitQuadResult:
    """Integrate over ``(a, R)`` and ``(R, b)`` separately, never sampling at R.

    Both pieces are taken in ``t = log r`` with algebraic tail handling, which
    suits integrands carrying powers of ``1 / log(R / r)``.
    """
    g = as_integrand(g)
    if not (R > 0.0 and 0.0 <= a < R < b):
        raise ValueError(f"need 0 <= a < R < b, got a={a}, R={R}, b={b}")
    h = _log_coordinates(g)
    tR = math.log(R)
    t_lo = math.log(a) if a > 0.0 else -math.inf
    t_hi = math.log(b) if np.isfinite(b) else math.inf
    bps = [math.log(p) for p in g.singular_points if a < p < b and p != R]
    inner = integrate_t(h, t_lo, tR, rel_tol, breakpoints=bps, tails="algebraic",
                        abs_tol=abs_tol, limit=limit)
    outer = integrate_t(h, tR, t_hi, rel_tol, breakpoints=bps, tails="algebraic",
                        abs_tol=abs_tol, limit=limit)
    return SplitQuadResult(
        math.fsum([inner.value, outer.value]),
        inner.error_estimate + outer.error_estimate,
        inner.subdivisions + outer.subdivisions,
        inner=inner, outer=outer)
