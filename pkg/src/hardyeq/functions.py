"""Catalogue of test functions with analytic derivatives and primitives.

Radial profiles are stored in the logarithmic coordinate ``t = log r``:
``value_t(t) = phi(e^t)`` and ``slope_t(t) = r phi'(r)`` at ``r = e^t``
(the ``t``-derivative of ``value_t``).  This keeps every profile finite far
outside the range where ``e^t`` is representable, which the logarithmic
Hardy terms need.  Plain ``value(r)`` / ``deriv(r)`` views are derived from
these and remain analytic.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
from scipy.special import expit, gamma, gammainc, gammaincc

from .quadrature import NODES, KRONROD_WEIGHTS, integrate_finite

ArrayFn = Callable[[np.ndarray], np.ndarray]
LOG2 = math.log(2.0)


class ValidationError(ValueError):
    pass


def _arr(x) -> np.ndarray:
    return np.asarray(x, dtype=float)


def _masked(x: np.ndarray, mask: np.ndarray, fn: ArrayFn) -> np.ndarray:
    out = np.zeros(x.shape)
    if mask.any():
        out[mask] = fn(x[mask])
    return out


# --------------------------------------------------------------------------
# smooth cutoffs
# --------------------------------------------------------------------------

def smooth_step(x):
    """C-infinity step ``h(x) / (h(x) + h(1 - x))`` with ``h(x) = exp(-1/x)``.

    Returns ``(s, ds/dx)``; ``s`` is 0 for ``x <= 0`` and 1 for ``x >= 1``.
    """
    x = _arr(x)
    s = np.where(x >= 1.0, 1.0, 0.0)
    ds = np.zeros(x.shape)
    inner = (x > 0.0) & (x < 1.0)
    if inner.any():
        xi = x[inner]
        q = 1.0 / xi - 1.0 / (1.0 - xi)
        si = expit(-q)
        s[inner] = si
        ds[inner] = si * (1.0 - si) * (1.0 / xi**2 + 1.0 / (1.0 - xi) ** 2)
    return s, ds


def ramp(t, start: float, width: float):
    s, ds = smooth_step((_arr(t) - start) / width)
    return s, ds / width


def window(t, lo: float, hi: float, width: float):
    """1 on ``[lo + width, hi - width]``, 0 outside ``(lo, hi)``; returns value and slope."""
    up, dup = ramp(t, lo, width)
    down, ddown = ramp(t, hi - width, width)
    return up * (1.0 - down), dup * (1.0 - down) - up * ddown


# --------------------------------------------------------------------------
# radial profiles and angular factors
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Decay:
    """Decay metadata: ``gaussian``, ``exponential``, ``power`` (alpha) or
    ``compact_support`` (a, b)."""

    kind: str
    params: tuple[float, ...] = ()

    def __str__(self) -> str:
        if not self.params:
            return self.kind
        return f"{self.kind}({', '.join(repr(float(p)) for p in self.params)})"


@dataclass(frozen=True)
class RadialProfile:
    label: str
    value_t: ArrayFn
    slope_t: ArrayFn
    decay: Decay
    support_t: tuple[float, float] = (-math.inf, math.inf)
    breakpoints_t: tuple[float, ...] = ()
    # radius in t below which differences phi(r) - phi(R) are replaced by
    # their Taylor expansion; 0 disables the guard
    guard_radius: float = 1e-4

    def value(self, r):
        with np.errstate(divide="ignore"):
            return self.value_t(np.log(_arr(r)))

    def deriv(self, r):
        r = _arr(r)
        with np.errstate(divide="ignore"):
            return self.slope_t(np.log(r)) / r

    def curvature_t(self, t: float, h: float = 1e-4) -> float:
        """Second ``t``-derivative by a central difference of the analytic slope."""
        s = self.slope_t(np.array([t - h, t + h]))
        return float((s[1] - s[0]) / (2.0 * h))

    def scaled(self, lam: float) -> "RadialProfile":
        """The profile ``r -> phi(lam r)``."""
        shift = math.log(lam)
        vt, st = self.value_t, self.slope_t
        lo, hi = self.support_t
        return replace(
            self,
            label=f"{self.label}*{lam:g}",
            value_t=lambda t: vt(_arr(t) + shift),
            slope_t=lambda t: st(_arr(t) + shift),
            support_t=(lo - shift, hi - shift),
            breakpoints_t=tuple(b - shift for b in self.breakpoints_t),
        )

    def admissible(self, theorem: int, n: int) -> bool:
        """Whether the decay class puts ``phi(|x|)`` in the space of the theorem."""
        if theorem == 1:
            if n < 3:
                return False
            if self.decay.kind == "power":
                return self.decay.params[0] > (n - 2) / 2
            return True
        if theorem == 2:
            return n >= 2
        raise ValueError(f"no radial admissibility rule for theorem {theorem}")


def sphere_surface_measure(n: int) -> float:
    """Surface measure ``2 pi^(n/2) / Gamma(n/2)`` of the unit sphere in R^n."""
    if n < 2:
        raise ValidationError(f"sphere measure needs n >= 2, got {n}")
    return 2.0 * math.pi ** (n / 2) / math.gamma(n / 2)


@dataclass(frozen=True)
class AngularFactor:
    """An angular factor known only through its two sphere integrals."""

    label: str
    dimension: int
    sphere_norm_sq: float
    sphere_deriv_norm_sq: float | None = None

    def __post_init__(self):
        if self.sphere_norm_sq < 0:
            raise ValidationError("sphere_norm_sq must be non-negative")
        if self.sphere_deriv_norm_sq is not None and self.sphere_deriv_norm_sq < 0:
            raise ValidationError("sphere_deriv_norm_sq must be non-negative")


def constant_angular(n: int, c: float = 1.0) -> AngularFactor:
    return AngularFactor("constant", n, c * c * sphere_surface_measure(n), 0.0)


def first_harmonic(n: int) -> AngularFactor:
    """``psi(w) = w_1``: a degree-one spherical harmonic, eigenvalue ``n - 1``."""
    area = sphere_surface_measure(n)
    return AngularFactor("first_harmonic", n, area / n, (n - 1) * area / n)


def cos_mode(k: int) -> AngularFactor:
    """``cos(k theta)`` on the circle."""
    if k == 0:
        return constant_angular(2)
    return AngularFactor(f"cos{k}", 2, math.pi, k * k * math.pi)


ANGULAR = {
    "constant": constant_angular,
    "first_harmonic": first_harmonic,
}


@dataclass(frozen=True)
class ProductTestFunction:
    """``f(x) = phi(|x|) psi(x / |x|)``."""

    radial: RadialProfile
    angular: AngularFactor
    dimension: int

    def __post_init__(self):
        if self.dimension != self.angular.dimension:
            raise ValidationError(
                f"dimension {self.dimension} does not match angular factor "
                f"dimension {self.angular.dimension}")
        if self.dimension < 2:
            raise ValidationError("product test functions need n >= 2")

    @property
    def label(self) -> str:
        return f"{self.radial.label}|{self.angular.label}"

    def scaled(self, lam: float) -> "ProductTestFunction":
        return replace(self, radial=self.radial.scaled(lam))

    def admissible(self, theorem: int) -> bool:
        return self.radial.admissible(theorem, self.dimension)


# --- catalogued profiles -------------------------------------------------

def _gaussian() -> RadialProfile:
    return RadialProfile(
        "gaussian",
        lambda t: np.exp(-0.5 * np.exp(2.0 * _arr(t))),
        lambda t: -np.exp(2.0 * _arr(t) - 0.5 * np.exp(2.0 * _arr(t))),
        Decay("gaussian"),
    )


def _exp_decay() -> RadialProfile:
    return RadialProfile(
        "exp_decay",
        lambda t: np.exp(-np.exp(_arr(t))),
        lambda t: -np.exp(_arr(t) - np.exp(_arr(t))),
        Decay("exponential"),
    )


def _bump_value(r, a, b):
    r = _arr(r)
    mask = (r > a) & (r < b)

    def f(ri):
        y = (2.0 * ri - a - b) / (b - a)
        return np.exp(1.0 - 1.0 / (1.0 - y * y))

    return _masked(r, mask, f)


def _bump_deriv(r, a, b):
    r = _arr(r)
    mask = (r > a) & (r < b)

    def f(ri):
        y = (2.0 * ri - a - b) / (b - a)
        q = 1.0 - y * y
        return np.exp(1.0 - 1.0 / q) * (-2.0 * y / q**2) * (2.0 / (b - a))

    return _masked(r, mask, f)


def _bump(a: float, b: float) -> RadialProfile:
    if not 0.0 < a < b:
        raise ValidationError(f"bump needs 0 < a < b, got ({a}, {b})")
    la, lb = math.log(a), math.log(b)

    def value_t(t):
        t = _arr(t)
        return _masked(t, (t > la) & (t < lb), lambda ti: _bump_value(np.exp(ti), a, b))

    def slope_t(t):
        t = _arr(t)

        def f(ti):
            r = np.exp(ti)
            return r * _bump_deriv(r, a, b)

        return _masked(t, (t > la) & (t < lb), f)

    return RadialProfile(f"bump({a:g},{b:g})", value_t, slope_t,
                         Decay("compact_support", (a, b)), (la, lb), (la, lb))


def _power_cutoff(alpha: float) -> RadialProfile:
    if not alpha > 0:
        raise ValidationError(f"power_cutoff needs alpha > 0, got {alpha}")

    def value_t(t):
        t = _arr(t)
        # (1 + r^2)^(-alpha/2) = exp(-alpha/2 * softplus(2t))
        return np.exp(-0.5 * alpha * np.logaddexp(0.0, 2.0 * t))

    def slope_t(t):
        t = _arr(t)
        return -alpha * expit(2.0 * t) * value_t(t)

    return RadialProfile(f"power_cutoff({alpha:g})", value_t, slope_t, Decay("power", (alpha,)))


def _log_gaussian() -> RadialProfile:
    return RadialProfile(
        "log_gaussian",
        lambda t: np.exp(-_arr(t) ** 2),
        lambda t: -2.0 * _arr(t) * np.exp(-_arr(t) ** 2),
        Decay("power", (math.inf,)),
    )


def _check_eps_width(eps: float, width: float) -> None:
    if not 0.0 < eps < 1.0:
        raise ValidationError(f"truncation parameter must lie in (0, 1), got {eps}")
    if not 0.0 < width <= math.log(1.0 / eps):
        raise ValidationError(
            f"cutoff width {width} must lie in (0, log(1/eps)] = (0, {math.log(1 / eps):g}]")


def _subcritical_approx(eps: float, n: int, width: float = LOG2) -> RadialProfile:
    """``r^(-(n-2)/2)`` on ``[eps e^w, e^-w / eps]``, vanishing outside ``[eps, 1/eps]``."""
    if n < 3:
        raise ValidationError("subcritical extremizer family needs n >= 3")
    _check_eps_width(eps, width)
    a = (n - 2) / 2
    lo, hi = math.log(eps), -math.log(eps)

    def value_t(t):
        t = _arr(t)

        def f(ti):
            x, _ = window(ti, lo, hi, width)
            return np.exp(-a * ti) * x

        return _masked(t, (t > lo) & (t < hi), f)

    def slope_t(t):
        t = _arr(t)

        def f(ti):
            x, dx = window(ti, lo, hi, width)
            return np.exp(-a * ti) * (dx - a * x)

        return _masked(t, (t > lo) & (t < hi), f)

    return RadialProfile(
        f"subcritical_extremizer_approx({eps:g},w={width:g})", value_t, slope_t,
        Decay("compact_support", (eps, 1.0 / eps)), (lo, hi),
        (lo, lo + width, hi - width, hi))


def _log_extremizer_approx(eps: float, R: float = 1.0, width: float = LOG2) -> RadialProfile:
    """``|log(R/r)|^(1/2)`` for ``eps e^w <= |log(R/r)| <= e^-w / eps``.

    The profile vanishes for ``|log(R/r)| < eps`` (so ``f_R = 0``) and for
    ``|log(R/r)| > 1/eps``; both cutoffs are smooth in ``log|log(R/r)|``.
    """
    _check_eps_width(eps, width)
    if not R > 0:
        raise ValidationError(f"R must be positive, got {R}")
    tau = math.log(R)
    if tau != 0.0 and eps < 1e4 * np.finfo(float).eps * abs(tau):
        raise ValidationError(
            f"eps={eps:g} is below the double resolution around log R = {tau:g}; use R = 1")
    vlo, vhi = math.log(eps), -math.log(eps)

    def _parts(t):
        u = tau - t
        au = np.abs(u)
        v = np.log(au)
        y, dy = window(v, vlo, vhi, width)
        return u, au, y, dy

    def value_t(t):
        t = _arr(t)
        au = np.abs(tau - t)

        def f(ti):
            _, aui, y, _ = _parts(ti)
            return np.sqrt(aui) * y

        return _masked(t, (au > eps) & (au < 1.0 / eps), f)

    def slope_t(t):
        t = _arr(t)
        au = np.abs(tau - t)

        def f(ti):
            u, aui, y, dy = _parts(ti)
            return -np.sign(u) * (0.5 * y + dy) / np.sqrt(aui)

        return _masked(t, (au > eps) & (au < 1.0 / eps), f)

    inner = (eps, eps * math.exp(width), math.exp(-width) / eps, 1.0 / eps)
    bps = tuple(sorted({tau, *(tau - d for d in inner), *(tau + d for d in inner)}))
    with np.errstate(over="ignore", under="ignore"):
        r_lo, r_hi = R * math.exp(-min(1.0 / eps, 745.0)), R * math.exp(min(1.0 / eps, 709.0))
    return RadialProfile(
        f"log_extremizer_approx({eps:g},R={R:g},w={width:g})", value_t, slope_t,
        Decay("compact_support", (r_lo, r_hi)), (tau - 1.0 / eps, tau + 1.0 / eps), bps,
        guard_radius=0.0)


FAMILIES = ("gaussian", "exp_decay", "bump", "power_cutoff", "log_gaussian",
            "log_extremizer_approx", "subcritical_extremizer_approx")


def make_radial(name: str, params: Sequence[float] = (), n: int = 3) -> RadialProfile:
    params = [float(p) for p in params]
    try:
        if name == "gaussian":
            return _gaussian()
        if name == "exp_decay":
            return _exp_decay()
        if name == "bump":
            return _bump(*(params or [1.0, 2.0]))
        if name == "power_cutoff":
            return _power_cutoff(*(params or [2.0]))
        if name == "log_gaussian":
            return _log_gaussian()
        if name == "subcritical_extremizer_approx":
            return _subcritical_approx(params[0], n, *params[1:2])
        if name == "log_extremizer_approx":
            return _log_extremizer_approx(*params[:3])
    except (TypeError, IndexError) as exc:
        raise ValidationError(f"bad parameters {params} for family {name!r}") from exc
    raise ValidationError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")


def make_family(name: str, params: Sequence[float] = (), n: int = 3,
                angular: AngularFactor | str | None = None) -> ProductTestFunction:
    """Build a catalogued product test function in dimension ``n``."""
    if n < 2:
        raise ValidationError(f"dimension must be >= 2, got {n}")
    if angular is None:
        angular = constant_angular(n)
    elif isinstance(angular, str):
        if angular not in ANGULAR:
            raise ValidationError(f"unknown angular factor {angular!r}")
        angular = ANGULAR[angular](n)
    return ProductTestFunction(make_radial(name, params, n), angular, n)


def zero_function(n: int) -> ProductTestFunction:
    zero = RadialProfile("zero", lambda t: np.zeros(np.shape(t)),
                         lambda t: np.zeros(np.shape(t)), Decay("compact_support", (1.0, 2.0)),
                         (0.0, math.log(2.0)))
    return ProductTestFunction(zero, constant_angular(n), n)


# --------------------------------------------------------------------------
# one-dimensional profiles
# --------------------------------------------------------------------------

class CachedPrimitive:
    """``x -> int_a^x f`` by quadrature, memoized on a sorted grid.

    New abscissas are integrated only from their nearest known left
    neighbour, so repeated queries from an outer quadrature cost one short
    Gauss-Kronrod panel each.  Instances are safe to share between threads.
    """

    def __init__(self, f: ArrayFn, a: float, b: float, rel_tol: float = 1e-13):
        self.f, self.a, self.b, self.rel_tol = f, a, b, rel_tol
        self._xs = np.array([a])
        self._Fs = np.array([0.0])
        self._lock = threading.Lock()
        self.total = integrate_finite(f, a, b, rel_tol).value

    def _panel(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        half = 0.5 * (hi - lo)
        x = 0.5 * (hi + lo)[:, None] + half[:, None] * NODES[None, :]
        fx = np.asarray(self.f(x.ravel()), dtype=float).reshape(x.shape)
        vals = (fx @ KRONROD_WEIGHTS) * half
        # refine the few panels whose width is not small compared with the support
        wide = half > 1e-3 * (self.b - self.a)
        for i in np.flatnonzero(wide):
            vals[i] = integrate_finite(self.f, lo[i], hi[i], self.rel_tol, abs_tol=1e-17).value
        return vals

    def __call__(self, x) -> np.ndarray:
        x = _arr(x)
        xc = np.clip(x, self.a, self.b)
        with self._lock:
            q = np.unique(xc)
            known = np.isin(q, self._xs)
            new = q[~known]
            if new.size:
                union = np.union1d(self._xs, new)
                is_new = np.isin(union, new)
                pos = np.searchsorted(self._xs, union)
                F_known = np.zeros(union.size)
                F_known[~is_new] = self._Fs[pos[~is_new]]
                gaps = np.zeros(union.size)
                idx = np.flatnonzero(is_new)
                gaps[idx] = self._panel(union[idx - 1], union[idx])
                last_known = np.maximum.accumulate(np.where(~is_new, np.arange(union.size), 0))
                csum = np.cumsum(gaps)
                F = F_known[last_known] + csum - csum[last_known]
                self._xs, self._Fs = union, F
            F_all = self._Fs[np.searchsorted(self._xs, xc)]
        return F_all.reshape(x.shape)


@dataclass(frozen=True)
class Profile1D:
    """A function on (0, inf) with its forward and tail primitives."""

    label: str
    value: ArrayFn
    forward: ArrayFn
    tail: ArrayFn
    decay: Decay
    breakpoints: tuple[float, ...] = ()
    support: tuple[float, float] = (0.0, math.inf)
    closed_form: bool = True

    def inverted(self) -> "Profile1D":
        """``x -> x^-2 f(1/x)``; swaps forward and tail primitives."""
        f, F, G = self.value, self.forward, self.tail

        def value(x):
            x = _arr(x)
            with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
                y = f(1.0 / x) / (x * x)
            return np.where(np.isfinite(y), y, 0.0)

        def forward(x):
            with np.errstate(divide="ignore"):
                return G(1.0 / _arr(x))

        def tail(x):
            with np.errstate(divide="ignore"):
                return F(1.0 / _arr(x))

        a, b = self.support
        with np.errstate(divide="ignore"):
            support = (1.0 / b if b > 0 else math.inf, 1.0 / a if a > 0 else math.inf)
        return Profile1D(f"inverted({self.label})", value, forward, tail, self.decay,
                         tuple(sorted(1.0 / p for p in self.breakpoints if p > 0)),
                         support, self.closed_form)


def _exp_decay_1d(rate: float = 1.0, k: float = 0.0) -> Profile1D:
    if not rate > 0 or not k > -0.5:
        raise ValidationError(f"exp_decay needs rate > 0 and k > -1/2, got ({rate}, {k})")
    scale = gamma(k + 1.0) / rate ** (k + 1.0)
    cut = 800.0 / rate

    def value(x):
        x = _arr(x)
        if k == 0.0:
            return np.exp(-rate * x)
        return _masked(x, (x > 0) & (x < cut), lambda xi: np.exp(k * np.log(xi) - rate * xi))

    def forward(x):
        x = _arr(x)
        if k == 0.0:
            return -np.expm1(-rate * x) / rate
        return scale * gammainc(k + 1.0, rate * x)

    def tail(x):
        x = _arr(x)
        if k == 0.0:
            return np.exp(-rate * x) / rate
        return scale * gammaincc(k + 1.0, rate * x)

    return Profile1D(f"exp_decay({rate:g},{k:g})", value, forward, tail, Decay("exponential"))


def _power_window(alpha: float, a: float, b: float) -> Profile1D:
    if not 0.0 < a < b:
        raise ValidationError(f"power_window needs 0 < a < b, got ({a}, {b})")

    def prim(x):
        if alpha == -1.0:
            return np.log(x)
        return x ** (alpha + 1.0) / (alpha + 1.0)

    total = float(prim(b) - prim(a))

    def value(x):
        x = _arr(x)
        return _masked(x, (x >= a) & (x <= b), lambda xi: xi**alpha)

    def forward(x):
        x = _arr(x)
        return np.where(x <= a, 0.0, np.where(x >= b, total, prim(np.clip(x, a, b)) - prim(a)))

    def tail(x):
        x = _arr(x)
        return np.where(x <= a, total, np.where(x >= b, 0.0, prim(b) - prim(np.clip(x, a, b))))

    return Profile1D(f"power_window({alpha:g},{a:g},{b:g})", value, forward, tail,
                     Decay("compact_support", (a, b)), (a, b), (a, b))


def _bump_1d(a: float, b: float) -> Profile1D:
    if not 0.0 < a < b:
        raise ValidationError(f"bump needs 0 < a < b, got ({a}, {b})")
    f = lambda x: _bump_value(x, a, b)  # noqa: E731
    F = CachedPrimitive(f, a, b)

    def tail(x):
        return F.total - F(x)

    return Profile1D(f"bump({a:g},{b:g})", f, F, tail, Decay("compact_support", (a, b)),
                     (a, b), (a, b), closed_form=False)


def _forward_extremizer_approx(p: float, eps: float, width: float = LOG2) -> Profile1D:
    """``int_0^x f = x^(p/2)`` on ``[eps e^w, e^-w / eps]``.

    The primitive is cut off smoothly in ``log x`` and vanishes outside
    ``[eps, 1/eps]``, so ``f`` has zero total mass.
    """
    if not p > 0:
        raise ValidationError(f"p must be positive, got {p}")
    _check_eps_width(eps, width)
    lo, hi = math.log(eps), -math.log(eps)
    half = 0.5 * p

    def forward(x):
        x = _arr(x)

        def f(xi):
            t = np.log(xi)
            w, _ = window(t, lo, hi, width)
            return np.exp(half * t) * w

        return _masked(x, (x > eps) & (x < 1.0 / eps), f)

    def value(x):
        x = _arr(x)

        def f(xi):
            t = np.log(xi)
            w, dw = window(t, lo, hi, width)
            return np.exp((half - 1.0) * t) * (half * w + dw)

        return _masked(x, (x > eps) & (x < 1.0 / eps), f)

    def tail(x):
        return -forward(x)

    bps = (eps, eps * math.exp(width), math.exp(-width) / eps, 1.0 / eps)
    return Profile1D(f"extremizer_forward_approx({p:g},{eps:g},w={width:g})", value,
                     forward, tail, Decay("compact_support", (eps, 1.0 / eps)), bps,
                     (eps, 1.0 / eps))


def _backward_extremizer_approx(p: float, eps: float, width: float = LOG2) -> Profile1D:
    """``int_x^inf f = x^(-p/2)`` on ``[eps, 1/eps]`` (mirror of the forward family)."""
    prof = _forward_extremizer_approx(p, eps, width).inverted()
    return replace(prof, label=f"extremizer_backward_approx({p:g},{eps:g},w={width:g})")


PROFILES_1D = ("exp_decay", "power_window", "bump", "extremizer_forward_approx",
               "extremizer_backward_approx")


def make_profile_1d(name: str, params: Sequence[float] = ()) -> Profile1D:
    params = [float(p) for p in params]
    try:
        if name == "exp_decay":
            return _exp_decay_1d(*params)
        if name == "power_window":
            return _power_window(*params)
        if name == "bump":
            return _bump_1d(*(params or [1.0, 2.0]))
        if name == "extremizer_forward_approx":
            return _forward_extremizer_approx(*params)
        if name == "extremizer_backward_approx":
            return _backward_extremizer_approx(*params)
    except TypeError as exc:
        raise ValidationError(f"bad parameters {params} for profile {name!r}") from exc
    raise ValidationError(f"unknown 1-D profile {name!r}; choose from {', '.join(PROFILES_1D)}")


def zero_profile_1d() -> Profile1D:
    z = lambda x: np.zeros(np.shape(x))  # noqa: E731
    return Profile1D("zero", z, z, z, Decay("compact_support", (1.0, 2.0)), (1.0, 2.0), (1.0, 2.0))


# --------------------------------------------------------------------------
# exact extremizer forms
# --------------------------------------------------------------------------

EXTREMIZER_KINDS = ("subcritical", "logarithmic", "oned_forward", "oned_backward")


@dataclass(frozen=True)
class ExtremizerSpec:
    """An exact (non-integrable) extremizer form.

    ``amplitude`` is the sphere integral of ``|psi|^2`` for the radial kinds
    and the constant ``c`` for the one-dimensional kinds.
    """

    kind: str
    amplitude: float = 1.0
    n: int | None = None
    R: float | None = None
    p: float | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kind not in EXTREMIZER_KINDS:
            raise ValidationError(f"unknown extremizer kind {self.kind!r}")
        if self.kind == "subcritical" and (self.n is None or self.n < 3):
            raise ValidationError("subcritical form needs n >= 3")
        if self.kind == "logarithmic" and (self.n is None or self.n < 2 or not (self.R or 0) > 0):
            raise ValidationError("logarithmic form needs n >= 2 and R > 0")
        if self.kind.startswith("oned") and not (self.p or 0) > 0:
            raise ValidationError("one-dimensional forms need p > 0")

    @property
    def expected_slope(self) -> float:
        """Growth rate of the windowed left-hand integrand per unit log-window."""
        if self.kind.startswith("oned"):
            return abs(self.amplitude) ** 2
        return float(self.amplitude)

    def radial_value(self, r):
        """Pointwise profile of the form (the angular factor is carried by amplitude)."""
        r = _arr(r)
        if self.kind == "subcritical":
            return r ** (-(self.n - 2) / 2)
        if self.kind == "logarithmic":
            return np.sqrt(np.abs(np.log(self.R / r)))
        if self.kind == "oned_forward":
            return self.amplitude * r ** (self.p / 2)     # the primitive int_0^x f
        return self.amplitude * r ** (-self.p / 2)        # the tail int_x^inf f

    def value_log_distance(self, u):
        """Logarithmic form as a function of ``u = log(R/r)``, avoiding the round trip through r."""
        if self.kind != "logarithmic":
            raise ValidationError("value_log_distance applies to the logarithmic form only")
        return np.sqrt(np.abs(_arr(u)))
