"""The orthogonality lemma behind every remainder identity, in finite dimension.

For ``u, v`` in a complex inner-product space and ``c > 0`` the statements

* ``|u|^2 + 2c Re(u|v) = 0``
* ``|u|^2 - 4c^2 |v|^2 + |u + 2cv|^2 = 0``
* ``Re(u | u + 2cv) = 0``

are equivalent; polarization makes the second residual exactly twice the
first and the third (``2 Re(u | u + 2cv)``) equal to the second.

The inner product is conjugate-linear in the second slot.  Only its real
part ever enters the lemma, so the convention is invisible to the checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .identities import DEFAULT_REL_TOL, lemma_pieces

ROUNDING_TOL = 1e-12


def _vec(u) -> np.ndarray:
    a = np.asarray(u, dtype=complex)
    if a.ndim != 1 or a.size == 0:
        raise ValueError("vectors must be one-dimensional with at least one component")
    if not np.all(np.isfinite(a)):
        raise ValueError("vector components must be finite")
    return a


def _pair(u, v) -> tuple[np.ndarray, np.ndarray]:
    u, v = _vec(u), _vec(v)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.size} vs {v.size}")
    return u, v


def inner(u, v) -> complex:
    """``(u|v) = sum u_i conj(v_i)``."""
    u, v = _pair(u, v)
    return complex(np.vdot(v, u))


def norm_sq(u) -> float:
    u = _vec(u)
    return float(np.vdot(u, u).real)


@dataclass(frozen=True)
class LemmaCheck:
    u: np.ndarray | None
    v: np.ndarray | None
    c: float
    res_1_23: float
    res_1_24: float
    res_1_25: float
    scale: float

    def consistent(self, tol: float = ROUNDING_TOL) -> bool:
        """``res_1_24 = 2 res_1_23 = res_1_25`` up to rounding relative to ``scale``."""
        bound = tol * max(self.scale, 1e-300)
        return (abs(self.res_1_24 - 2 * self.res_1_23) <= bound
                and abs(self.res_1_25 - 2 * self.res_1_23) <= bound)

    def vanishes(self, tol: float = ROUNDING_TOL) -> bool:
        bound = tol * max(self.scale, 1e-300)
        return all(abs(r) <= bound for r in (self.res_1_23, self.res_1_24, self.res_1_25))


def lemma1_residuals(u, v, c: float) -> LemmaCheck:
    if not c > 0:
        raise ValueError(f"c must be positive, got {c}")
    u, v = _pair(u, v)
    nu, nv = norm_sq(u), norm_sq(v)
    w = u + 2 * c * v
    re_uv = inner(u, v).real
    res23 = math.fsum([nu, 2 * c * re_uv])
    res24 = math.fsum([nu, -4 * c * c * nv, norm_sq(w)])
    res25 = 2 * inner(u, w).real
    return LemmaCheck(u, v, c, res23, res24, res25, nu + 4 * c * c * nv)


def polarization_defect(u, v, c: float) -> float:
    """``|u+2cv|^2 - |u|^2 - 4c Re(u|v) - 4c^2|v|^2``, relative to ``|u|^2 + 4c^2|v|^2``."""
    u, v = _pair(u, v)
    nu, nv = norm_sq(u), norm_sq(v)
    d = math.fsum([norm_sq(u + 2 * c * v), -nu, -4 * c * inner(u, v).real, -4 * c * c * nv])
    return abs(d) / max(nu + 4 * c * c * nv, 1e-300)


def equality_case(u, c: float) -> np.ndarray:
    """``v = -u / (2c)``, for which ``u + 2cv = 0``."""
    return -_vec(u) / (2 * c)


def orthogonal_case(u, w, c: float) -> np.ndarray:
    """A ``v`` with ``Re(u | u + 2cv) = 0``, built from an arbitrary ``w``.

    ``u + 2cv`` is taken to be ``w`` minus its real-orthogonal projection onto
    ``u``, i.e. orthogonal to ``u`` for the real inner product ``Re(.|.)``.
    """
    u, w = _pair(u, w)
    nu = norm_sq(u)
    if nu == 0.0:
        raise ValueError("u must be nonzero")
    z = w - (inner(w, u).real / nu) * u
    return (z - u) / (2 * c)


def cauchy_schwarz_holds(check: LemmaCheck, tol: float = ROUNDING_TOL) -> bool:
    """When the first residual vanishes, ``|u| <= 2c |v|``."""
    return math.sqrt(norm_sq(check.u)) <= 2 * check.c * math.sqrt(norm_sq(check.v)) + tol


@dataclass(frozen=True)
class RandomSuiteResult:
    trials: int
    dim: int
    seed: int
    max_consistency_defect: float
    max_polarization_defect: float
    max_equality_residual: float
    max_orthogonal_residual: float
    cauchy_schwarz_ok: bool
    passed: bool

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def random_suite(trials: int = 1000, dim: int = 16, seed: int = 0,
                 tol: float = ROUNDING_TOL) -> RandomSuiteResult:
    """Random generic, equality-case and orthogonal-case triples ``(u, v, c)``."""
    if trials < 1 or dim < 1:
        raise ValueError("trials and dim must be positive")
    rng = np.random.default_rng(seed)
    cons = pol = eq = orth = 0.0
    cs_ok = True
    for _ in range(trials):
        u = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        w = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        c = float(np.exp(rng.uniform(-3.0, 3.0)))
        chk = lemma1_residuals(u, v, c)
        scale = chk.scale
        cons = max(cons, abs(chk.res_1_24 - 2 * chk.res_1_23) / scale,
                   abs(chk.res_1_25 - 2 * chk.res_1_23) / scale)
        pol = max(pol, polarization_defect(u, v, c))
        for v_special, slot in ((equality_case(u, c), "eq"), (orthogonal_case(u, w, c), "orth")):
            chk = lemma1_residuals(u, v_special, c)
            worst = max(abs(chk.res_1_23), abs(chk.res_1_24), abs(chk.res_1_25)) / chk.scale
            if slot == "eq":
                eq = max(eq, worst)
            else:
                orth = max(orth, worst)
            cs_ok = cs_ok and cauchy_schwarz_holds(chk, tol * math.sqrt(chk.scale))
    ok = max(cons, pol, eq, orth) <= tol and cs_ok
    return RandomSuiteResult(trials, dim, seed, cons, pol, eq, orth, cs_ok, bool(ok))


@dataclass(frozen=True)
class WeightedLemmaCheck:
    """The lemma's residuals with ``u``, ``v`` the functions an identity is built from."""

    identity_id: str
    c: float
    res_1_23: float
    res_1_24: float
    res_1_25: float
    scale: float

    @property
    def relative(self) -> float:
        return abs(self.res_1_23) / self.scale if self.scale else 0.0


def lemma1_in_weighted_space(identity_id: str, f, params: dict | None = None,
                             rel_tol: float = DEFAULT_REL_TOL) -> WeightedLemmaCheck:
    """Residuals computed from quadrature inner products in the matching weighted L^2.

    A vanishing first residual says that the integration by parts step lands
    exactly in the lemma's hypothesis ``|u|^2 = -2c Re(u|v)``.
    """
    pc = lemma_pieces(identity_id, f, params, rel_tol)
    c = pc.c
    res23 = math.fsum([pc.norm_u_sq, 2 * c * pc.re_uv])
    res24 = math.fsum([pc.norm_u_sq, -4 * c * c * pc.norm_v_sq, pc.norm_u_2cv_sq])
    res25 = 2 * pc.re_u_u2cv
    return WeightedLemmaCheck(identity_id, c, res23, res24, res25,
                              pc.norm_u_sq + 4 * c * c * pc.norm_v_sq)
