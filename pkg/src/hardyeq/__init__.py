"""Numerical verification of Hardy-type remainder identities and their sharp constants."""

from .functions import (ExtremizerSpec, Profile1D, ProductTestFunction, RadialProfile,
                        ValidationError, make_family, make_profile_1d, zero_function,
                        zero_profile_1d)
from .hilbert import inner, lemma1_in_weighted_space, lemma1_residuals, random_suite
from .identities import (ExtremizerDivergence, IdentityReport, cross_check_ibp,
                         eval_T1, eval_T1_fullgradient, eval_T2, eval_T3_backward,
                         eval_T3_forward, evaluate, verify_corollary_inequalities)
from .quadrature import (DomainError, QuadratureError, QuadResult, integrate_finite,
                         integrate_halfline, integrate_log_split)
from .report import emit_report
from .sharpness import (divergence_diagnostic, r_sweep_T2, rayleigh_quotient,
                        sharpness_sweep)

__all__ = [
    "DomainError", "ExtremizerDivergence", "ExtremizerSpec", "IdentityReport", "Profile1D",
    "ProductTestFunction", "QuadResult", "QuadratureError", "RadialProfile", "ValidationError",
    "cross_check_ibp", "divergence_diagnostic", "emit_report", "eval_T1", "eval_T1_fullgradient",
    "eval_T2", "eval_T3_backward", "eval_T3_forward", "evaluate", "inner", "integrate_finite",
    "integrate_halfline", "integrate_log_split", "lemma1_in_weighted_space", "lemma1_residuals",
    "make_family", "make_profile_1d", "r_sweep_T2", "random_suite", "rayleigh_quotient",
    "sharpness_sweep", "verify_corollary_inequalities", "zero_function", "zero_profile_1d",
]
