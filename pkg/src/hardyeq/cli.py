"""Command-line front end.

Exit status: 0 when every report passed, 1 when a report failed, 2 for usage
errors, 3 for numerical failures (quadrature breakdown, divergent input).

Settings are resolved as: command-line flag, then ``--config`` file (flat
``key = value`` lines, keys named like the long flags), then the
``HARDYEQ_REL_TOL`` environment variable for the quadrature tolerance, then
built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path
from typing import Sequence

from . import acceptance, hilbert, identities as ids, sharpness
from .functions import (ExtremizerSpec, ValidationError, make_family, make_profile_1d,
                        sphere_surface_measure)
from .quadrature import DomainError, QuadratureError
from .report import FORMATS, Curve, emit_report

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3
ENV_REL_TOL = "HARDYEQ_REL_TOL"

DEFAULTS = {
    "rel_tol": ids.DEFAULT_REL_TOL,
    "threshold": ids.DEFAULT_THRESHOLD,
    "format": "json",
    "output": None,
    "theorem": None,
    "n": None,
    "R": 1.0,
    "p": 1.0,
    "family": None,
    "family_params": "",
    "angular": None,
    "identity": None,
    "direction": "forward",
    "eps_list": "1e-2,1e-4,1e-8,1e-16",
    "ramp_fraction": sharpness.DEFAULT_RAMP_FRACTION,
    "windows": None,
    "amplitude": None,
    "trials": 1000,
    "dim": 16,
    "seed": 0,
    "R_list": "0.5,1,2",
}

DEFAULT_FAMILY = {1: "gaussian", 2: "gaussian", 3: "exp_decay"}
DEFAULT_N = {1: 3, 2: 2}


class UsageError(Exception):
    pass


def _floats(text: str, what: str) -> list[float]:
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"{what}: expected comma-separated numbers, got {text!r}") from exc


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value file; flags take precedence")
    common.add_argument("--rel-tol", type=float, help=f"quadrature tolerance (env {ENV_REL_TOL})")
    common.add_argument("--threshold", type=float, help="pass threshold on residual_rel")
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--output", help="output path (stdout when omitted)")

    def theorem_args(p, n=True, family=True):
        p.add_argument("--theorem", type=int, choices=(1, 2, 3))
        if n:
            p.add_argument("-n", type=int, dest="n", help="dimension")
        p.add_argument("-R", type=float, dest="R", help="radius of the sphere (theorem 2)")
        p.add_argument("-p", type=float, dest="p", help="weight exponent (theorem 3)")
        p.add_argument("--direction", choices=("forward", "backward"),
                       help="theorem 3: primitive from 0 or tail to infinity")
        if family:
            p.add_argument("--family")
            p.add_argument("--family-params", help="comma-separated family parameters")
            p.add_argument("--angular", help="angular factor: constant or first_harmonic")

    parser = argparse.ArgumentParser(prog="hardyeq", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="evaluate one remainder identity")
    theorem_args(p)
    p.add_argument("--identity", choices=ids.IDENTITY_IDS)

    p = sub.add_parser("sharpness", parents=[common], help="Rayleigh-quotient sweep")
    theorem_args(p, family=False)
    p.add_argument("--eps-list")
    p.add_argument("--ramp-fraction", type=float)

    p = sub.add_parser("divergence", parents=[common], help="log-divergence fit of an extremizer form")
    theorem_args(p, family=False)
    p.add_argument("--amplitude", type=float)
    p.add_argument("--windows", help="comma-separated lo:hi pairs")

    p = sub.add_parser("lemma1", parents=[common], help="randomized orthogonality-lemma suite")
    p.add_argument("--trials", type=int)
    p.add_argument("--dim", type=int)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("r-sweep", parents=[common], help="logarithmic identity over several radii")
    p.add_argument("-n", type=int, dest="n")
    p.add_argument("--family")
    p.add_argument("--family-params")
    p.add_argument("--angular")
    p.add_argument("--R-list", dest="R_list")

    sub.add_parser("all", parents=[common], help="run the full acceptance suite")
    return parser


def _read_config(path: str) -> dict:
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path!r}: {exc}") from exc
    out = {}
    for i, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{i}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in DEFAULTS:
            raise UsageError(f"{path}:{i}: unknown key {key!r}")
        out[key] = value
    return out


_TYPES = {"rel_tol": float, "threshold": float, "theorem": int, "n": int, "R": float,
          "p": float, "ramp_fraction": float, "amplitude": float, "trials": int, "dim": int,
          "seed": int}


def resolve(args: argparse.Namespace, environ=os.environ) -> argparse.Namespace:
    """Merge defaults, environment, config file and flags (in rising precedence)."""
    cfg = dict(DEFAULTS)
    if environ.get(ENV_REL_TOL):
        cfg["rel_tol"] = environ[ENV_REL_TOL]
    if args.config:
        cfg.update(_read_config(args.config))
    for key, value in vars(args).items():
        if value is not None and key in cfg:
            cfg[key] = value
    for key, typ in _TYPES.items():
        if cfg[key] is not None:
            try:
                cfg[key] = typ(cfg[key])
            except ValueError as exc:
                raise UsageError(f"{key}: cannot parse {cfg[key]!r}") from exc
    if cfg["format"] not in FORMATS:
        raise UsageError(f"format must be one of {', '.join(FORMATS)}")
    if not cfg["rel_tol"] >= 1e-14:
        raise UsageError(f"rel_tol must be >= 1e-14, got {cfg['rel_tol']}")
    return argparse.Namespace(command=args.command, **cfg)


def _check_params(cfg) -> None:
    t = cfg.theorem
    if t is None:
        raise UsageError("--theorem is required")
    if t in DEFAULT_N and cfg.n is None:
        cfg.n = DEFAULT_N[t]
    if t == 1 and cfg.n < 3:
        raise UsageError(f"theorem 1 requires n >= 3, got n={cfg.n}")
    if t == 2:
        if cfg.n < 2:
            raise UsageError(f"theorem 2 requires n >= 2, got n={cfg.n}")
        if not cfg.R > 0:
            raise UsageError(f"theorem 2 requires R > 0, got R={cfg.R}")
    if t == 3:
        if cfg.n not in (None, 1):
            raise UsageError(f"theorem 3 is one-dimensional, got n={cfg.n}")
        if not cfg.p > 0:
            raise UsageError(f"theorem 3 requires p > 0, got p={cfg.p}")


def _identity_for(cfg) -> str:
    if cfg.identity:
        if not cfg.identity.startswith(f"T{cfg.theorem}_"):
            raise UsageError(f"identity {cfg.identity} does not belong to theorem {cfg.theorem}")
        return cfg.identity
    if cfg.theorem == 1:
        return "T1_eq15"
    if cfg.theorem == 2:
        return "T2_eq19"
    return "T3_eq117" if cfg.direction == "backward" else "T3_eq113"


def _test_function(cfg):
    family = cfg.family or DEFAULT_FAMILY[cfg.theorem]
    params = _floats(cfg.family_params, "--family-params")
    if cfg.theorem == 3:
        return make_profile_1d(family, params)
    return make_family(family, params, cfg.n, angular=cfg.angular)


def _emit(items, cfg) -> None:
    try:
        out = emit_report(items, cfg.format, cfg.output)
    except TypeError as exc:
        raise UsageError(f"format {cfg.format!r} is not available here: {exc}") from exc
    except OSError as exc:
        raise UsageError(f"cannot write {cfg.output!r}: {exc}") from exc
    if isinstance(out, str):
        sys.stdout.write(out)


def _cmd_verify(cfg) -> int:
    _check_params(cfg)
    ident = _identity_for(cfg)
    f = _test_function(cfg)
    rep = ids.evaluate(ident, f, {"R": cfg.R, "p": cfg.p}, cfg.rel_tol, cfg.threshold)
    _emit([rep], cfg)
    return EXIT_OK if rep.passed else EXIT_FAILED


def _cmd_sharpness(cfg) -> int:
    _check_params(cfg)
    ident = _identity_for(cfg)
    params = {"n": cfg.n, "R": cfg.R, "p": cfg.p}
    eps = _floats(cfg.eps_list, "--eps-list")
    try:
        res = sharpness.sharpness_sweep(ident, None, eps, params, cfg.rel_tol, cfg.ramp_fraction)
        status = EXIT_OK
    except sharpness.SweepPropertyError as exc:
        print(f"sweep property violated: {exc}", file=sys.stderr)
        res, status = exc.result, EXIT_FAILED
    _emit([res], cfg)
    return status


def _default_windows(theorem: int) -> list[tuple[float, float]]:
    if theorem == 2:
        return [(1e-2, 1.0), (1e-4, 1.0), (1e-6, 1.0), (1e-8, 1.0)]
    return [(1e-1, 10.0), (1e-2, 100.0), (1e-3, 1e3), (1e-4, 1e4)]


def _cmd_divergence(cfg) -> int:
    _check_params(cfg)
    if cfg.windows:
        try:
            windows = [tuple(float(v) for v in w.split(":")) for w in cfg.windows.split(",")]
        except ValueError as exc:
            raise UsageError(f"--windows: expected lo:hi pairs, got {cfg.windows!r}") from exc
        if any(len(w) != 2 for w in windows):
            raise UsageError("--windows: expected lo:hi pairs")
    else:
        windows = _default_windows(cfg.theorem)
    if cfg.theorem == 3:
        kind = "oned_backward" if cfg.direction == "backward" else "oned_forward"
        amp = 1.0 if cfg.amplitude is None else cfg.amplitude
        spec = ExtremizerSpec(kind, amp, p=cfg.p)
    else:
        amp = sphere_surface_measure(cfg.n) if cfg.amplitude is None else cfg.amplitude
        kind = "subcritical" if cfg.theorem == 1 else "logarithmic"
        spec = ExtremizerSpec(kind, amp, n=cfg.n, R=cfg.R if cfg.theorem == 2 else None)
    try:
        d = sharpness.divergence_diagnostic(spec, windows)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit([d], cfg)
    return EXIT_OK if d.passed else EXIT_FAILED


class _SuiteView:
    def __init__(self, result):
        self.result = result

    def to_dict(self):
        return self.result.to_dict()


def _cmd_lemma1(cfg) -> int:
    if cfg.trials < 1 or cfg.dim < 1:
        raise UsageError("--trials and --dim must be positive")
    res = hilbert.random_suite(cfg.trials, cfg.dim, cfg.seed)
    worst = max(res.max_consistency_defect, res.max_polarization_defect,
                res.max_equality_residual, res.max_orthogonal_residual)
    print(f"max residual {worst:.3e} over {res.trials} trials (d={res.dim}, seed={res.seed})",
          file=sys.stderr)
    if cfg.format == "plot":
        raise UsageError("lemma1 has no plot output")
    _emit([_SuiteView(res)], cfg)
    return EXIT_OK if res.passed else EXIT_FAILED


def _cmd_r_sweep(cfg) -> int:
    cfg.theorem = 2
    _check_params(cfg)
    f = _test_function(cfg)
    radii = _floats(cfg.R_list, "--R-list")
    if not radii or any(not r > 0 for r in radii):
        raise UsageError("--R-list needs positive radii")
    reps = sharpness.r_sweep_T2(f, radii, cfg.rel_tol, cfg.threshold)
    spread = sharpness.main_term_spread(reps)
    if cfg.format == "plot":
        _emit([Curve("lhs_vs_R", [(r.params["R"], r.lhs) for r in reps])], cfg)
    else:
        _emit(reps, cfg)
    return EXIT_OK if all(r.passed for r in reps) and spread <= 1e-10 else EXIT_FAILED


def _cmd_all(cfg) -> int:
    results = acceptance.run_all(echo=print)
    if cfg.output:
        Path(cfg.output).write_text(json.dumps([r.to_dict() for r in results], indent=2) + "\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED


COMMANDS = {"verify": _cmd_verify, "sharpness": _cmd_sharpness, "divergence": _cmd_divergence,
            "lemma1": _cmd_lemma1, "r-sweep": _cmd_r_sweep, "all": _cmd_all}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        cfg = resolve(args)
        return COMMANDS[cfg.command](cfg)
    except (UsageError, ValidationError) as exc:
        print(f"hardyeq {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QuadratureError, DomainError, ids.ExtremizerDivergence,
            sharpness.UndefinedQuotient) as exc:
        failure = {"error": type(exc).__name__, "message": str(exc)}
        best = getattr(exc, "best", None)
        if best is not None:
            failure["best_value"] = best.value if math.isfinite(best.value) else None
            failure["best_error"] = best.error_estimate if math.isfinite(best.error_estimate) else None
        text = json.dumps(failure, indent=2) + "\n"
        if cfg.output:
            Path(cfg.output).write_text(text)
        else:
            sys.stdout.write(text)
        print(f"hardyeq {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    raise SystemExit(main())
