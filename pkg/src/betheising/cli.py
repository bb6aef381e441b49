"""Command-line front end.

Data goes to stdout (or --output) as CSV or JSON, diagnostics to stderr.
Exit codes: 0 success/verified, 1 verification failure or mismatch,
2 usage/configuration error.  Identical configurations produce
byte-identical output; nothing here is stochastic.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .analysis import (
    arm_constants,
    critical_series,
    estimate_betac,
    fit_exponent,
    geometric_heights,
    scan_beta,
)
from .bounds import factorization_suite, grid_suites, run_sandwich
from .errors import (
    BetheIsingError,
    ClassifierError,
    ConfigError,
    DomainError,
    ModeError,
    PrecisionFailure,
    SizeGuardError,
    VerificationFailure,
)
from .numerics import (
    DEFAULT_PRECISION_BITS,
    format_scalar,
    relative_difference,
    validate_digits,
    validate_precision,
)
from .params import ModelParams, max_exact_index
from .recursion import collect_series, iterate_ratio, magnetization_rooted
from .oracle import root_magnetization_bruteforce

PRECISION_ENV_VAR = "BETHE_PRECISION_BITS"


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _parse_rational(text: str) -> Fraction:
    """Decimal or p/q string to an exact Fraction."""
    try:
        return Fraction(text)
    except ValueError:
        return Fraction(float(text))


def _resolve_params(args) -> ModelParams:
    if getattr(args, "t", None):
        return ModelParams.from_t(args.d, _parse_rational(args.t))
    beta = getattr(args, "beta", "critical")
    if beta == "critical":
        return ModelParams.critical(args.d)
    return ModelParams.from_beta(args.d, _parse_rational(beta))


def _resolve_precision(args) -> int:
    if args.precision_bits is not None:
        return validate_precision(args.precision_bits)
    env = os.environ.get(PRECISION_ENV_VAR)
    if env is not None:
        try:
            bits = int(env)
        except ValueError as exc:
            raise ConfigError(f"{PRECISION_ENV_VAR} must be an integer, got {env!r}") from exc
        return validate_precision(bits)
    return DEFAULT_PRECISION_BITS


def _emit(meta: dict, columns: list[str], rows: list[dict], args) -> None:
    digits = validate_digits(args.digits)

    def fmt(value):
        if isinstance(value, str):
            return value
        if isinstance(value, bool):
            return "true" if value else "false"
        if value is None:
            return ""
        return format_scalar(value, digits)

    if args.format == "json":
        payload = {
            "meta": {k: (v if isinstance(v, (int, str)) else fmt(v)) for k, v in meta.items()},
            "rows": [{c: (row[c] if isinstance(row[c], int) else fmt(row[c])) for c in columns} for row in rows],
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([fmt(row[c]) for c in columns])
        text = buffer.getvalue()
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def _meta(args, params: ModelParams | None, mode: str, precision_bits: int) -> dict:
    return {
        "d": args.d,
        "beta": params.describe_beta() if params is not None else "critical",
        "mode": mode,
        "precision_bits": precision_bits,
        "artifact_version": __version__,
    }


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _auto_mode(params: ModelParams, top_index: int) -> str:
    """Exact when the parameters allow it and the run fits the exact-size guard."""
    if params.is_exact and top_index <= max_exact_index(params.d):
        return "exact"
    return "float"


def cmd_magnetize(args) -> int:
    params = _resolve_params(args)
    bits = _resolve_precision(args)
    mode = _auto_mode(params, args.n - 1) if args.mode == "auto" else args.mode
    if args.n < 0:
        raise DomainError("--n must be non-negative")
    if args.sample:
        kind, _, ratio = args.sample.partition(":")
        if kind != "geometric" or not ratio:
            raise ConfigError("--sample must look like geometric:1.2")
        heights = geometric_heights(1, args.n, float(ratio)) if args.n else []
    else:
        heights = range(1, args.n + 1)
    series = collect_series(params, heights, mode, bits)
    rows = [{"n": r.n, "r_prev": r.ratio, "m": r.magnetization} for r in series.rows]
    _emit(_meta(args, params, series.mode, bits), ["n", "r_prev", "m"], rows, args)
    if args.plot:
        from .plotting import save_series_figure

        save_series_figure(series.rows, args.plot, args.d, params.describe_beta())
        print(f"figure written to {args.plot}", file=sys.stderr)
    return 0


def cmd_oracle(args) -> int:
    params = _resolve_params(args)
    bits = _resolve_precision(args)
    mode = _auto_mode(params, args.n - 1) if args.mode == "auto" else args.mode
    exact = mode == "exact"
    rows = []
    all_match = True
    recursion_values = {}
    for state in iterate_ratio(params, args.n, mode, bits):
        recursion_values[state.index + 1] = magnetization_rooted(state)
    for height in range(1, args.n + 1):
        brute = root_magnetization_bruteforce(args.d, height, params, mode, bits)
        rec = recursion_values[height]
        if exact:
            match = brute == rec
        else:
            match = relative_difference(brute, rec) <= 2 ** (8 - bits)
        all_match &= match
        rows.append({
            "n": height,
            "bruteforce": brute,
            "recursion": rec,
            "match": match,
        })
    _emit(_meta(args, params, mode, bits), ["n", "bruteforce", "recursion", "match"], rows, args)
    verdict = "MATCH (exact)" if exact else "MATCH (float)"
    print(verdict if all_match else "MISMATCH", file=sys.stderr)
    return 0 if all_match else 1


def _suite_rows(reports) -> list[dict]:
    rows = []
    for rep in reports:
        if hasattr(rep, "name"):  # SuiteReport
            rows.append({
                "suite": rep.name,
                "checked": rep.checked,
                "violations": len(rep.violations),
                "near_ties": rep.near_ties if isinstance(rep.near_ties, int) else len(rep.near_ties),
                "min_margin": rep.min_margin,
                "passed": rep.passed,
            })
        else:  # SandwichReport
            margin = None
            if rep.min_slack_lower is not None and rep.min_slack_upper is not None:
                margin = min(rep.min_slack_lower, rep.min_slack_upper)
            rows.append({
                "suite": f"lemma3-sandwich-d{rep.d}",
                "checked": rep.n_checked,
                "violations": len(rep.violations),
                "near_ties": len(rep.near_ties),
                "min_margin": margin,
                "passed": rep.passed,
            })
    return rows


def cmd_verify(args) -> int:
    bits = _resolve_precision(args)
    reports = []
    if args.target in ("bounds", "all"):
        reports.append(run_sandwich(args.d, args.n_max, bits, inject_fault=args.inject_fault))
    if args.target == "all":
        reports.extend(grid_suites(precision_bits=bits, n_max=args.n_max))
    if args.target in ("poly", "all"):
        reports.append(factorization_suite(args.d_max))
    rows = _suite_rows(reports)
    meta = {
        "d": args.d,
        "beta": "critical",
        "mode": "float",
        "precision_bits": bits,
        "artifact_version": __version__,
    }
    _emit(meta, ["suite", "checked", "violations", "near_ties", "min_margin", "passed"], rows, args)
    ok = all(row["passed"] for row in rows)
    print("VERIFIED" if ok else "VIOLATIONS FOUND", file=sys.stderr)
    return 0 if ok else 1


def cmd_fit(args) -> int:
    bits = _resolve_precision(args)
    lo_hi = args.window.split(":")
    if len(lo_hi) != 2:
        raise ConfigError("--window must look like 1000:1000000")
    window = (int(lo_hi[0]), int(lo_hi[1]))
    series = critical_series(args.d, window, bits)
    fit = fit_exponent(series, window)
    arms = arm_constants(series, window)
    rows = [{
        "d": args.d,
        "window_lo": window[0],
        "window_hi": window[1],
        "n_points": fit.n_points,
        "rho_hat": fit.rho_hat,
        "stderr": fit.stderr,
        "residual_max": fit.residual_max,
        "c_hat": arms.c_hat,
        "C_hat": arms.C_hat,
    }]
    _emit(
        _meta(args, ModelParams.critical(args.d), "float", bits),
        ["d", "window_lo", "window_hi", "n_points", "rho_hat", "stderr", "residual_max", "c_hat", "C_hat"],
        rows,
        args,
    )
    if args.plot:
        from .plotting import save_fit_figure

        save_fit_figure(series.rows, fit, args.plot, args.d)
        print(f"figure written to {args.plot}", file=sys.stderr)
    return 0


def cmd_scan(args) -> int:
    bits = _resolve_precision(args)
    lo = _parse_rational(args.beta_min)
    hi = _parse_rational(args.beta_max)
    if args.steps < 1:
        raise ConfigError("--steps must be >= 1")
    if args.steps == 1:
        grid = [lo]
    else:
        step = (hi - lo) / (args.steps - 1)
        grid = [lo + i * step for i in range(args.steps)]
    results = scan_beta(args.d, grid, args.n, bits)
    rows = [{"beta": beta, "m": m} for beta, m in results]
    meta = {
        "d": args.d,
        "beta": f"scan[{args.beta_min},{args.beta_max}]",
        "mode": "float",
        "precision_bits": bits,
        "artifact_version": __version__,
    }
    _emit(meta, ["beta", "m"], rows, args)
    if args.plot:
        from .plotting import save_scan_figure

        save_scan_figure(results, args.plot, args.d, args.n)
        print(f"figure written to {args.plot}", file=sys.stderr)
    return 0


def cmd_betac(args) -> int:
    bits = _resolve_precision(args)
    result = estimate_betac(args.d, args.tol, bits)
    rows = [{
        "d": args.d,
        "beta_hat": result.beta_hat,
        "reference": result.reference,
        "deviation": result.deviation,
        "bracket_lo": result.bracket[0],
        "bracket_hi": result.bracket[1],
        "classifications": len(result.classifications),
    }]
    meta = {
        "d": args.d,
        "beta": "estimated",
        "mode": "float",
        "precision_bits": bits,
        "artifact_version": __version__,
    }
    _emit(meta, ["d", "beta_hat", "reference", "deviation", "bracket_lo", "bracket_hi", "classifications"], rows, args)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="betheising",
        description="Root magnetization of the Ising model on rooted Cayley trees: "
                    "recursion, brute-force oracle, bound verification, exponent fits.",
    )
    parser.add_argument("--version", action="version", version=f"betheising {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--output", default="-", help="output path, '-' for stdout")
    common.add_argument("--digits", type=int, default=17, help="significant digits for floats [6..50]")
    common.add_argument("--precision-bits", type=int, default=None,
                        help=f"float mantissa bits [64..4096]; default ${PRECISION_ENV_VAR} or 128")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("magnetize", parents=[common], help="emit (n, r_prev, m_n) rows")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--beta", default="critical", help="'critical' or a positive decimal")
    p.add_argument("--t", default=None, help="exact t = e^(2*beta) as p/q (enables exact mode)")
    p.add_argument("--n", type=int, required=True, help="largest height")
    p.add_argument("--mode", choices=("auto", "exact", "float"), default="auto")
    p.add_argument("--sample", default=None, help="subsample heights, e.g. geometric:1.2")
    p.add_argument("--plot", default=None, help="also render a log-log figure to this file")
    p.set_defaults(func=cmd_magnetize)

    p = sub.add_parser("oracle", parents=[common], help="brute force vs recursion comparison")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True, help="largest height to compare")
    p.add_argument("--beta", default="critical")
    p.add_argument("--t", default=None)
    p.add_argument("--mode", choices=("auto", "exact", "float"), default="auto")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("target", choices=("bounds", "poly", "all"))
    p.add_argument("--d", type=int, default=2, help="branching number for the sandwich check")
    p.add_argument("--n-max", type=int, default=100_000, help="largest height / grid extent")
    p.add_argument("--d-max", type=int, default=200, help="largest d for the factorization sweep")
    p.add_argument("--inject-fault", action="store_true",
                   help="perturb the series to demonstrate violation detection")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fit", parents=[common], help="decay-exponent fit at criticality")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--window", default="1000:1000000", help="fit window as lo:hi")
    p.add_argument("--plot", default=None)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("scan", parents=[common], help="magnetization across a beta grid")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--beta-min", required=True)
    p.add_argument("--beta-max", required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--plot", default=None)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("betac", parents=[common], help="bisection estimate of beta_c")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-5)
    p.set_defaults(func=cmd_betac)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, ModeError, SizeGuardError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (VerificationFailure, PrecisionFailure, ClassifierError) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1
    except BetheIsingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
