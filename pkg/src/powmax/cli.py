"""Command-line front end.

Subcommands: eval, norming, delta, rate-table, simulate, verify.  Tables
are emitted as CSV (RFC-4180, 17 significant digits) or JSON (bit-exact
float round trip); diagnostics go to stderr.  Exit status: 0 on success,
2 on validation errors, 3 when any numerical-reliability flag fired even
though output was produced.

Sample sizes are accepted in scientific notation (for example 1e16) since
the ladders exceed any integer type; internally log(n) is the carrier.
The Monte Carlo pair-draw budget honors the POWMAX_PAIR_BUDGET environment
variable.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Any, Sequence

from .finite_law import DeltaResult, RateTable, delta_at, rate_table
from .hr import gumbel, hr_cdf, hr_exponent
from .montecarlo import PairBudgetError, SimConfig, simulate_powered_maxima
from .norming import (
    BN_RULES,
    DependenceRegime,
    NormingScheme,
    RhoSequenceSpec,
    make_norming,
)
from .quadrature import verify_identity_32

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_UNRELIABLE = 3

# A delta row whose propagated error bound crosses this is flagged unreliable.
ACCURACY_FLAG_THRESHOLD = 1e-6

_IDENTITY_NAMES = ("eq32", "tail-integral")

_DEFAULTS: dict[str, dict[str, Any]] = {
    "eval": {"dist": "hr", "lam": 1.0, "x": 0.0, "y": 0.0},
    "norming": {"n": 1e6, "t": 1.0, "scheme": "standard", "bn_rule": "density"},
    "delta": {"n": 1e8, "lam": 1.0, "alpha": 0.0, "t": 1.0, "scheme": "standard",
              "rho_seq": "lambda-alpha", "rho": 0.0, "coef": 0.0,
              "x": 0.0, "y": 0.0, "bn_rule": "density"},
    "rate-table": {"lam": 1.0, "alpha": 0.0, "t": 1.0, "scheme": "standard",
                   "rho_seq": "lambda-alpha", "rho": 0.0, "coef": 0.0,
                   "x": 0.0, "y": 0.0, "ladder": "1e4,1e8,1e16",
                   "bn_rule": "density", "plot_data": None},
    "simulate": {"n": 1000, "reps": 10000, "rho": 0.5, "t": 1.0,
                 "scheme": "standard", "grid_x": "-1,0,1", "grid_y": "-1,0,1",
                 "seed": 20240915, "bn_rule": "density"},
    "verify": {"identity": "eq32", "lam": 1.0, "x": 0.0, "y": 0.0,
               "rel_tol": 1e-10, "abs_tol": 1e-12},
}
_COMMON_DEFAULTS = {"format": "csv", "output": None}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="powmax",
        description="Limit law and convergence-rate tables for powered maxima "
                    "of bivariate Gaussian triangular arrays.",
    )
    parser.add_argument("--config", help="JSON file mirroring the flags of the chosen command")
    sub = parser.add_subparsers(dest="command")

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("csv", "json"), default=None,
                       help="output format (default csv)")
        p.add_argument("--output", default=None, help="output path (default stdout)")

    p = sub.add_parser("eval", help="evaluate the Gumbel or Husler-Reiss law at a point")
    p.add_argument("--dist", choices=("hr", "gumbel"), default=None)
    p.add_argument("--lambda", dest="lam", default=None,
                   help="dependence parameter; 0 and inf select the limit laws")
    p.add_argument("--x", type=float, default=None)
    p.add_argument("--y", type=float, default=None)
    add_common(p)

    p = sub.add_parser("norming", help="solve the norming constants for one n")
    p.add_argument("--n", default=None, help="sample size, scientific notation accepted")
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--scheme", choices=("standard", "starred"), default=None)
    p.add_argument("--bn-rule", dest="bn_rule", choices=BN_RULES, default=None)
    add_common(p)

    def add_regime(p: argparse.ArgumentParser) -> None:
        p.add_argument("--lambda", dest="lam", default=None,
                       help="dependence regime: 0, a positive float, or inf")
        p.add_argument("--alpha", type=float, default=None)
        p.add_argument("--t", type=float, default=None)
        p.add_argument("--scheme", choices=("standard", "starred"), default=None)
        p.add_argument("--rho-seq", dest="rho_seq", default=None,
                       choices=("lambda-alpha", "constant", "bn-pow6", "bn-pow14", "log-ratio"))
        p.add_argument("--rho", type=float, default=None, help="value for --rho-seq constant")
        p.add_argument("--coef", type=float, default=None,
                       help="coefficient for --rho-seq bn-pow6 / bn-pow14")
        p.add_argument("--x", type=float, default=None)
        p.add_argument("--y", type=float, default=None)
        p.add_argument("--bn-rule", dest="bn_rule", choices=BN_RULES, default=None)

    p = sub.add_parser("delta", help="scaled discrepancy at one sample size")
    p.add_argument("--n", default=None)
    add_regime(p)
    add_common(p)

    p = sub.add_parser("rate-table", help="discrepancy ladder with extrapolation")
    add_regime(p)
    p.add_argument("--ladder", default=None, help="comma-separated n values, e.g. 1e4,1e8,1e16")
    p.add_argument("--plot-data", dest="plot_data", default=None,
                   help="also write a (1/log n, scaled delta) CSV to this path")
    add_common(p)

    p = sub.add_parser("simulate", help="Monte Carlo cross-check of the exact law")
    p.add_argument("--n", default=None)
    p.add_argument("--reps", default=None)
    p.add_argument("--rho", type=float, default=None)
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--scheme", choices=("standard", "starred"), default=None)
    p.add_argument("--grid-x", dest="grid_x", default=None, help="comma-separated x values")
    p.add_argument("--grid-y", dest="grid_y", default=None, help="comma-separated y values")
    p.add_argument("--seed", default=None)
    p.add_argument("--bn-rule", dest="bn_rule", choices=BN_RULES, default=None)
    add_common(p)

    p = sub.add_parser("verify", help="check an integral identity against quadrature")
    p.add_argument("--identity", choices=_IDENTITY_NAMES, default=None)
    p.add_argument("--lambda", dest="lam", default=None)
    p.add_argument("--x", type=float, default=None)
    p.add_argument("--y", type=float, default=None)
    p.add_argument("--rel-tol", dest="rel_tol", type=float, default=None)
    p.add_argument("--abs-tol", dest="abs_tol", type=float, default=None)
    add_common(p)

    return parser


def _merge_config(args: argparse.Namespace) -> dict[str, Any]:
    """Layer hard defaults, then the JSON config, then explicit flags."""
    command = args.command
    merged = dict(_DEFAULTS[command]) | dict(_COMMON_DEFAULTS)
    if args.config:
        with open(args.config) as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise ValueError("config file must hold a JSON object")
        allowed = set(merged) | {"command"}
        unknown = set(raw) - allowed
        if unknown:
            raise ValueError(f"unknown config keys for {command!r}: {sorted(unknown)}")
        if raw.get("command", command) != command:
            raise ValueError("config command does not match the invoked command")
        merged.update({k: v for k, v in raw.items() if k != "command"})
    for key in merged:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    return merged


def _parse_lambda(value: Any) -> float:
    lam = float(value)
    if lam < 0.0 or math.isnan(lam):
        raise ValueError(f"dependence parameter must be in [0, inf], got {value}")
    return lam


def _parse_ladder(text: Any) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    return [float(tok) for tok in str(text).split(",") if tok.strip()]


def _fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_rows(rows: list[dict[str, Any]], fmt: str, stream: io.TextIOBase) -> None:
    """Serialize rows as CSV (17 significant digits) or JSON."""
    if not rows:
        raise ValueError("nothing to write")
    if fmt == "csv":
        writer = csv.writer(stream, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
        writer.writerow(rows[0].keys())
        for row in rows:
            writer.writerow([_fmt(v) for v in row.values()])
    else:
        cleaned = [
            {k: (None if isinstance(v, float) and math.isnan(v) else v)
             for k, v in row.items()}
            for row in rows
        ]
        json.dump(cleaned, stream, indent=2, allow_nan=False)
        stream.write("\n")


def emit_plot_data(rows: list[dict[str, Any]], path: str, limit: float) -> None:
    """Write (1/log n, scaled delta) pairs with the limit as a comment line."""
    if not rows:
        raise ValueError("plot data needs at least one ladder row")
    try:
        with open(path, "w", newline="") as fh:
            fh.write(f"# limit={format(limit, '.17g')}\n")
            writer = csv.writer(fh, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
            for row in rows:
                inv_log_n = 1.0 / (math.log(10.0) * row["log10_n"])
                writer.writerow([_fmt(inv_log_n), _fmt(row["scaled"])])
    except OSError as exc:
        raise ValueError(f"cannot write plot data to {path!r}: {exc}") from exc


def _delta_row(r: DeltaResult) -> dict[str, Any]:
    return {
        "log10_n": math.log10(r.n),
        "b_n": r.b_n,
        "rho_n": r.rho_n,
        "delta": r.delta,
        "delta_tilde": r.delta_tilde,
        "scaled": r.scaled_logn,
        "scaled_bn2": r.scaled_bn2,
        "limit": r.limit,
        "residual": r.residual,
        "accuracy_estimate": r.accuracy_estimate,
    }


def _regime_and_spec(opts: dict[str, Any]) -> tuple[DependenceRegime, RhoSequenceSpec]:
    lam = _parse_lambda(opts["lam"])
    alpha = float(opts["alpha"])
    regime = DependenceRegime(lam, alpha if 0.0 < lam < math.inf else 0.0)
    kind = opts["rho_seq"]
    if kind == "constant":
        spec = RhoSequenceSpec("constant", float(opts["rho"]))
    elif kind in ("bn-pow6", "bn-pow14"):
        spec = RhoSequenceSpec(kind, float(opts["coef"]))
    else:
        spec = RhoSequenceSpec(kind)
    return regime, spec


def _scheme(opts: dict[str, Any]) -> NormingScheme:
    return NormingScheme(opts["scheme"], float(opts["t"]))


def _run_command(command: str, opts: dict[str, Any]) -> tuple[list[dict[str, Any]], bool]:
    """Dispatch one command; returns (rows, unreliable_flag)."""
    unreliable = False
    if command == "eval":
        x, y = float(opts["x"]), float(opts["y"])
        if opts["dist"] == "gumbel":
            rows = [{"x": x, "value": gumbel(x)}]
        else:
            lam = _parse_lambda(opts["lam"])
            rows = [{"lambda": lam, "x": x, "y": y,
                     "cdf": hr_cdf(lam, x, y), "exponent": hr_exponent(lam, x, y)}]
        return rows, unreliable

    if command == "norming":
        nc = make_norming(float(opts["n"]), _scheme(opts), opts["bn_rule"])
        return [{
            "log10_n": math.log10(nc.n), "b_n": nc.b_n, "c": nc.c, "d": nc.d,
            "t": nc.scheme.t, "scheme": nc.scheme.kind, "bn_rule": nc.bn_rule,
        }], unreliable

    if command == "delta":
        regime, spec = _regime_and_spec(opts)
        res = delta_at(float(opts["n"]), spec, regime, _scheme(opts),
                       float(opts["x"]), float(opts["y"]), opts["bn_rule"])
        unreliable = res.accuracy_estimate > ACCURACY_FLAG_THRESHOLD
        return [_delta_row(res)], unreliable

    if command == "rate-table":
        regime, spec = _regime_and_spec(opts)
        table: RateTable = rate_table(spec, regime, _scheme(opts),
                                      float(opts["x"]), float(opts["y"]),
                                      _parse_ladder(opts["ladder"]), opts["bn_rule"])
        rows = [_delta_row(r) for r in table.rows]
        for n_failed, message in table.failures:
            print(f"row n={n_failed:g} failed: {message}", file=sys.stderr)
            unreliable = True
        unreliable = unreliable or any(
            r.accuracy_estimate > ACCURACY_FLAG_THRESHOLD for r in table.rows
        )
        data_rows = list(rows)
        if table.extrapolated is not None:
            rows.append({
                "log10_n": None, "b_n": None, "rho_n": None, "delta": None,
                "delta_tilde": None, "scaled": table.extrapolated,
                "scaled_bn2": None, "limit": table.limit,
                "residual": table.extrapolated - table.limit,
                "accuracy_estimate": None,
            })
        if opts.get("plot_data"):
            emit_plot_data(data_rows, opts["plot_data"], table.limit)
        return rows, unreliable

    if command == "simulate":
        cfg = SimConfig(
            n=int(float(opts["n"])), reps=int(float(opts["reps"])),
            rho=float(opts["rho"]), scheme=_scheme(opts),
            grid=tuple((float(x), float(y))
                       for x in _parse_ladder(opts["grid_x"])
                       for y in _parse_ladder(opts["grid_y"])),
            seed=int(float(opts["seed"])), bn_rule=opts["bn_rule"],
        )
        rows = []
        for est in simulate_powered_maxima(cfg):
            rows.append({
                "x": est.point[0], "y": est.point[1],
                "empirical_prob": est.empirical_prob,
                "standard_error": est.standard_error,
                "exact_prob": est.exact_prob,
                "z_score": est.z_score,
                "degenerate": est.degenerate,
            })
            if est.degenerate:
                print(f"degenerate standard error at {est.point}", file=sys.stderr)
        return rows, unreliable

    if command == "verify":
        lam = _parse_lambda(opts["lam"])
        lhs, rhs = verify_identity_32(lam, float(opts["x"]), float(opts["y"]),
                                      rel_tol=float(opts["rel_tol"]),
                                      abs_tol=float(opts["abs_tol"]))
        unreliable = not lhs.converged
        return [{
            "lambda": lam, "x": float(opts["x"]), "y": float(opts["y"]),
            "lhs": lhs.value, "rhs": rhs, "abs_diff": abs(lhs.value - rhs),
            "error_estimate": lhs.error_estimate,
            "evaluations": lhs.evaluations, "converged": lhs.converged,
        }], unreliable

    raise ValueError(f"unknown command {command!r}")


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_VALIDATION
    try:
        opts = _merge_config(args)
        rows, unreliable = _run_command(args.command, opts)
        if opts["output"]:
            with open(opts["output"], "w", newline="") as fh:
                write_rows(rows, opts["format"], fh)
        else:
            write_rows(rows, opts["format"], sys.stdout)
    except (ValueError, PairBudgetError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ArithmeticError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_UNRELIABLE
    return EXIT_UNRELIABLE if unreliable else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
