"""Command-line front end.

Verbs: ``interval`` (analyze one observed count), ``coverage`` (operating
characteristics over a prevalence grid, CSV by default, optional rendered
figure), ``samplesize`` (minimal n under a design criterion) and ``privacy``
(disclosure probabilities / feasible q).  Scalar results are JSON documents
on stdout, curves are CSV; diagnostics go to stderr only.

Exit codes: 0 success, 2 usage or parse error, 3 infeasible design,
4 internal numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time

from .asymptotic import ap_interval, unbiased_estimate, wp_interval
from .design import DesignSpec, min_n_assured, min_n_expected
from .errors import InfeasibleDesignError, NumericError, SearchExhaustedError
from .evaluation import curve
from .exact import cp_interval
from .model import ModelConfig, mle, pi_from_rho
from .privacy import PrivacySpec, disclosure_probabilities, q_min

SCHEMA_VERSION = "1"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_NUMERIC = 4


def _record(command: str, inputs: dict, results) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "results": results,
    }


def _emit_json(record: dict) -> None:
    json.dump(record, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def _emit_csv(header, rows) -> None:
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])


def _parse_grid(text: str):
    try:
        start, stop, step = (float(part) for part in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(
            "grid must be start:stop:step with numeric parts"
        )
    return start, stop, step


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crosswise",
        description="Exact inference and sample-size design for crosswise-model surveys.",
    )
    parser.add_argument("--quiet", action="store_true",
                        help="suppress informational notes on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p_int = sub.add_parser("interval", help="confidence interval for one observed count")
    p_int.add_argument("--n", type=int, required=True, help="sample size")
    p_int.add_argument("--z", type=int, required=True, help="number of 1-reports")
    p_int.add_argument("--q", type=float, required=True, help="neutral YES probability")
    p_int.add_argument("--delta", type=float, default=0.95, help="confidence level")
    p_int.add_argument("--method", choices=("cp", "wp", "ap"), default="cp")
    p_int.add_argument("--output", choices=("json", "csv"), default="json")

    p_cov = sub.add_parser("coverage", help="exact operating characteristics over a grid")
    p_cov.add_argument("--n", type=int, required=True)
    p_cov.add_argument("--q", type=float, required=True)
    p_cov.add_argument("--delta", type=float, default=0.95)
    p_cov.add_argument("--method", choices=("cp", "wp", "ap"), default="cp")
    p_cov.add_argument("--pi-grid", type=_parse_grid, required=True,
                       metavar="START:STOP:STEP",
                       help="prevalence grid, stop inclusive, inside (0,1)")
    p_cov.add_argument("--d", type=float, default=None,
                       help="length bound; adds the length-criterion columns")
    p_cov.add_argument("--output", choices=("csv", "json"), default="csv")
    p_cov.add_argument("--plot", metavar="PATH", default=None,
                       help="also render the curve to this figure file")

    p_ss = sub.add_parser("samplesize", help="minimal n for a design criterion")
    p_ss.add_argument("criterion", choices=("expected", "assured"))
    p_ss.add_argument("--pi0", type=float, required=True,
                      help="prior upper bound on the prevalence")
    p_ss.add_argument("--gamma", type=float, required=True,
                      help="disclosure-probability tolerance")
    p_ss.add_argument("--delta", type=float, default=0.95)
    p_ss.add_argument("--d", type=float, required=True, help="target interval length")
    p_ss.add_argument("--lambda", dest="lam", type=float, default=None,
                      help="assurance tail probability (assured criterion)")
    p_ss.add_argument("--n-cap", type=int, default=1_000_000,
                      help="search cap before giving up")
    p_ss.add_argument("--output", choices=("json", "csv"), default="json")

    p_priv = sub.add_parser("privacy", help="disclosure probabilities / feasible q")
    p_priv.add_argument("--pi0", type=float, default=None)
    p_priv.add_argument("--gamma", type=float, default=None)
    p_priv.add_argument("--pi", type=float, default=None)
    p_priv.add_argument("--q", type=float, default=None)
    p_priv.add_argument("--output", choices=("json", "csv"), default="json")

    return parser


def _cmd_interval(args) -> int:
    config = ModelConfig(n=args.n, q=args.q)
    builders = {"cp": cp_interval, "wp": wp_interval, "ap": ap_interval}
    estimate = builders[args.method](config, args.z, args.delta)
    point = mle(config, args.z)
    pi_c = pi_from_rho(args.z / args.n, args.q)
    results = {
        "method": estimate.method,
        "lower": estimate.lower,
        "upper": estimate.upper,
        "lower_degenerate": estimate.lower_degenerate,
        "upper_degenerate": estimate.upper_degenerate,
        "mle": point,
        "pi_c": pi_c,
    }
    if args.method == "wp":
        results["collapsed"] = estimate.collapsed
    if args.method == "ap":
        results["variance_unbiased"] = unbiased_estimate(config, args.z).variance_unbiased
    if args.method == "cp":
        if 0.0 < point < 1.0 and 0.0 < args.q < 0.5:
            p11, p10 = disclosure_probabilities(point, args.q)
            results["privacy"] = {"p11": p11, "p10": p10}
        else:
            results["privacy"] = None
    inputs = {"n": args.n, "z": args.z, "q": args.q,
              "delta": args.delta, "method": args.method}
    if args.output == "csv":
        keys = [k for k, v in results.items() if not isinstance(v, (dict, type(None)))]
        _emit_csv(keys, [[results[k] for k in keys]])
    else:
        _emit_json(_record("interval", inputs, results))
    return EXIT_OK


def _cmd_coverage(args, quiet: bool) -> int:
    start, stop, step = args.pi_grid
    if step <= 0.0:
        raise ValueError("grid step must be positive")
    if not (0.0 < start <= stop < 1.0):
        raise ValueError("grid bounds must satisfy 0 < start <= stop < 1")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    grid = [start + k * step for k in range(count)]
    config = ModelConfig(n=args.n, q=args.q)
    result = curve(config, args.delta, args.method, grid, d=args.d)

    if args.plot:
        from .plotting import save_curve_figure

        label = (f"method {args.method}, n={args.n}, q={args.q:g}, "
                 f"delta={args.delta:g}" + (f", d={args.d:g}" if args.d else ""))
        save_curve_figure(result, args.plot, delta=args.delta, title=label)
        if not quiet:
            print(f"figure written to {args.plot}", file=sys.stderr)

    if args.output == "json":
        inputs = {"n": args.n, "q": args.q, "delta": args.delta,
                  "method": args.method, "pi_grid": list(grid), "d": args.d}
        points = [
            {k: v for k, v in vars(p).items() if v is not None}
            for p in result.grid
        ]
        _emit_json(_record("coverage", inputs, points))
        return EXIT_OK

    header = ["pi", "coverage", "expected_covering_length"]
    if args.d is not None:
        header.append("assured_length_prob")
    rows = []
    for p in result.grid:
        row = [p.pi, p.coverage, p.expected_covering_length]
        if args.d is not None:
            row.append(p.assured_length_prob)
        rows.append(row)
    _emit_csv(header, rows)
    return EXIT_OK


def _cmd_samplesize(args, quiet: bool) -> int:
    if args.criterion == "assured" and args.lam is None:
        raise ValueError("the assured criterion requires --lambda")
    spec = DesignSpec(pi0=args.pi0, gamma=args.gamma, delta=args.delta,
                      d=args.d, lam=args.lam)
    t0 = time.perf_counter()
    if args.criterion == "expected":
        res = min_n_expected(spec, n_cap=args.n_cap)
    else:
        res = min_n_assured(spec, n_cap=args.n_cap)
    elapsed = time.perf_counter() - t0
    if not quiet:
        print(f"confirmed over scan window {res.scan_window[0]}..{res.scan_window[1]}",
              file=sys.stderr)
    inputs = {"criterion": args.criterion, "pi0": args.pi0, "gamma": args.gamma,
              "delta": args.delta, "d": args.d, "lambda": args.lam,
              "n_cap": args.n_cap}
    results = {
        "n_min": res.n_min,
        "q_used": res.q_used,
        "criterion_value_at_n": res.criterion_value_at_n,
        "criterion_value_at_n_minus_1": res.criterion_value_at_n_minus_1,
        "scan_window": list(res.scan_window),
        "duration_seconds": elapsed,
    }
    if args.output == "csv":
        keys = ["n_min", "q_used", "criterion_value_at_n",
                "criterion_value_at_n_minus_1", "duration_seconds"]
        _emit_csv(keys, [[results[k] for k in keys]])
    else:
        _emit_json(_record("samplesize", inputs, results))
    return EXIT_OK


def _cmd_privacy(args) -> int:
    spec_group = (args.pi0 is not None, args.gamma is not None)
    point_group = (args.pi is not None, args.q is not None)
    if all(spec_group) and not any(point_group):
        spec = PrivacySpec(pi0=args.pi0, gamma=args.gamma)
        inputs = {"pi0": args.pi0, "gamma": args.gamma}
        results = {"q_min": q_min(spec)}
    elif all(point_group) and not any(spec_group):
        p11, p10 = disclosure_probabilities(args.pi, args.q)
        inputs = {"pi": args.pi, "q": args.q}
        results = {"p11": p11, "p10": p10}
    else:
        raise ValueError(
            "supply exactly one flag group: --pi0 with --gamma, or --pi with --q"
        )
    if args.output == "csv":
        keys = list(results)
        _emit_csv(keys, [[results[k] for k in keys]])
    else:
        _emit_json(_record("privacy", inputs, results))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "interval":
            return _cmd_interval(args)
        if args.command == "coverage":
            return _cmd_coverage(args, args.quiet)
        if args.command == "samplesize":
            return _cmd_samplesize(args, args.quiet)
        if args.command == "privacy":
            return _cmd_privacy(args)
        parser.error(f"unknown command {args.command!r}")
    except InfeasibleDesignError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (NumericError, SearchExhaustedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
