"""Command-line interface.

Subcommands: generate, sieve, freqs, densities, limitset, chowla,
verify-example.  Report commands write delimited output (CSV/JSON) and
render a matplotlib figure next to it (suppress with --no-plot, or
redirect with --plot PATH).

Exit codes: 0 success, 1 a verification check failed, 2 bad usage or
configuration.  All outputs are deterministic for a fixed command line,
so re-running a command reproduces its files byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from . import __version__
from .arith import KINDS, CapacityError, arithmetic_sequence, sieve_range
from .averaging import density_estimate, empirical, log_empirical
from .chowla import CorrelationSpec, chowla_scan
from .grids import default_density_grid, default_limitset_grid, parse_grid
from .limitsets import (
    estimate_limit_set,
    frequency_trace,
    hull_inclusion_report,
)
from .measures import max_basis_index, measure_to_json
from .symbolic import EXAMPLE_NAMES, example_sequence, parse_word, word_to_str
from .verify import verify_example

SEQUENCE_CHOICES = EXAMPLE_NAMES + KINDS


def resolve_sequence(name: str):
    if name in EXAMPLE_NAMES:
        return example_sequence(name)
    if name in KINDS:
        return arithmetic_sequence(name)
    raise ValueError(f"unknown sequence {name!r}")


def _normalize_mode(mode: str) -> str:
    return {"log": "logarithmic"}.get(mode, mode)


def _write_text(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _json_dumps(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _plot_path(out: Optional[str], plot: Optional[str], no_plot: bool) -> Optional[str]:
    """Figure path for a report command: explicit --plot wins, otherwise
    derived from --out; no figure when writing to stdout."""
    if no_plot:
        return None
    if plot:
        return plot
    if out and out != "-":
        stem = out.rsplit(".", 1)[0]
        return stem + ".svg"
    return None


# ---------------------------------------------------------------------------
# subcommand handlers


def cmd_generate(args) -> int:
    x = resolve_sequence(args.name)
    symbols = [x.symbol_at(n) for n in range(args.count)]
    if args.format == "raw":
        text = word_to_str(x.alphabet, tuple(symbols)) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["n", "symbol"])
        for n, s in enumerate(symbols):
            writer.writerow([n, s])
        text = buf.getvalue()
    _write_text(args.out, text)
    return 0


def cmd_sieve(args) -> int:
    seg = sieve_range(args.kind, args.lo, args.hi + 1)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["n", "value"])
    for n in range(seg.lo, seg.hi):
        writer.writerow([n, seg.value(n)])
    _write_text(args.out, buf.getvalue())
    return 0


def cmd_freqs(args) -> int:
    x = resolve_sequence(args.seq)
    grid = parse_grid(args.grid)
    mode = _normalize_mode(args.mode)
    modes = ["cesaro", "logarithmic"] if mode == "both" else [mode]
    traces = [frequency_trace(x, args.depth, grid, m) for m in modes]

    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["N", "mode", "word", "value"])
    for trace in traces:
        for n, mu in trace.entries:
            for word in sorted(mu.mass):
                writer.writerow(
                    [n, trace.mode, word_to_str(x.alphabet, word), float(mu.mass_of(word))]
                )
    _write_text(args.out, buf.getvalue())

    figure = _plot_path(args.out, args.plot, args.no_plot)
    if figure:
        from .plotting import plot_traces

        plot_traces(traces, figure, title=f"{x.name} depth {args.depth}")
    return 0


def cmd_densities(args) -> int:
    x = resolve_sequence(args.seq)
    grid = parse_grid(args.grid) if args.grid else default_density_grid(args.seq)
    est = density_estimate(x, args.word, grid, tail_fraction=args.tail)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["N", "cesaro", "logarithmic"])
        for n, f, l in zip(est.grid, est.freqs, est.logfreqs):
            writer.writerow([n, f, l])
        text = buf.getvalue()
    else:
        text = _json_dumps(
            {
                "sequence": x.name,
                "word": word_to_str(x.alphabet, est.word),
                "grid": list(est.grid),
                "cesaro": list(est.freqs),
                "logarithmic": list(est.logfreqs),
                "tail_start": est.tail_start,
                "lower_asymptotic": est.lower_asymptotic,
                "upper_asymptotic": est.upper_asymptotic,
                "lower_logarithmic": est.lower_logarithmic,
                "upper_logarithmic": est.upper_logarithmic,
                "chain_ok": est.chain_ok,
            }
        )
    _write_text(args.out, text)

    figure = _plot_path(args.out, args.plot, args.no_plot)
    if figure:
        from .plotting import plot_density

        plot_density(est, figure, title=f"{x.name} word {args.word}")
    return 0


def _estimate_payload(est) -> dict:
    return {
        "depth": est.depth,
        "mode": est.mode,
        "cluster_radius": est.cluster_radius,
        "metric_index": est.metric_index,
        "tail_start": est.tail_start,
        "max_consecutive_gap": est.max_consecutive_gap,
        "representatives": [
            {
                "measure": measure_to_json(rep.measure),
                "witnesses": list(rep.witnesses),
                "shift_defect": rep.shift_defect,
                "shift_ok": rep.shift_ok,
            }
            for rep in est.representatives
        ],
    }


def cmd_limitset(args) -> int:
    x = resolve_sequence(args.seq)
    grid = parse_grid(args.grid) if args.grid else default_limitset_grid(args.seq)
    mode = _normalize_mode(args.mode)
    modes = ["cesaro", "logarithmic"] if mode == "both" else [mode]
    J = args.metric_index or max_basis_index(x.alphabet, args.depth)

    traces = {}
    estimates = {}
    for m in modes:
        trace = frequency_trace(x, args.depth, grid, m)
        traces[m] = trace
        estimates[m] = estimate_limit_set(
            trace, tail_fraction=args.tail, epsilon=args.eps, J=J
        )
    payload = {
        "sequence": x.name,
        "depth": args.depth,
        "epsilon": args.eps,
        "metric_index": J,
        "grid_size": len(grid),
        "modes": {m: _estimate_payload(est) for m, est in estimates.items()},
    }
    if len(modes) == 2:
        report = hull_inclusion_report(estimates["logarithmic"], estimates["cesaro"], J)
        payload["hull_inclusion"] = {
            "metric_index": report.metric_index,
            "max_distance": report.max_distance,
            "per_representative": [
                {"distance": r.distance, "gap": r.gap}
                for r in report.per_representative
            ],
        }
    _write_text(args.json, _json_dumps(payload))

    figure = _plot_path(args.json, args.plot, args.no_plot)
    if figure:
        from .plotting import plot_limitset

        m = modes[0]
        plot_limitset(
            traces[m], estimates[m], figure, title=f"{x.name} {m} depth {args.depth}"
        )
    return 0


def _parse_int_list(text: str) -> List[int]:
    return [int(p) for p in text.split(",") if p.strip()]


def cmd_chowla(args) -> int:
    grid = parse_grid(args.grid)
    mode = _normalize_mode(args.mode)
    specs = None
    if args.shifts is not None or args.exponents is not None:
        shifts = tuple(_parse_int_list(args.shifts)) if args.shifts else ()
        if args.exponents:
            exponents = tuple(_parse_int_list(args.exponents))
        else:
            exponents = (1,) * (len(shifts) + 1)
        specs = [CorrelationSpec(shifts=shifts, exponents=exponents, mode=mode)]
    report = chowla_scan(
        args.kind,
        max_shift=args.max_shift,
        max_order=args.max_order,
        grid=grid,
        mode=mode,
        prime_bound=args.prime_bound,
        threads=args.threads,
        specs=specs,
    )
    _write_text(args.out, _json_dumps(report.to_json()))

    figure = _plot_path(args.out, args.plot, args.no_plot)
    if figure:
        from .plotting import plot_correlations

        plot_correlations(report, figure, title=f"{args.kind} correlations ({mode})")
    return 0


def cmd_verify_example(args) -> int:
    checks, artifacts = verify_example(args.name)
    for check in checks:
        print(check.line())
    passed = all(c.passed for c in checks)
    print(("OK" if passed else "FAILED") + f"  {args.name}: "
          f"{sum(c.passed for c in checks)}/{len(checks)} checks passed")
    if args.json:
        payload = {
            "name": args.name,
            "passed": passed,
            "checks": [
                {
                    "name": c.name,
                    "passed": c.passed,
                    "value": c.value,
                    "requirement": c.requirement,
                }
                for c in checks
            ],
        }
        _write_text(args.json, _json_dumps(payload))
    if args.plot:
        from .plotting import plot_limitset

        trace = artifacts.traces.get("cesaro_depth1")
        est = artifacts.estimates.get("cesaro_depth1")
        if trace is not None and est is not None:
            plot_limitset(trace, est, args.plot, title=f"{args.name} cesaro depth 1")
    return 0 if passed else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="genlab",
        description=(
            "Cesaro and harmonic empirical measures of symbolic sequences, "
            "limit-set estimation, and arithmetic correlation scans."
        ),
    )
    parser.add_argument("--version", action="version", version=f"genlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="print the first symbols of a sequence")
    p.add_argument("--name", required=True, choices=SEQUENCE_CHOICES)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--format", choices=("csv", "raw"), default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("sieve", help="arithmetic function values on a range")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--from", dest="lo", type=int, required=True)
    p.add_argument("--to", dest="hi", type=int, required=True)
    p.add_argument("--format", choices=("csv",), default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sieve)

    p = sub.add_parser("freqs", help="frequency traces at a cylinder depth")
    p.add_argument("--seq", required=True, choices=SEQUENCE_CHOICES)
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--grid", required=True, help="e.g. pow2:10:24")
    p.add_argument("--mode", choices=("cesaro", "log", "logarithmic", "both"),
                   default="both")
    p.add_argument("--out", default=None)
    p.add_argument("--plot", default=None, help="figure path (default: next to --out)")
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=cmd_freqs)

    p = sub.add_parser("densities", help="density estimators for one word")
    p.add_argument("--seq", required=True, choices=SEQUENCE_CHOICES)
    p.add_argument("--word", required=True)
    p.add_argument("--grid", default=None)
    p.add_argument("--tail", type=float, default=0.5)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None)
    p.add_argument("--plot", default=None)
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=cmd_densities)

    p = sub.add_parser("limitset", help="estimate Cesaro/harmonic limit sets")
    p.add_argument("--seq", required=True, choices=SEQUENCE_CHOICES)
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--mode", choices=("cesaro", "log", "logarithmic", "both"),
                   default="both")
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--tail", type=float, default=0.5)
    p.add_argument("--grid", default=None)
    p.add_argument("--metric-index", type=int, default=None)
    p.add_argument("--json", default=None, help="output path (default stdout)")
    p.add_argument("--plot", default=None)
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=cmd_limitset)

    p = sub.add_parser("chowla", help="correlation scans for mu, lambda, mu^2")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--shifts", default=None, help="comma list, e.g. 1,2")
    p.add_argument("--exponents", default=None, help="comma list, e.g. 1,1,1")
    p.add_argument("--max-shift", type=int, default=2)
    p.add_argument("--max-order", type=int, default=1)
    p.add_argument("--mode", choices=("cesaro", "log", "logarithmic"),
                   default="cesaro")
    p.add_argument("--grid", required=True, help="e.g. pow10:3:7")
    p.add_argument("--prime-bound", type=int, default=10_000)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", default=None)
    p.add_argument("--plot", default=None)
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=cmd_chowla)

    p = sub.add_parser("verify-example", help="run one example's check bundle")
    p.add_argument("--name", required=True, choices=EXAMPLE_NAMES)
    p.add_argument("--json", default=None)
    p.add_argument("--plot", default=None)
    p.set_defaults(func=cmd_verify_example)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
