"""Command line entry point: ``aqrm-magic scan|map --config FILE``."""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time

from .config import PARAMETER_MAP, SPECTRUM_SCAN, ConfigError, load_config
from .report import emit_outputs
from .sweep import resolve_threads, run_points

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_PARTIAL = 2
EXIT_IO = 3

MODES = {"scan": SPECTRUM_SCAN, "map": PARAMETER_MAP}


def _style(text, code, stream):
    if os.environ.get("NO_COLOR") or not stream.isatty():
        return text
    return f"\033[{code}m{text}\033[0m"


def build_parser():
    parser = argparse.ArgumentParser(
        prog="aqrm-magic",
        description="Magic-resource sweeps over the asymmetric quantum Rabi model.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("scan", "spectrum scan along one parameter axis"),
                        ("map", "two-parameter map of selected eigenstates")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=True, help="JSON sweep configuration")
        p.add_argument("--out", help="output directory (overrides config)")
        p.add_argument("--threads", type=int, default=0, help="worker processes, 0 = auto")
        p.add_argument("--format", choices=("csv", "json", "both"), help="table format")
        p.add_argument("--plots", action="store_true", help="also write SVG figures")
        p.add_argument("--verbose", action="store_true")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = load_config(args.config)
        if config.mode != MODES[args.command]:
            raise ConfigError(f"'{args.command}' expects mode {MODES[args.command]!r}, "
                              f"config has {config.mode!r}")
        if args.threads < 0:
            raise ConfigError("--threads must be >= 0")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    start = time.perf_counter()
    workers = resolve_threads(args.threads)
    table = run_points(config, workers)
    elapsed = time.perf_counter() - start
    try:
        paths = emit_outputs(table, config, out_dir=args.out, fmt=args.format,
                             plots=args.plots or None)
    except OSError as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return EXIT_IO

    n_points = len(config.points())
    status = "ok" if not table.failures else f"{len(table.failures)} point(s) failed"
    color = "32" if not table.failures else "33"
    print(f"{_style(status, color, sys.stdout)}: {n_points} points, {len(table.rows)} rows "
          f"in {elapsed:.1f}s with {workers} worker(s)")
    for p in paths:
        print(f"  {p}")
    return EXIT_PARTIAL if table.failures else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
