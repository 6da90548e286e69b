"""Command-line entry points.

    bmo run <config.toml>       execute a seed ensemble (no sweep axis)
    bmo sweep <config.toml>     execute a parameter sweep x seed ensemble
    bmo analyze <trace...>      recompute summary records from trace files
    bmo render <trace> <out>    draw the emergence paths as SVG

Exit codes: 0 success, 1 runtime failure, 2 config/usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import runner, traceio
from .config import load_config
from .errors import BmoError, ConfigError
from .render import render_paths

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bmo",
        description="Butterfly mating optimization experiment runner",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_exec(name: str, help_text: str):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", help="experiment config (TOML)")
        p.add_argument("--out-dir", default=None, help="override the output directory")
        p.add_argument(
            "--seed-override",
            default=None,
            help="comma-separated seeds replacing the config ensemble",
        )
        p.add_argument("--quiet", action="store_true", help="suppress progress lines")
        return p

    add_exec("run", "run the config's seed ensemble (config must not sweep)")
    add_exec("sweep", "run the config's sweep x seed ensemble")

    p_an = sub.add_parser("analyze", help="summarize existing trace files")
    p_an.add_argument("traces", nargs="+", help="trace files to analyze")
    p_an.add_argument(
        "--out-dir",
        default=None,
        help="write summary.jsonl here instead of printing to stdout",
    )
    p_an.add_argument("--quiet", action="store_true", help="suppress progress lines")

    p_re = sub.add_parser("render", help="render a trace as an SVG path plot")
    p_re.add_argument("trace", help="trace file")
    p_re.add_argument("output", help="output SVG path")
    p_re.add_argument("--quiet", action="store_true", help="suppress progress lines")
    return parser


def _parse_seeds(text: str) -> list:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"--seed-override must be comma-separated ints: {exc}")


def _cmd_run(args, want_sweep: bool) -> int:
    config = load_config(args.config)
    if want_sweep and config.sweep is None:
        raise ConfigError("config has no [sweep] table; use 'bmo run'")
    if not want_sweep and config.sweep is not None:
        raise ConfigError("config has a [sweep] table; use 'bmo sweep'")
    seeds = _parse_seeds(args.seed_override) if args.seed_override else None
    runner.execute(
        config, out_dir=args.out_dir, seed_override=seeds, quiet=args.quiet
    )
    return EXIT_OK


def _cmd_analyze(args) -> int:
    records = []
    for path in args.traces:
        if not os.path.exists(path):
            print(f"error: trace not found: {path}", file=sys.stderr)
            return EXIT_RUNTIME
        trace = traceio.read_trace(path)
        record = runner.summarize_trace(trace)
        record["trace_file"] = os.path.basename(path)
        records.append(record)
    payload = "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        out = os.path.join(args.out_dir, "summary.jsonl")
        runner.write_atomic(out, payload.encode("utf-8"))
        if not args.quiet:
            print(f"wrote {out}")
    else:
        sys.stdout.write(payload)
    return EXIT_OK


def _cmd_render(args) -> int:
    if not os.path.exists(args.trace):
        print(f"error: trace not found: {args.trace}", file=sys.stderr)
        return EXIT_RUNTIME
    trace = traceio.read_trace(args.trace)
    svg = render_paths(trace)
    with open(args.output, "wb") as fh:
        fh.write(svg)
    if not args.quiet:
        print(f"wrote {args.output}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args, want_sweep=False)
        if args.command == "sweep":
            return _cmd_run(args, want_sweep=True)
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "render":
            return _cmd_render(args)
        raise AssertionError(f"unhandled command {args.command}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BmoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
