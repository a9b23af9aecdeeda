"""Command-line entry point.

    qisflow run CONFIG [--output PATH] [--format csv|json] [--seed N]
    qisflow verify [--only NAME ...]

Exit status: 0 when every check passes, 1 when a check fails or the run
errors, 2 when the configuration is invalid.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys

from .config import FORMATS, parse_config
from .errors import ConfigError
from .experiment import run_experiment
from .verify import SUITE, run_suite

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qisflow", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment from a JSON config file")
    run.add_argument("config", help="path to the JSON config")
    run.add_argument("--output", help="output file (overrides output_path)")
    run.add_argument("--format", choices=FORMATS, help="output format (overrides output_format)")
    run.add_argument("--seed", type=int, help="seed (overrides seed)")

    ver = sub.add_parser("verify", help="run the built-in property suite")
    ver.add_argument("--only", nargs="+", choices=sorted(SUITE), help="run only these checks")
    return parser


def _cmd_run(args) -> int:
    try:
        with open(args.config) as fh:
            text = fh.read()
    except OSError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = parse_config(text)
        overrides = {}
        if args.output is not None:
            overrides["output_path"] = args.output
        if args.format is not None:
            overrides["output_format"] = args.format
        if args.seed is not None:
            overrides["seed"] = args.seed
        cfg = dataclasses.replace(cfg, **overrides)
        report = run_experiment(cfg)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    for name, ch in report.checks.items():
        status = "PASS" if ch["passed"] else "FAIL"
        print(f"[{status}] {name:<28} value={ch['value']:.3e} threshold={ch['threshold']}")
    if report.error:
        print(f"error: {report.error}", file=sys.stderr)
    if report.output:
        print(f"wrote {report.output}")
    print(f"{cfg.experiment}: {'PASS' if report.passed else 'FAIL'} ({report.wall_time:.2f}s)")
    return EXIT_PASS if report.passed else EXIT_FAIL


def _cmd_verify(args) -> int:
    results = run_suite(args.only)
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_PASS if failed == 0 else EXIT_FAIL


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    return _cmd_verify(args)


if __name__ == "__main__":
    sys.exit(main())
