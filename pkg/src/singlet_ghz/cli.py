"""Command-line entry point.

    singlet-ghz SUBCOMMAND [--trials N] [--eta F] [--seed U] [--format json|csv]
                           [--out PATH] [--threads K]

Subcommands: ghz, ideal, detector, hv, enumerate, chsh.  Exit status is 0 on
success and 2 on a configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile

from . import experiments
from .analysis import Report, summarize
from .engine import ExperimentConfig
from .errors import ConfigError

SUBCOMMANDS = ("ghz", "ideal", "detector", "hv", "enumerate", "chsh")


def to_json(report: Report) -> str:
    return json.dumps(report.to_dict(), indent=2) + "\n"


def to_csv(report: Report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["name", "value", "std_error", "count"])
    for q in report.quantities:
        writer.writerow([q.name, repr(q.value), repr(q.std_error), q.count])
    return buf.getvalue()


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--trials", type=int, default=100_000, help="trials per setting")
    common.add_argument("--eta", type=float, default=1.0, help="detector efficiency in (0, 1]")
    common.add_argument("--seed", type=int, default=0, help="64-bit unsigned seed")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--threads", type=int, default=None, help="worker threads (default: all CPUs)")

    parser = argparse.ArgumentParser(prog="singlet-ghz", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("ghz", parents=[common], help="GHZ product determinism")
    sub.add_parser("ideal", parents=[common], help="postselected singlet at eta = 1")
    sub.add_parser("detector", parents=[common], help="postselected singlet with detector losses")
    hv = sub.add_parser("hv", parents=[common], help="non-contextual model through the same pipeline")
    hv.add_argument("--model", choices=experiments.HV_MODELS, default="uniform")
    sub.add_parser("enumerate", parents=[common], help="exhaustive assignment checks")
    sub.add_parser("chsh", parents=[common], help="CHSH combination of the four settings")
    return parser


def _run(args) -> Report:
    if args.threads is not None and args.threads < 1:
        raise ConfigError("--threads must be >= 1")
    if args.command == "enumerate":
        return summarize([experiments.run_enumeration()], "enumerate")
    eta = 1.0 if args.command == "ideal" else args.eta
    config = ExperimentConfig(args.trials, eta=eta, seed=args.seed)
    if args.command == "ideal" and args.eta != 1.0:
        raise ConfigError("ideal runs use eta = 1; use 'detector' for eta < 1")
    if args.command == "ghz":
        result = experiments.run_ghz(config, args.threads)
    elif args.command == "hv":
        result = experiments.run_hv(config, args.model, args.threads)
    else:
        result = experiments.run_singlet(args.command, config, args.threads)
    return summarize([result], args.command)


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    # write-then-rename so a failure never leaves a partial file behind
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".singlet-ghz-")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report = _run(args)
    except ConfigError as exc:
        print(f"singlet-ghz: error: {exc}", file=sys.stderr)
        return 2
    _write(to_json(report) if args.format == "json" else to_csv(report), args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
