"""Command-line entry point.

    transverse-eraser run <scenario> [--config FILE] [--out DIR] [--set key=value ...]
    transverse-eraser sweep <scenario> --param KEY --values v1,v2,... [--config FILE]
    transverse-eraser list

Exit status: 0 on success, 1 for configuration errors, 2 when a numerical
guard (aliasing, resolution) refuses to run.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import SCENARIOS, parse_assignment, parse_overrides, resolve
from .errors import ConfigurationError, EraserError
from .scenarios import run_and_write, sweep, sweep_csv


class _Parser(argparse.ArgumentParser):
    # Usage errors are configuration errors (exit 1); 2 is reserved for numerical guards.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _load_config(args):
    overrides = {}
    if args.config:
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigurationError(f"cannot read config file: {exc}") from None
        overrides.update(parse_overrides(text))
    for item in args.set or []:
        key, value = parse_assignment(item, where="--set: ")
        overrides[key] = value
    return resolve(args.scenario, overrides)


def _cmd_run(args):
    cfg = _load_config(args)
    for path in run_and_write(cfg, args.out):
        print(path)


def _cmd_sweep(args):
    cfg = _load_config(args)
    values = []
    for raw in args.values.split(","):
        _, value = parse_assignment(f"{args.param}={raw}", where="--values: ")
        values.append(value)
    table = sweep(cfg, args.param, values, profile=args.profile)
    target = Path(args.out) / cfg.scenario
    target.mkdir(parents=True, exist_ok=True)
    path = target / "sweep.csv"
    path.write_text(sweep_csv(table))
    print(path)


def _cmd_list(args):
    for sid in SCENARIOS:
        print(sid)
        print(json.dumps(resolve(sid).resolved(), indent=2, sort_keys=True))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="transverse-eraser",
        description="Twin-photon double-slit quantum eraser simulator.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("scenario", choices=SCENARIOS)
        p.add_argument("--config", help="file of 'key = value' lines")
        p.add_argument("--out", default="out", help="output directory (default: out)")
        p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override one key")

    run = sub.add_parser("run", help="run one scenario and write CSV/JSON outputs")
    common(run)
    run.set_defaults(func=_cmd_run)

    sw = sub.add_parser("sweep", help="sweep one configuration key")
    common(sw)
    sw.add_argument("--param", required=True)
    sw.add_argument("--values", required=True, help="comma-separated values")
    sw.add_argument("--profile", help="profile to fit (default: the scenario's designated one)")
    sw.set_defaults(func=_cmd_sweep)

    ls = sub.add_parser("list", help="print scenario ids and their default configurations")
    ls.set_defaults(func=_cmd_list)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except EraserError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
