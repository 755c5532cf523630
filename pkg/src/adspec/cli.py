"""``adspec <command> --config PATH [--out DIR] [--jobs K] [--seed U64]``.

Exit status: 0 on success, 1 for configuration errors, 2 for compute errors.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .config import COMMANDS, RunConfig
from .errors import ConfigError
from .pipeline import run

log = logging.getLogger("adspec")


class _Parser(argparse.ArgumentParser):
    # usage mistakes are configuration errors; argparse would exit 2, which we reserve
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="adspec", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="key = value config file")
    parser.add_argument("--out", help="output directory (overrides config)")
    parser.add_argument("--jobs", type=int, help="worker processes; 0 = all cores")
    parser.add_argument("--seed", type=int, help="base seed (overrides config)")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = RunConfig.load(
            args.config, command=args.command, out=args.out, jobs=args.jobs, seed=args.seed
        )
    except ConfigError as exc:
        print(f"adspec: config error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"adspec: cannot read config: {exc}", file=sys.stderr)
        return 1
    try:
        paths = run(config)
    except ConfigError as exc:
        print(f"adspec: config error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - any compute failure maps to exit 2
        log.debug("compute failure", exc_info=True)
        print(f"adspec: {config.command} failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    for path in paths:
        print(path)
    return 0
