#!/usr/bin/env python3
"""
vwlab - twisted Vafa-Witten partition functions

    vwlab series k3-su --rank 2 --prec 8 --format csv
    vwlab table ess --rank 2 --c2-max 5
    vwlab census --rank 2 --picard 11
    vwlab verify

Structured output goes to standard out, diagnostics to standard error.
"""

import argparse
import logging
import sys
from typing import IO, List, Optional

from twisted_vw.surface_kind import SurfaceKind
from twisted_vw.vw_base import LOGGER_NAME, TRACE
from vw_console.command_handler import EXIT_INVALID, SERIES_SURFACES, TABLE_KINDS, CommandHandler
from vw_console.vw_config import build_config

logger = logging.getLogger(LOGGER_NAME)


def configure_logging(level: str, stream: IO[str]) -> None:
    logging.addLevelName(TRACE, "TRACE")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    handler = logging.StreamHandler(stream)
    handler.setFormatter(logging.Formatter("%(levelname)s %(message)s"))
    logger.addHandler(handler)
    logger.setLevel(TRACE if level == "TRACE" else getattr(logging, level, logging.WARNING))
    logger.propagate = False


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec", dest="precision", help="guaranteed precision (num or num/den)")
    common.add_argument("--rank", type=int, help="prime rank r")
    common.add_argument("--picard", type=int, help="Picard number of the K3 surface")
    common.add_argument("--format", choices=["json", "csv", "text"])
    common.add_argument("--c1", type=int, help="first Chern class (P^2) or c1 mod 4 (P(2,2,2))")
    common.add_argument("--inertia", type=int, help="inertia component of P(2,2,2)")
    common.add_argument("--c2-max", dest="c2_max", help="largest c2 listed by tables")
    common.add_argument("--workers", type=int, help="worker threads for verify and census")
    common.add_argument("--drop-divisor-term", action="store_true", default=None)
    common.add_argument("--full-lattice-enumeration", action="store_true", default=None)
    common.add_argument("--as-stated-higher-rank", action="store_true", default=None)
    common.add_argument("--log-level", choices=["TRACE", "DEBUG", "INFO", "WARNING", "ERROR"])

    parser = argparse.ArgumentParser(prog="vwlab", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    series = sub.add_parser("series", parents=[common], help="compute a partition function")
    series.add_argument("selector", choices=list(SERIES_SURFACES))

    table = sub.add_parser("table", parents=[common], help="tabulate twisted invariants")
    table.add_argument("kind", choices=list(TABLE_KINDS))

    sub.add_parser("census", parents=[common], help="count gerbes and classes on a K3 surface")

    verify = sub.add_parser("verify", parents=[common], help="run every consistency check")
    verify.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    return parser


def main(argv: Optional[List[str]] = None, stdout: Optional[IO[str]] = None, stderr: Optional[IO[str]] = None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    args = build_parser().parse_args(argv)

    options = {
        key: getattr(args, key)
        for key in (
            "precision", "rank", "picard", "format", "c1", "inertia", "c2_max", "workers",
            "drop_divisor_term", "full_lattice_enumeration", "as_stated_higher_rank", "log_level",
        )
    }
    surface = None
    if args.command == "series":
        surface = SERIES_SURFACES[args.selector]
    elif args.command in ("table", "census"):
        surface = SurfaceKind.K3

    configure_logging(args.log_level or "WARNING", stderr)
    try:
        config = build_config(options, surface=surface)
    except ValueError as e:
        logger.error(f"❌ {e}")
        return EXIT_INVALID
    configure_logging(config.log_level, stderr)
    logger.debug(f"config: {config.to_dict()}")

    argument = getattr(args, "selector", None) or getattr(args, "kind", None)
    handler = CommandHandler(config, stdout=stdout)
    return handler.handle(args.command, argument, inject_fault=getattr(args, "inject_fault", False))


if __name__ == "__main__":
    sys.exit(main())
