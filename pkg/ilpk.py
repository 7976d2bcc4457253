import argparse
import logging
import os
import sys
from logging.handlers import TimedRotatingFileHandler
from os.path import abspath, dirname, join

import config

from src import cli, services
from src.caps import Caps
from src.errors import IlpError, ResourceCapError

logger = logging.getLogger(__name__)

EXIT_USAGE = 2
EXIT_CAP = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ilpk",
        description="Kernelization, decomposition-based solving and verification of bounded-domain ILP feasibility instances",
    )
    parser.add_argument(
        "-c", "--config-file", default=join(dirname(abspath(__file__)), "etc", "ilpk.cfg"), type=argparse.FileType()
    )

    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", help="Decide feasibility by dynamic programming")
    solve.add_argument("instance", type=argparse.FileType("rb"))
    solve.add_argument("--modulator", help="Comma-separated variable names to branch over")
    solve.add_argument("--exact", action="store_true", help="Use an exact tree decomposition")
    solve.add_argument("--tu", action="store_true", help="Use the tu_modified_entries certificate")
    solve.set_defaults(handler=cli.solve)

    kernelize = commands.add_parser("kernelize", help="Replace protrusions or TU subsystems by gadgets")
    kernelize.add_argument("instance", type=argparse.FileType("rb"))
    kernelize.add_argument("--mode", choices=("tw", "tu"), default="tw")
    kernelize.add_argument("-o", "--output", type=argparse.FileType("wb"))
    kernelize.add_argument("--threads", type=int)
    kernelize.set_defaults(handler=cli.kernelize)

    generate = commands.add_parser("generate", help="Generate reduction or random instances")
    kinds = generate.add_subparsers(dest="kind", required=True)

    subset_sum = kinds.add_parser("subset-sum")
    subset_sum.add_argument("--items", required=True, help="Comma-separated integers")
    subset_sum.add_argument("--target", type=int, required=True)

    hitting_set = kinds.add_parser("hitting-set")
    hitting_set.add_argument("--universe", type=int, required=True)
    hitting_set.add_argument("--sets", required=True, help="Sets separated by ';', elements by ','")
    hitting_set.add_argument("--k", type=int, required=True)

    or_composition = kinds.add_parser("or-composition")
    or_composition.add_argument("--graph", type=argparse.FileType(), action="append", required=True)
    or_composition.add_argument("--k", type=int, required=True)

    random = kinds.add_parser("random")
    random.add_argument("--k", type=int, default=3)
    random.add_argument("--r", type=int, default=2)
    random.add_argument("--d", type=int, default=2)
    random.add_argument("--parts", type=int, default=3)
    random.add_argument("--seed", type=int, default=0)

    for kind in (subset_sum, hitting_set, or_composition, random):
        kind.add_argument("-o", "--output", type=argparse.FileType("wb"))
    generate.set_defaults(handler=cli.generate)

    verify = commands.add_parser("verify", help="Cross-check the solver against the oracle and validate certificates")
    verify.add_argument("instance", type=argparse.FileType("rb"))
    verify.add_argument("--threads", type=int)
    verify.set_defaults(handler=cli.verify)

    analyze = commands.add_parser("analyze", help="Report Gaifman graph statistics and treewidth")
    analyze.add_argument("instance", type=argparse.FileType("rb"))
    analyze.add_argument("--export-td", type=argparse.FileType("w"))
    analyze.set_defaults(handler=cli.analyze)

    return parser


def setup_logging(app_config: config.Config) -> None:
    log_line_format = "{asctime} ilpk[{process}]: {message} [{filename}:{lineno}]"
    log_date_format = "%b %d %H:%M:%S"
    log_rotate_period = "D"
    log_rotate_interval = 1
    log_rotate_keep = 5
    log_filename = app_config.get("log.filename", "")
    log_level = app_config.get("log.level", logging.WARNING)

    logging.basicConfig(level=log_level, style="{", datefmt=log_date_format, format=log_line_format)

    root = logging.getLogger()
    root.setLevel(log_level)

    if log_filename:
        file_handler = TimedRotatingFileHandler(
            log_filename,
            when=log_rotate_period,
            interval=log_rotate_interval,
            backupCount=log_rotate_keep,
        )
        file_handler.setFormatter(logging.Formatter(style="{", datefmt=log_date_format, fmt=log_line_format))
        root.addHandler(file_handler)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    # Load the configuration
    app_config = config.Config(args.config_file)
    setup_logging(app_config)

    try:
        services["app_config"] = app_config
        services["template_dir"] = dirname(abspath(args.config_file.name))
        services["caps"] = Caps.from_config(app_config).with_overrides(os.environ.get("ILPK_CAPS"))

        return args.handler(args)
    except ResourceCapError as err:
        logger.error("Resource cap reached: %(error)s", {"error": str(err)})
        return EXIT_CAP
    except IlpError as err:
        logger.error("%(error)s", {"error": str(err)})
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
