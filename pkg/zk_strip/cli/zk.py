# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

import argparse
import sys

from .check import Check
from .run import Run
from .scenario import ScenarioRun
from .sweep import Sweep


class ZKCLIParser:
    """Defines CLI parser for the zk strip simulator"""

    def __init__(self):
        self.parser = argparse.ArgumentParser(
            prog="zk",
            description="Pseudospectral Zakharov-Kuznetsov strip simulator",
            add_help=True,
        )

        # Default command is to print help
        self.parser.set_defaults(func=lambda args: self.parser.print_help())

        subparsers = self.parser.add_subparsers(title="subcommands")

        # Add sub-commands
        Run.create(subparsers)
        ScenarioRun.create(subparsers)
        Sweep.create(subparsers)
        Check.create(subparsers)

    def parse_args(self, argv=None) -> argparse.Namespace:
        return self.parser.parse_args(argv)

    def run(self, args: argparse.Namespace) -> int:
        return int(args.func(args) or 0)


def main(argv=None):
    parser = ZKCLIParser()
    args = parser.parse_args(argv)
    sys.exit(parser.run(args))


if __name__ == "__main__":
    main()
