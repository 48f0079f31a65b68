# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

import argparse

from zk_strip.cli.subcommand import Subcommand


class Check(Subcommand):
    def __init__(self, subparsers: argparse._SubParsersAction):
        super().__init__()
        self.parser = subparsers.add_parser(
            "check",
            prog="zk check",
            description="Run the fast numerical invariant suite",
            formatter_class=argparse.RawTextHelpFormatter,
        )
        self._add_arguments()
        self.parser.set_defaults(func=self._run_check_cmd)

    def _add_arguments(self):
        self.parser.add_argument(
            "--quiet",
            action="store_true",
            default=False,
            help="Only print failing checks",
        )

    def _run_check_cmd(self, args: argparse.Namespace) -> int:
        from termcolor import colored

        from zk_strip.cli.table import print_table
        from zk_strip.distribution.runner import ExitCode
        from zk_strip.distribution.self_check import run_checks

        results = run_checks()
        rows = [
            [
                r.name,
                colored("PASS", "green") if r.passed else colored("FAIL", "red"),
                r.detail,
            ]
            for r in results
            if not (args.quiet and r.passed)
        ]
        if rows:
            print_table(rows, headers=["Check", "Result", "Detail"], separate_rows=False)
        if all(r.passed for r in results):
            return ExitCode.success
        return ExitCode.check_failed
