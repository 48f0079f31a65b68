# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

import argparse


class Subcommand:
    """All zk cli subcommands must inherit from this class"""

    def __init__(self, *args, **kwargs):
        pass

    @classmethod
    def create(cls, *args, **kwargs):
        return cls(*args, **kwargs)

    def _add_arguments(self):
        pass


class ConfigSubcommand(Subcommand):
    """Shared surface of the verbs that execute a run configuration."""

    mode: str = "run"
    help: str = ""

    def __init__(self, subparsers: argparse._SubParsersAction):
        super().__init__()
        self.parser = subparsers.add_parser(
            self.mode,
            prog=f"zk {self.mode}",
            description=self.help,
            formatter_class=argparse.RawTextHelpFormatter,
        )
        self._add_arguments()
        self.parser.set_defaults(func=self._run_config_cmd)

    def _add_arguments(self):
        self.parser.add_argument(
            "config",
            type=str,
            help="Path to the run configuration (key = value text, or .yaml)",
        )
        self.parser.add_argument(
            "--output-dir",
            type=str,
            default=None,
            help="Directory for artifacts. Defaults to output.directory or ~/.zk_strip/runs/<name>",
        )
        self.parser.add_argument(
            "--quiet",
            action="store_true",
            default=False,
            help="Only log warnings and errors",
        )
        self.parser.add_argument(
            "--snapshot-format",
            choices=["binary", "csv"],
            default=None,
            help="Format of field snapshots (overrides output.snapshot_format)",
        )
        self.parser.add_argument(
            "--seed",
            type=int,
            default=None,
            help="Seed for randomized initial data (overrides seed in the config)",
        )

    def _run_config_cmd(self, args: argparse.Namespace) -> int:
        import logging
        from pathlib import Path

        from termcolor import cprint

        from zk_strip.distribution.configure import ConfigValidationError, load_config
        from zk_strip.distribution.datatypes import SnapshotFormat
        from zk_strip.distribution.runner import ExitCode, resolve_output_dir, run_command, RunMode
        from zk_strip.providers.utils.telemetry.tracing import setup_logging

        setup_logging(logging.WARNING if args.quiet else logging.INFO)

        config_file = Path(args.config)
        if not config_file.exists():
            self.parser.error(f"File {str(config_file)} does not exist")
            return ExitCode.validation_failed

        if args.seed is not None and args.seed < 0:
            self.parser.error("--seed must be a non-negative integer")

        try:
            spec = load_config(config_file)
            if not args.quiet:
                cprint(f"Using config `{config_file}`", "green")
            out = resolve_output_dir(spec, Path(args.output_dir) if args.output_dir else None)
            code = run_command(
                spec,
                mode=RunMode(self.mode),
                output_dir=out,
                snapshot_format=SnapshotFormat(args.snapshot_format) if args.snapshot_format else None,
                seed=args.seed,
            )
            if not args.quiet:
                self._summarize(out, code)
            return code
        except ConfigValidationError as e:
            cprint(f"Invalid configuration `{config_file}`:", "red")
            for error in e.errors:
                cprint(f"  - {error}", "red")
            return ExitCode.validation_failed
        except ValueError as e:
            cprint(f"Invalid configuration `{config_file}`: {e}", "red")
            return ExitCode.validation_failed

    def _summarize(self, out, code) -> None:
        from termcolor import cprint

        color = "green" if code == 0 else "red"
        cprint(f"Artifacts written to {out} (exit code {int(code)})", color)
