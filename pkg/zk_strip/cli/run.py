# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

from zk_strip.cli.subcommand import ConfigSubcommand


class Run(ConfigSubcommand):
    mode = "run"
    help = """Integrate one configuration and write the diagnostics CSV (and optional snapshots)."""
