# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

from zk_strip.cli.subcommand import ConfigSubcommand


class ScenarioRun(ConfigSubcommand):
    mode = "scenario"
    help = """Run a decay scenario (C1-C5) and check its exponential bound.

Exits with 4 when the bound is violated and 3 on numerical blow-up."""

    def _summarize(self, out, code) -> None:
        import json

        from zk_strip.cli.table import print_table

        report_file = out / "report.json"
        if report_file.exists():
            report = json.loads(report_file.read_text())
            keys = [
                "scenario",
                "beta_used",
                "beta_source",
                "prefactor_used",
                "fitted_rate",
                "fit_r2",
                "observed_prefactor",
                "bound_margin",
                "bound_holds",
                "l2_monotone",
            ]
            print_table([[k, report.get(k)] for k in keys], headers=["Quantity", "Value"])
        super()._summarize(out, code)
