# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

from zk_strip.cli.subcommand import ConfigSubcommand


class Sweep(ConfigSubcommand):
    mode = "sweep"
    help = """Fit decay rates over alpha and strip width L for a weighted scenario."""

    def _summarize(self, out, code) -> None:
        import json

        from zk_strip.cli.table import print_table

        report_file = out / "report.json"
        if report_file.exists():
            table = json.loads(report_file.read_text())
            rows = [[r["alpha"], r["width_L"], r["fitted_rate"], r["fit_r2"]] for r in table["rows"]]
            print_table(rows, headers=["alpha", "L", "fitted rate", "r2"])
            for trend in (table.get("alpha_trend"), table.get("width_trend")):
                if trend:
                    print(
                        f"rate vs {trend['variable']} (linear fit): slope {trend['slope']:.4g}, r2 {trend['r2']:.4g}"
                    )
        super()._summarize(out, code)
