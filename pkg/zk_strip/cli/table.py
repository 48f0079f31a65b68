# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

import numbers
import re
import textwrap
from typing import Any, List, Optional, Sequence

from termcolor import cprint

ANSI_ESCAPE = re.compile(r"\x1B(?:[@-Z\\-_]|\[[0-?]*[ -/]*[@-~])")
MAX_COLUMN_WIDTH = 80


def strip_ansi_colors(text: str) -> str:
    return ANSI_ESCAPE.sub("", text)


def format_cell(value: Any, precision: int = 6) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, numbers.Integral):
        return str(value)
    if isinstance(value, numbers.Real):
        return f"{float(value):.{precision}g}"
    return str(value)


def _is_numeric(value: Any) -> bool:
    return isinstance(value, numbers.Real) and not isinstance(value, bool)


def format_row(row: Sequence[str], col_widths: Sequence[int], right_align: Sequence[bool]) -> str:
    def wrap(text, width):
        lines = []
        for line in text.split("\n"):
            if line.strip() == "":
                lines.append("")
            else:
                lines.extend(textwrap.wrap(line, width, break_long_words=False, replace_whitespace=False))
        return lines

    wrapped = [wrap(item, width) for item, width in zip(row, col_widths)]
    max_lines = max(len(subrow) for subrow in wrapped)

    lines = []
    for i in range(max_lines):
        line = []
        for cell_lines, width, right in zip(wrapped, col_widths, right_align):
            value = cell_lines[i] if i < len(cell_lines) else ""
            pad = " " * (width - len(strip_ansi_colors(value)))
            line.append(pad + value if right else value + pad)
        lines.append("| " + (" | ".join(line)) + " |")

    return "\n".join(lines)


def print_table(
    rows: List[List[Any]],
    headers: Optional[List[str]] = None,
    separate_rows: bool = False,
    precision: int = 6,
):
    """Print rows as a boxed table. Numeric cells are formatted to `precision`
    significant digits and right aligned."""
    if not rows:
        return

    right_align = [all(_is_numeric(x) for x in col if x is not None) for col in zip(*rows)]
    rows = [[format_cell(x, precision) for x in row] for row in rows]

    def itemlen(item):
        return max([len(line) for line in strip_ansi_colors(item).split("\n")])

    if not headers:
        col_widths = [max(itemlen(item) for item in col) for col in zip(*rows)]
    else:
        col_widths = [
            max(itemlen(header), max(itemlen(item) for item in col)) for header, col in zip(headers, zip(*rows))
        ]
    col_widths = [min(w, MAX_COLUMN_WIDTH) for w in col_widths]

    header_line = "+".join("-" * (width + 2) for width in col_widths)
    header_line = f"+{header_line}+"

    if headers:
        print(header_line)
        cprint(format_row(headers, col_widths, [False] * len(headers)), "white", attrs=["bold"])

    print(header_line)
    for row in rows:
        print(format_row(row, col_widths, right_align))
        if separate_rows:
            print(header_line)

    if not separate_rows:
        print(header_line)
