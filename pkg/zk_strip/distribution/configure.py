# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

"""Run configuration documents.

The native format is a flat sectioned key = value text:

    # comment
    name = conservation
    [grid]
    nx = 256
    width_L = pi
    [physics.damping]
    preset = none
    [weights]
    0.kind = exp_plus
    0.alpha = 0.1

Dotted keys nest, integer segments index lists, comma-separated values become
lists, and `pi`, `2*pi`, `pi/2` style constants are expanded. Values otherwise
stay strings and are coerced by the RunSpec models. YAML documents carrying
the same tree are accepted too.
"""

import math
import re
from pathlib import Path
from typing import Any, Dict, List

import yaml
from pydantic import ValidationError

from zk_strip.distribution.datatypes import RunSpec

_PI_PATTERN = re.compile(r"^\s*(?:([0-9.eE+-]+)\s*\*\s*)?pi(?:\s*/\s*([0-9.eE+-]+))?\s*$")
_KEY_PATTERN = re.compile(r"^[A-Za-z0-9_]+(\.[A-Za-z0-9_]+)*$")


class ConfigValidationError(ValueError):
    def __init__(self, errors: List[str]):
        self.errors = errors
        super().__init__("\n".join(errors))


def _expand_constant(value: str) -> str:
    match = _PI_PATTERN.match(value)
    if not match:
        return value
    factor = float(match.group(1)) if match.group(1) else 1.0
    divisor = float(match.group(2)) if match.group(2) else 1.0
    return repr(factor * math.pi / divisor)


def _parse_value(raw: str) -> Any:
    raw = raw.strip()
    if len(raw) >= 2 and raw[0] == raw[-1] and raw[0] in "\"'":
        return raw[1:-1]
    if "," in raw:
        return [_expand_constant(v.strip()) for v in raw.split(",") if v.strip()]
    return _expand_constant(raw)


def _strip_comment(line: str) -> str:
    for i, ch in enumerate(line):
        if ch == "#" and (i == 0 or line[i - 1].isspace()):
            return line[:i]
    return line


def _listify(node: Any, path: str, errors: List[str]) -> Any:
    if not isinstance(node, dict):
        return node
    converted = {k: _listify(v, f"{path}.{k}" if path else k, errors) for k, v in node.items()}
    if converted and all(k.isdigit() for k in converted):
        indices = sorted(int(k) for k in converted)
        if indices != list(range(len(indices))):
            errors.append(f"{path} list indices must run 0..{len(indices) - 1}, got {indices}")
            return []
        return [converted[str(i)] for i in indices]
    return converted


def parse_key_values(text: str) -> Dict[str, Any]:
    tree: Dict[str, Any] = {}
    errors: List[str] = []
    seen = set()
    section = ""
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = _strip_comment(line).strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section and not _KEY_PATTERN.match(section):
                errors.append(f"line {lineno}: invalid section name `{section}`")
            continue
        if "=" not in line:
            errors.append(f"line {lineno}: expected `key = value`, got `{line}`")
            continue
        key, value = line.split("=", 1)
        key = key.strip()
        if not _KEY_PATTERN.match(key):
            errors.append(f"line {lineno}: invalid key `{key}`")
            continue
        full_key = f"{section}.{key}" if section else key
        if full_key in seen:
            errors.append(f"line {lineno}: duplicate key {full_key}")
            continue
        seen.add(full_key)

        node = tree
        parts = full_key.split(".")
        for part in parts[:-1]:
            child = node.setdefault(part, {})
            if not isinstance(child, dict):
                errors.append(f"line {lineno}: {full_key} conflicts with a scalar value")
                break
            node = child
        else:
            if isinstance(node.get(parts[-1]), dict):
                errors.append(f"line {lineno}: {full_key} conflicts with a nested block")
            else:
                node[parts[-1]] = _parse_value(value)

    tree = _listify(tree, "", errors)
    if errors:
        raise ConfigValidationError(errors)
    return tree


def _format_error(error: Dict[str, Any]) -> str:
    loc = ".".join(str(p) for p in error["loc"])
    kind = error["type"]
    if kind == "missing":
        return f"missing required key {loc}"
    if kind == "extra_forbidden":
        return f"unknown key {loc}"
    message = error["msg"]
    if message.startswith("Value error, "):
        message = message[len("Value error, ") :]
    if not loc:
        return message
    if message.startswith("must "):
        return f"{loc} {message}"
    return f"{loc}: {message}"


def validate_config(tree: Dict[str, Any]) -> RunSpec:
    if not isinstance(tree, dict):
        raise ConfigValidationError(["configuration must be a mapping of blocks"])
    try:
        return RunSpec(**tree)
    except ValidationError as e:
        raise ConfigValidationError([_format_error(err) for err in e.errors()]) from None


def parse_config(text: str, fmt: str = "kv") -> RunSpec:
    if fmt == "yaml":
        try:
            tree = yaml.safe_load(text) or {}
        except yaml.YAMLError as e:
            raise ConfigValidationError([f"invalid YAML: {e}"]) from None
    elif fmt == "kv":
        tree = parse_key_values(text)
    else:
        raise ValueError(f"Unknown config format `{fmt}`")
    return validate_config(tree)


def load_config(path: Path) -> RunSpec:
    path = Path(path)
    fmt = "yaml" if path.suffix in (".yaml", ".yml") else "kv"
    return parse_config(path.read_text(), fmt)
